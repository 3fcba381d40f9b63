#pragma once

// Output sinks: trajectory CSV (17 significant digits, lossless doubles)
// and minimal SVG line plots for offline inspection.

#include <filesystem>
#include <fstream>

#include "nls/evolution.hpp"

namespace nls {

inline const char* kCsvHeader =
    "t, mass, energy, S_omega, K, H_omega, grad_norm_sq, Lp1_norm, Lmc_norm, "
    "V_R, V_R_prime, V_R_second, dt";

class TrajectoryCsvWriter {
 public:
  explicit TrajectoryCsvWriter(const std::string& path) : os_(path) {
    if (!os_) throw ConfigError("cannot open CSV output: " + path);
    os_ << kCsvHeader << "\n";
  }

  void write(const StepRecord& rec) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%.16e, %.16e, %.16e, %.16e, %.16e, %.16e, %.16e, %.16e, %.16e, "
                  "%.16e, %.16e, %.16e, %.16e\n",
                  rec.t, rec.bundle.mass, rec.bundle.energy, rec.bundle.action,
                  rec.bundle.K, rec.bundle.H_omega, rec.bundle.K_quad, rec.bundle.Lp1,
                  rec.bundle.L_mass_crit, rec.V, rec.Vp, rec.Vpp, rec.dt);
    os_ << buf;
  }

 private:
  std::ofstream os_;
};

// --------------------------------------------------------------------------
// SVG line plots. One chart, several named series.
// --------------------------------------------------------------------------

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

inline void write_svg_plot(const std::string& path, const std::string& title,
                           const std::vector<PlotSeries>& series) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b"};
  const double W = 860, H = 520, ml = 70, mr = 20, mt = 40, mb = 50;

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  double yspan = ymax - ymin;
  ymin -= 0.05 * yspan;
  ymax += 0.05 * yspan;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open SVG output: " + path);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
     << "' viewBox='0 0 " << W << " " << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16' "
        "font-family='sans-serif'>" << title << "</text>\n";
  os << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='"
     << H - mb << "' stroke='black'/>\n";
  os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
     << "' stroke='black'/>\n";
  char lab[64];
  for (int i = 0; i <= 4; ++i) {
    double fx = xmin + (xmax - xmin) * i / 4.0;
    double fy = ymin + (ymax - ymin) * i / 4.0;
    std::snprintf(lab, sizeof(lab), "%.3g", fx);
    os << "<text x='" << px(fx) << "' y='" << H - mb + 18
       << "' text-anchor='middle' font-size='11' font-family='sans-serif'>" << lab
       << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.3g", fy);
    os << "<text x='" << ml - 8 << "' y='" << py(fy) + 4
       << "' text-anchor='end' font-size='11' font-family='sans-serif'>" << lab
       << "</text>\n";
  }
  int ci = 0;
  for (const auto& s : series) {
    os << "<polyline fill='none' stroke='" << colors[ci % 6] << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      os << px(s.x[i]) << "," << py(s.y[i]) << " ";
    }
    os << "'/>\n";
    os << "<text x='" << W - mr - 10 << "' y='" << mt + 16 * (ci + 1)
       << "' text-anchor='end' font-size='12' font-family='sans-serif' fill='"
       << colors[ci % 6] << "'>" << s.name << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
}

// |u| along the first axis (the y=z=0 slice for d >= 2)
inline PlotSeries amplitude_slice(const Field& u, const std::string& name) {
  const CartesianGrid& g = u.cart();
  const int n = g.points_per_axis();
  PlotSeries s;
  s.name = name;
  s.x.resize(n);
  s.y.resize(n);
  std::size_t mid_off = 0;
  if (g.dim() == 2) mid_off = static_cast<std::size_t>(n / 2);
  if (g.dim() == 3) mid_off = static_cast<std::size_t>(n / 2) * n + n / 2;
  for (int i = 0; i < n; ++i) {
    s.x[i] = g.coord(i);
    std::size_t idx = (g.dim() == 1) ? i : static_cast<std::size_t>(i) * n * (g.dim() == 3 ? n : 1) + mid_off;
    s.y[i] = std::abs(u.values[idx]);
  }
  return s;
}

}  // namespace nls
