// nlslab: experiment harness for the combined-nonlinearity Schrodinger
// equation i u_t + Delta u = |u|^(4/d) u - |u|^(p-1) u.
//
// Subcommands: ground-state, classify, evolve, verify, sweep.
// Exit codes: 0 success, 1 validation error, 2 solver failure,
//             3 verification failure.

#include <CLI11.hpp>

#include "nls/nls.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  bool quiet = false;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment configuration file (JSON)")
      ->required();
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_flag("--quiet", opts.quiet, "errors only");
  cmd->add_option("--threads", opts.threads, "worker threads (sweep)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the combined-nonlinearity NLS"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto* cmd_gs = app.add_subcommand("ground-state", "solve the ground-state profile");
  auto* cmd_classify = app.add_subcommand("classify", "variational set membership");
  auto* cmd_evolve = app.add_subcommand("evolve", "time evolution with diagnostics");
  auto* cmd_verify = app.add_subcommand("verify", "run the property-verification suite");
  auto* cmd_sweep = app.add_subcommand("sweep", "run a batch of evolve experiments");
  for (auto* c : {cmd_gs, cmd_classify, cmd_evolve, cmd_verify, cmd_sweep})
    add_common(c, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  if (opts.quiet) nls::log_level() = nls::LogLevel::error;

  try {
    nls::ExperimentConfig cfg = nls::parse_config_file(opts.config_path);
    if (cmd_gs->parsed()) {
      auto summary = nls::run_ground_state(cfg, opts.out_dir);
      if (!opts.quiet) std::printf("%s\n", summary.dump(2).c_str());
    } else if (cmd_classify->parsed()) {
      auto verdict = nls::run_classify(cfg, opts.out_dir);
      if (!opts.quiet) std::printf("%s\n", verdict.dump(2).c_str());
    } else if (cmd_evolve->parsed()) {
      auto summary = nls::run_evolve(cfg, opts.out_dir);
      if (!opts.quiet) std::printf("%s\n", summary.dump(2).c_str());
    } else if (cmd_verify->parsed()) {
      auto result = nls::run_verify(cfg, opts.out_dir);
      if (!opts.quiet) std::printf("%s\n", result.report.dump(2).c_str());
      if (!result.all_pass) return 3;
    } else if (cmd_sweep->parsed()) {
      auto summary = nls::run_sweep(cfg, opts.out_dir, opts.threads);
      if (!opts.quiet) std::printf("%s\n", summary.dump(2).c_str());
    }
  } catch (const nls::ConfigError& e) {
    nls::log(nls::LogLevel::error, e.what());
    return 1;
  } catch (const nls::InvalidParameter& e) {
    nls::log(nls::LogLevel::error, e.what());
    return 1;
  } catch (const nls::GridError& e) {
    nls::log(nls::LogLevel::error, e.what());
    return 1;
  } catch (const nls::SolverError& e) {
    nls::log(nls::LogLevel::error, e.what());
    return 2;
  } catch (const std::exception& e) {
    nls::log(nls::LogLevel::error, e.what());
    return 2;
  }
  return 0;
}
