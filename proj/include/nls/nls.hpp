#pragma once

// Umbrella header.

#include "nls/aubin_talenti.hpp"
#include "nls/config.hpp"
#include "nls/cutoffs.hpp"
#include "nls/decoupling.hpp"
#include "nls/diagnostics.hpp"
#include "nls/evolution.hpp"
#include "nls/experiments.hpp"
#include "nls/field.hpp"
#include "nls/functionals.hpp"
#include "nls/grids.hpp"
#include "nls/groundstate.hpp"
#include "nls/io.hpp"
#include "nls/params.hpp"
#include "nls/quadrature.hpp"
#include "nls/random_fields.hpp"
#include "nls/rescale.hpp"
#include "nls/threshold.hpp"
#include "nls/transforms.hpp"
#include "nls/virial.hpp"
