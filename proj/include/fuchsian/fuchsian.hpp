#pragma once

// everything except the CLI
#include "fuchsian/accessory_solver.hpp"
#include "fuchsian/apparency.hpp"
#include "fuchsian/difference_ops.hpp"
#include "fuchsian/equation.hpp"
#include "fuchsian/json_io.hpp"
#include "fuchsian/klein.hpp"
#include "fuchsian/metrics.hpp"
#include "fuchsian/monodromy.hpp"
