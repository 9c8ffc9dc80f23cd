#pragma once

#include "analysis.hpp"
#include "bspline.hpp"
#include "error.hpp"
#include "kernel.hpp"
#include "kernel_builder.hpp"
#include "kernel_io.hpp"
#include "moments.hpp"
#include "operators.hpp"
#include "power_series.hpp"
#include "quadrature.hpp"
#include "signal.hpp"
#include "summation.hpp"
