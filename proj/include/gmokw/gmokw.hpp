#pragma once

#include "baselines.hpp"
#include "checks.hpp"
#include "data.hpp"
#include "error.hpp"
#include "expansions.hpp"
#include "family.hpp"
#include "inference.hpp"
#include "moments.hpp"
#include "numdiff.hpp"
#include "optimize.hpp"
#include "quadrature.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "shape.hpp"
#include "special.hpp"
