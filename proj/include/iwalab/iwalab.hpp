#pragma once

#include "iwalab/duality.hpp"
#include "iwalab/eigenspaces.hpp"
#include "iwalab/error.hpp"
#include "iwalab/expr.hpp"
#include "iwalab/fe_checker.hpp"
#include "iwalab/io.hpp"
#include "iwalab/lambda_module.hpp"
#include "iwalab/matrix.hpp"
#include "iwalab/power_series.hpp"
#include "iwalab/residue.hpp"
