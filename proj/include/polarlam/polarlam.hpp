#pragma once

#include "polarlam/angles.hpp"
#include "polarlam/bounds.hpp"
#include "polarlam/error.hpp"
#include "polarlam/lamination.hpp"
#include "polarlam/linalg.hpp"
#include "polarlam/minimize.hpp"
#include "polarlam/oracle.hpp"
#include "polarlam/polar.hpp"
