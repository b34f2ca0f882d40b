#pragma once

#include "arc_curve.hpp"
#include "catalog.hpp"
#include "commands.hpp"
#include "critical_points.hpp"
#include "curve_core.hpp"
#include "curve_spec.hpp"
#include "error.hpp"
#include "evolute.hpp"
#include "geometry_checks.hpp"
#include "interpolation.hpp"
#include "quadrature.hpp"
#include "regularity.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "svg.hpp"
#include "vec2.hpp"
