#pragma once

#include <functional>

#include "topofield/grid.hpp"

namespace topofield {

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`. The interval is
/// first split into `initial_panels` panels so integrands concentrated away
/// from the sample points of a single panel are still resolved.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int initial_panels = 16, int max_depth = 40);

using ScalarField = std::function<double(const Coord&)>;

/// Tensorized adaptive Simpson over an axis-aligned box.
double integrate_box(const ScalarField& f, const Box& box, double tol);

/// Integral over box ∩ {y : normal·y > offset}. The innermost integration
/// axis is the one with the largest |normal| component, so the inner limits
/// are exact and the outer integrands stay continuous.
double integrate_box_halfspace(const ScalarField& f, const Box& box, const Coord& normal,
                               double offset, double tol);

}  // namespace topofield
