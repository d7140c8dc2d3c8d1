#include "topofield/quadrature.hpp"

#include <cmath>

namespace topofield {

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double fa, double m,
                    double fm, double b, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int initial_panels, int max_depth) {
    if (!(b > a)) return 0.0;
    const double width = (b - a) / initial_panels;
    const double panel_tol = tol / initial_panels;
    double total = 0.0;
    double x0 = a;
    double f0 = f(x0);
    for (int p = 0; p < initial_panels; ++p) {
        const double x1 = (p + 1 == initial_panels) ? b : a + (p + 1) * width;
        const double xm = 0.5 * (x0 + x1);
        const double fm = f(xm);
        const double f1 = f(x1);
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += simpson_step(f, x0, f0, xm, fm, x1, f1, whole, panel_tol, max_depth);
        x0 = x1;
        f0 = f1;
    }
    return total;
}

namespace {

double integrate_axes(const ScalarField& f, const Box& box, Coord& x, int axis, double tol) {
    if (axis == box.dim - 1) {
        return adaptive_simpson(
            [&](double t) {
                x[axis] = t;
                return f(x);
            },
            box.lo[axis], box.hi[axis], tol);
    }
    const double width = box.hi[axis] - box.lo[axis];
    // The inner integrals are done to a tolerance per unit outer length.
    const double inner_tol = tol / std::max(width, 1e-300) * 0.5;
    return adaptive_simpson(
        [&](double t) {
            Coord y = x;
            y[axis] = t;
            return integrate_axes(f, box, y, axis + 1, inner_tol);
        },
        box.lo[axis], box.hi[axis], 0.5 * tol);
}

}  // namespace

double integrate_box(const ScalarField& f, const Box& box, double tol) {
    for (int a = 0; a < box.dim; ++a)
        if (!(box.hi[a] > box.lo[a])) return 0.0;
    Coord x{};
    return integrate_axes(f, box, x, 0, tol);
}

double integrate_box_halfspace(const ScalarField& f, const Box& box, const Coord& normal,
                               double offset, double tol) {
    int inner = 0;
    for (int a = 1; a < box.dim; ++a)
        if (std::abs(normal[a]) > std::abs(normal[inner])) inner = a;
    if (normal[inner] == 0.0) return 0.0;

    // Reorder axes so the chosen axis is integrated innermost.
    std::array<int, max_dim> perm{};
    int p = 0;
    for (int a = 0; a < box.dim; ++a)
        if (a != inner) perm[p++] = a;
    perm[p] = inner;

    std::function<double(Coord&, int, double)> rec = [&](Coord& x, int level, double t) -> double {
        const int axis = perm[level];
        if (level == box.dim - 1) {
            double s = offset;
            for (int a = 0; a < box.dim; ++a)
                if (a != axis) s -= normal[a] * x[a];
            // normal[axis] * y > s
            double lo = box.lo[axis], hi = box.hi[axis];
            const double cut = s / normal[axis];
            if (normal[axis] > 0.0)
                lo = std::max(lo, cut);
            else
                hi = std::min(hi, cut);
            if (!(hi > lo)) return 0.0;
            return adaptive_simpson(
                [&](double y) {
                    x[axis] = y;
                    return f(x);
                },
                lo, hi, t);
        }
        const double width = box.hi[axis] - box.lo[axis];
        const double inner_tol = t / std::max(width, 1e-300) * 0.5;
        return adaptive_simpson(
            [&](double y) {
                Coord z = x;
                z[axis] = y;
                return rec(z, level + 1, inner_tol);
            },
            box.lo[axis], box.hi[axis], 0.5 * t);
    };
    for (int a = 0; a < box.dim; ++a)
        if (!(box.hi[a] > box.lo[a])) return 0.0;
    Coord x{};
    return rec(x, 0, tol);
}

}  // namespace topofield
