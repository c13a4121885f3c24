#pragma once

// Global minimization of smooth doubly-periodic functions on a square torus:
// exhaustive grid scan, Nelder-Mead polishing from the best cell and its
// neighbours, and a Lipschitz lower bound on the true minimum.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "polarlam/error.hpp"

namespace polarlam {

struct PeriodicMinimum {
    double value = 0.0;        // best value found (<= every grid sample)
    double x = 0.0;            // argmin, reduced to [0, period)
    double y = 0.0;
    double grid_value = 0.0;   // best grid sample
    double lower_bound = 0.0;  // grid_value - L * step / sqrt(2)
    bool converged = true;     // false: refinement hit its iteration cap
};

/// Number of grid cells per period; `step` must divide `period`.
inline std::size_t grid_cells(double period, double step) {
    if (!(step > 0.0) || !(step <= period)) {
        throw Error(ErrorKind::InvalidArgument, "grid step must lie in (0, period]");
    }
    const double cells = period / step;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * cells) {
        throw Error(ErrorKind::InvalidArgument, "grid step must divide the period");
    }
    return static_cast<std::size_t>(rounded);
}

namespace detail {

struct SimplexResult {
    double value;
    double x;
    double y;
    bool converged;
};

template <class F>
SimplexResult nelder_mead_2d(F& f, double x0, double y0, double size, double xtol,
                             int max_iter = 4000) {
    struct Vertex {
        double x, y, f;
    };
    std::array<Vertex, 3> s{{{x0, y0, f(x0, y0)},
                             {x0 + size, y0, f(x0 + size, y0)},
                             {x0, y0 + size, f(x0, y0 + size)}}};
    const auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

    for (int it = 0; it < max_iter; ++it) {
        std::sort(s.begin(), s.end(), by_value);
        double diameter = 0.0;
        for (std::size_t i = 1; i < 3; ++i) {
            diameter = std::max({diameter, std::abs(s[i].x - s[0].x), std::abs(s[i].y - s[0].y)});
        }
        if (diameter <= xtol) return {s[0].f, s[0].x, s[0].y, true};

        const double cx = 0.5 * (s[0].x + s[1].x);
        const double cy = 0.5 * (s[0].y + s[1].y);
        const auto along = [&](double t) {
            const double x = cx + t * (s[2].x - cx);
            const double y = cy + t * (s[2].y - cy);
            return Vertex{x, y, f(x, y)};
        };

        const Vertex r = along(-1.0);
        if (r.f < s[0].f) {
            const Vertex e = along(-2.0);
            s[2] = e.f < r.f ? e : r;
        } else if (r.f < s[1].f) {
            s[2] = r;
        } else {
            const Vertex c = r.f < s[2].f ? along(-0.5) : along(0.5);
            if (c.f < std::min(r.f, s[2].f)) {
                s[2] = c;
            } else {
                for (std::size_t i = 1; i < 3; ++i) {
                    s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
                    s[i].y = s[0].y + 0.5 * (s[i].y - s[0].y);
                    s[i].f = f(s[i].x, s[i].y);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), by_value);
    return {s[0].f, s[0].x, s[0].y, false};
}

}  // namespace detail

/// Minimizes f over [0, period)^2. `lipschitz` bounds |grad f| and only
/// feeds the certified lower bound.
template <class F>
PeriodicMinimum minimize_periodic_2d(F&& f, double period, double step, double refine_tol,
                                     double lipschitz) {
    const std::size_t n = grid_cells(period, step);
    const double h = period / static_cast<double>(n);

    std::vector<double> values(n * n);
    std::size_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = f(static_cast<double>(i) * h, static_cast<double>(j) * h);
            values[i * n + j] = v;
            if (v < values[best]) best = i * n + j;
        }
    }

    PeriodicMinimum out;
    const std::size_t bi = best / n, bj = best % n;
    out.grid_value = values[best];
    out.value = out.grid_value;
    out.x = static_cast<double>(bi) * h;
    out.y = static_cast<double>(bj) * h;
    out.lower_bound = out.grid_value - lipschitz * h / std::numbers::sqrt2;

    for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
            const double x0 = (static_cast<double>(bi) + di) * h;
            const double y0 = (static_cast<double>(bj) + dj) * h;
            const auto r = detail::nelder_mead_2d(f, x0, y0, 0.5 * h, refine_tol);
            out.converged = out.converged && r.converged;
            if (r.value < out.value) {
                out.value = r.value;
                out.x = r.x;
                out.y = r.y;
            }
        }
    }
    const auto reduce = [period](double a) {
        double r = std::fmod(a, period);
        if (r < 0.0) r += period;
        return r >= period ? 0.0 : r;
    };
    out.x = reduce(out.x);
    out.y = reduce(out.y);
    return out;
}

/// One-dimensional exhaustive scan plus golden-section polishing around the
/// best sample.
template <class F>
double minimize_periodic_1d(F&& f, double period, double step) {
    const std::size_t n = grid_cells(period, step);
    const double h = period / static_cast<double>(n);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = f(static_cast<double>(i) * h);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    double a = (static_cast<double>(best_i) - 1.0) * h;
    double b = (static_cast<double>(best_i) + 1.0) * h;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return std::min({best, fc, fd});
}

}  // namespace polarlam
