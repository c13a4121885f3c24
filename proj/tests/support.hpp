#pragma once

#include <algorithm>
#include <cmath>

#include "polarlam/polarlam.hpp"

namespace polarlam::test {

// Glass-epoxy layer used throughout.
inline PolarElastic4 glass_epoxy() { return {92.38, 86.97, 44.86, 43.82, 0.0, 0.0}; }

inline double rel_diff(double a, double b, double floor = 1e-300) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Angle difference reduced to (-period/2, period/2].
inline double angle_gap(double a, double b, double period) {
    double d = std::fmod(a - b, period);
    if (d > period / 2) d -= period;
    if (d <= -period / 2) d += period;
    return std::abs(d);
}

/// Random polar set, not necessarily admissible.
inline PolarElastic4 random_polar(Rng& rng, double scale = 2.0) {
    return {rng.uniform(0.1, scale), rng.uniform(0.1, scale), rng.uniform(0.0, scale),
            rng.uniform(0.0, scale), normalize_phi0(rng.uniform(-pi, pi)),
            normalize_phi1(rng.uniform(-pi, pi))};
}

/// Hand-built laminate with independent random moduli and angles. Coupling
/// moduli are drawn up to `coupling` times sqrt(T0 T1).
inline LaminatePolar random_laminate_polar(Rng& rng, double coupling = 0.6) {
    const double T0 = rng.uniform(0.5, 2.0), T1 = rng.uniform(0.5, 2.0);
    const double r1 = std::sqrt(T0 * T1);
    LaminatePolar lp;
    lp.h = rng.uniform(0.2, 3.0);
    lp.A = {T0, T1, rng.uniform(0.0, T0), rng.uniform(0.0, r1), rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
    lp.B = {0.0, 0.0, rng.uniform(0.0, coupling * T0), rng.uniform(0.0, coupling * r1),
            rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
    lp.D = {T0, T1, rng.uniform(0.0, T0), rng.uniform(0.0, r1), rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
    return normalize_laminate(lp);
}

inline const std::vector<double>& eighteen_ply_deg() {
    static const std::vector<double> s{0, 60, -60, -60, 60, 60, -60, 0, 60, 60, 0, -60, 0, -60, 0, 0, -60, 60};
    return s;
}

inline Stacking stacking_deg(const PolarElastic4& ply, const std::vector<double>& deg, double h = 1.0) {
    Stacking s;
    s.ply = ply;
    s.h = h;
    for (double d : deg) s.angles.push_back(deg_to_rad(d));
    return s;
}

}  // namespace polarlam::test
