#pragma once

// Elastic bounds of a coupled laminate. Positivity of the plate energy for
// every (eps, kap) is equivalent to positive definiteness, for every pair of
// Mohr angles (phi_eps, phi_kap), of the 4x4 matrix [M] acting on
// v = (t_eps, r_eps, t_kap, r_kap). Its leading minors give:
//   M2 -> conditions on A alone,
//   M3 -> conditions coupling A and B,
//   M4 -> a trigonometric polynomial in (phi_eps, phi_kap) whose minimum
//         must be positive; found numerically except in special cases.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polarlam/angles.hpp"
#include "polarlam/error.hpp"
#include "polarlam/lamination.hpp"
#include "polarlam/linalg.hpp"
#include "polarlam/minimize.hpp"
#include "polarlam/polar.hpp"

namespace polarlam {

// ---------------------------------------------------------------------------
// Quadratic-form matrix and its minors
// ---------------------------------------------------------------------------

struct MatrixM {
    Matrix<4> m{};
    double phi_eps = 0.0;
    double phi_kap = 0.0;
    double h = 1.0;
};

inline MatrixM assemble_M(const LaminatePolar& lp, double phi_eps, double phi_kap) noexcept {
    const double T0 = lp.T0(), T1 = lp.T1(), h = lp.h;
    const PolarElastic4 &A = lp.A, &B = lp.B, &D = lp.D;

    const double m12 = 96.0 * A.R1 * std::cos(2.0 * (A.Phi1 - phi_eps));
    const double m14 = 48.0 * h * B.R1 * std::cos(2.0 * (B.Phi1 - phi_kap));
    const double m23 = 48.0 * h * B.R1 * std::cos(2.0 * (B.Phi1 - phi_eps));
    const double m24 = 24.0 * h * B.R0 * std::cos(2.0 * (2.0 * B.Phi0 - phi_eps - phi_kap));
    const double m34 = 8.0 * h * h * D.R1 * std::cos(2.0 * (D.Phi1 - phi_kap));

    MatrixM out;
    out.phi_eps = phi_eps;
    out.phi_kap = phi_kap;
    out.h = h;
    out.m = {{{96.0 * T1, m12, 0.0, m14},
              {m12, 48.0 * (T0 + A.R0 * std::cos(4.0 * (A.Phi0 - phi_eps))), m23, m24},
              {0.0, m23, 8.0 * h * h * T1, m34},
              {m14, m24, m34, 4.0 * h * h * (T0 + D.R0 * std::cos(4.0 * (D.Phi0 - phi_kap)))}}};
    return out;
}

struct SylvesterMinors {
    double M1 = 0.0;
    double M2 = 0.0;
    double M3 = 0.0;
    double M4 = 0.0;
};

inline SylvesterMinors sylvester_minors(const MatrixM& mm) noexcept {
    return {mm.m[0][0], determinant(leading_block<2>(mm.m)), determinant(leading_block<3>(mm.m)),
            determinant(mm.m)};
}

/// 96 * 48 * 8 * 4: det[M] / (kDetMScale h^4) is the M4 polynomial.
inline constexpr double kDetMScale = 147456.0;

// ---------------------------------------------------------------------------
// Closed-form margins
// ---------------------------------------------------------------------------

struct M2Margins {
    double m_a = 0.0;        // T0 - R0
    double m_b = 0.0;        // T1 (T0^2 - R0^2) - 2 R1^2 (T0 - R0 cos 4 Phi)
    double discarded = 0.0;  // T0 T1 - R1^2, implied by the two above
};

/// Conditions of the second minor for A (or, symmetrically, for D).
inline M2Margins m2_margins(const PolarElastic4& x) noexcept {
    const double T0 = x.T0, T1 = x.T1, R0 = x.R0, R1 = x.R1;
    const double phi = x.Phi0 - x.Phi1;
    return {T0 - R0, T1 * (T0 * T0 - R0 * R0) - 2.0 * R1 * R1 * (T0 - R0 * std::cos(4.0 * phi)),
            T0 * T1 - R1 * R1};
}

struct M3Margins {
    double m_a = 0.0;
    double m_b = 0.0;
};

/// Conditions of the third minor: `x` is A with delta = deltaA, or D with
/// delta = deltaD; `b` is the coupling tensor. The cross term depends on
/// Phi - delta: expanding the one-angle condition gives the sin 4a
/// coefficient 3 R1B^2 sin 4delta - T1 R0 sin 4Phi.
inline M3Margins m3_margins(const PolarElastic4& x, const PolarElastic4& b, double delta) noexcept {
    const double T0 = x.T0, T1 = x.T1, R0 = x.R0, R1 = x.R1;
    const double phi = x.Phi0 - x.Phi1;
    const double r1b2 = b.R1 * b.R1;
    const double r12 = R1 * R1;
    M3Margins out;
    out.m_a = T0 * T1 - r12 - 3.0 * r1b2;
    out.m_b = T1 * T1 * (T0 * T0 - R0 * R0) + 6.0 * T1 * R0 * r1b2 * std::cos(4.0 * (phi - delta)) -
              2.0 * r12 * (T1 * (T0 - R0 * std::cos(4.0 * phi)) - 3.0 * r1b2) -
              6.0 * r1b2 * (T0 * T1 + r12 * std::cos(4.0 * delta));
    return out;
}

// ---------------------------------------------------------------------------
// The M4 polynomial
// ---------------------------------------------------------------------------

/// Invariant inputs of the M4 polynomial.
struct M4Params {
    double T0, T1;
    double R0A, R1A, R0B, R1B, R0D, R1D;
    double PhiA, PhiB, PhiD, deltaA, deltaD;
};

inline M4Params m4_params(const LaminatePolar& lp, const DerivedAngles& da) noexcept {
    return {lp.T0(), lp.T1(), lp.A.R0, lp.A.R1, lp.B.R0, lp.B.R1, lp.D.R0, lp.D.R1,
            da.PhiA,  da.PhiB, da.PhiD, da.deltaA, da.deltaD};
}

/// The M4 polynomial, det[M] / (147456 h^4), with both Mohr angles measured
/// from the frame theta = Phi1^B.
inline double m4_value(const M4Params& p, double pe, double pk) noexcept {
    const double T0 = p.T0, T1 = p.T1;
    const double r1b2 = p.R1B * p.R1B;

    const double cA4 = std::cos(4.0 * (p.PhiA - p.deltaA - pe));
    const double cD4 = std::cos(4.0 * (p.PhiD - p.deltaD - pk));
    const double cA2 = std::cos(2.0 * (p.deltaA + pe));
    const double cD2 = std::cos(2.0 * (p.deltaD + pk));
    const double ce = std::cos(2.0 * pe);
    const double ck = std::cos(2.0 * pk);
    const double cb = std::cos(2.0 * (2.0 * p.PhiB - pe - pk));

    const double fA = T0 * T1 + T1 * p.R0A * cA4 - 2.0 * p.R1A * p.R1A * cA2 * cA2;
    const double fD = T0 * T1 + T1 * p.R0D * cD4 - 2.0 * p.R1D * p.R1D * cD2 * cD2;

    return fA * fD + 36.0 * r1b2 * r1b2 * ce * ce * ck * ck -
           6.0 * T0 * T1 * r1b2 * (ce * ce + ck * ck) - 3.0 * T1 * T1 * p.R0B * p.R0B * cb * cb -
           24.0 * p.R1A * r1b2 * p.R1D * cA2 * ce * cD2 * ck -
           6.0 * T1 * r1b2 * (p.R0A * cA4 * ck * ck + p.R0D * cD4 * ce * ce) +
           12.0 * T1 * p.R0B * p.R1B * cb * (p.R1A * cA2 * ck + p.R1D * cD2 * ce);
}

inline double m4_value(const LaminatePolar& lp, const DerivedAngles& da, double pe,
                       double pk) noexcept {
    return m4_value(m4_params(lp, da), pe, pk);
}

/// Upper bound on |grad M4| obtained term by term from the harmonic degrees.
inline double m4_lipschitz(const M4Params& p) noexcept {
    const double T0 = p.T0, T1 = p.T1, r1b2 = p.R1B * p.R1B;
    const double FA = T0 * T1 + T1 * p.R0A + 2.0 * p.R1A * p.R1A;
    const double FD = T0 * T1 + T1 * p.R0D + 2.0 * p.R1D * p.R1D;
    const double GA = 4.0 * T1 * p.R0A + 4.0 * p.R1A * p.R1A;
    const double GD = 4.0 * T1 * p.R0D + 4.0 * p.R1D * p.R1D;

    double le = GA * FD, lk = FA * GD;
    const double common = 72.0 * r1b2 * r1b2 + 12.0 * T0 * T1 * r1b2 +
                          6.0 * T1 * T1 * p.R0B * p.R0B + 96.0 * p.R1A * r1b2 * p.R1D +
                          48.0 * T1 * p.R0B * p.R1B * (p.R1A + p.R1D);
    le += common + 6.0 * T1 * r1b2 * (4.0 * p.R0A + 2.0 * p.R0D);
    lk += common + 6.0 * T1 * r1b2 * (2.0 * p.R0A + 4.0 * p.R0D);
    return std::hypot(le, lk);
}

struct M4Minimum {
    double value = 0.0;
    double phi_eps = 0.0;  // argmin, Phi1^B frame
    double phi_kap = 0.0;
    double grid_value = 0.0;
    double lower_bound = 0.0;
    bool fallback = false;
};

inline constexpr double kDefaultGridStep = pi / 360.0;
inline constexpr double kDefaultRefineTol = 1e-12;

template <class F>
M4Minimum minimize_m4_expression(F&& f, double lipschitz, double grid_step, double refine_tol) {
    if (!(refine_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "refine_tol must be positive");
    const PeriodicMinimum r = minimize_periodic_2d(f, pi / 2, grid_step, refine_tol, lipschitz);
    return {r.value, r.x, r.y, r.grid_value, r.lower_bound, !r.converged};
}

/// Global minimum of M4 over the torus [0, pi/2)^2.
inline M4Minimum minimize_m4(const LaminatePolar& lp, const DerivedAngles& da,
                             double grid_step = kDefaultGridStep,
                             double refine_tol = kDefaultRefineTol) {
    const M4Params p = m4_params(lp, da);
    return minimize_m4_expression([&p](double e, double k) { return m4_value(p, e, k); },
                                  m4_lipschitz(p), grid_step, refine_tol);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

enum class Verdict { Feasible, Marginal, Infeasible };

inline constexpr std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Feasible: return "feasible";
        case Verdict::Marginal: return "marginal";
        case Verdict::Infeasible: return "infeasible";
    }
    return "unknown";
}

enum class ConditionKind { Strict, NonStrict };

struct ConditionMargin {
    std::string name;
    double value = 0.0;
    double normalizer = 1.0;  // T0^p T1^q of the margin's polynomial degree
    ConditionKind kind = ConditionKind::Strict;
    bool active = true;       // inactive margins are informational only
    std::optional<std::pair<double, double>> argmin;

    double normalized() const noexcept { return value / normalizer; }
};

struct BoundsReport {
    std::vector<ConditionMargin> margins;
    Verdict verdict = Verdict::Feasible;
    std::string case_used;
    std::string variant;                 // "closed-form corners" or "numeric minimum"
    double scale = 1.0;                  // (T0 T1)^2
    double tol = 0.0;
    std::vector<std::string> snapped;    // moduli set to zero before evaluation
    std::optional<M4Minimum> minimum;    // when a numeric minimization ran
    std::optional<Verdict> cross_check;  // general verdict, verification mode

    const ConditionMargin* find(std::string_view name) const noexcept {
        for (const auto& m : margins)
            if (m.name == name) return &m;
        return nullptr;
    }

    /// Smallest normalized active margin among the strict conditions, or
    /// +inf if there are none.
    double worst_normalized() const noexcept {
        double w = std::numeric_limits<double>::infinity();
        for (const auto& m : margins)
            if (m.active && m.kind == ConditionKind::Strict) w = std::min(w, m.normalized());
        return w;
    }

    bool minimizer_fallback() const noexcept { return minimum && minimum->fallback; }
};

/// Infeasible if any active margin is below -tol (normalized); otherwise
/// marginal if a strict one is within tol of zero; feasible otherwise.
inline Verdict decide_verdict(const std::vector<ConditionMargin>& margins, double tol) noexcept {
    bool marginal = false;
    for (const auto& m : margins) {
        if (!m.active) continue;
        const double v = m.normalized();
        if (v < -tol || std::isnan(v)) return Verdict::Infeasible;
        if (m.kind == ConditionKind::Strict && v <= tol) marginal = true;
    }
    return marginal ? Verdict::Marginal : Verdict::Feasible;
}

struct CheckOptions {
    double tol = 1e-9;
    double angle_tol = kDefaultAngleTol;
    double grid_step = kDefaultGridStep;
    double refine_tol = kDefaultRefineTol;
};

// ---------------------------------------------------------------------------
// Aligned orthotropic configurations
// ---------------------------------------------------------------------------

/// Parities of an aligned configuration: Phi_X = k_X pi/4, delta_X = lam_X pi/2.
struct AlignedConfig {
    int kA = 0, kB = 0, kD = 0;
    int lamA = 0, lamD = 0;
};

inline constexpr double parity_sign(int k) noexcept { return k % 2 == 0 ? 1.0 : -1.0; }

/// Reads the aligned parities off the laminate, looking only at angle
/// combinations that multiply a non-vanishing modulus. Empty when some such
/// combination is off the grid by more than `angle_tol`.
inline std::optional<AlignedConfig> extract_aligned_config(const LaminatePolar& lp,
                                                           const DerivedAngles& da,
                                                           double zero_tol, double angle_tol) {
    const double zero = zero_tol * std::max(lp.T0(), lp.T1());
    const auto vanishing = [zero](double r) { return r <= zero; };
    AlignedConfig cfg;

    const auto side = [&](const PolarElastic4& x, double phi, double delta, int& k, int& lam) {
        if (!vanishing(x.R1)) {
            if (grid_distance(delta, pi / 2) > angle_tol) return false;
            lam = grid_index(delta, pi / 2, 2);
        }
        if (!vanishing(x.R0)) {
            if (grid_distance(phi - delta, pi / 4) > angle_tol) return false;
            k = grid_index(phi - delta, pi / 4, 2);
        }
        return true;
    };
    if (!side(lp.A, da.PhiA, da.deltaA, cfg.kA, cfg.lamA)) return std::nullopt;
    if (!side(lp.D, da.PhiD, da.deltaD, cfg.kD, cfg.lamD)) return std::nullopt;
    if (!vanishing(lp.B.R0)) {
        if (grid_distance(da.PhiB, pi / 4) > angle_tol) return std::nullopt;
        cfg.kB = grid_index(da.PhiB, pi / 4, 2);
    }
    return cfg;
}

/// M4 at the four points (0,0), (pi/4,0), (0,pi/4), (pi/4,pi/4) of an
/// aligned configuration.
inline std::array<double, 4> aligned_m4_corners(const LaminatePolar& lp, const AlignedConfig& c) noexcept {
    const double T0 = lp.T0(), T1 = lp.T1();
    const double R0A = lp.A.R0, R1A = lp.A.R1, R0B = lp.B.R0, R1B = lp.B.R1, R0D = lp.D.R0,
                 R1D = lp.D.R1;
    const double sA = parity_sign(c.kA), sB = parity_sign(c.kB), sD = parity_sign(c.kD);
    const double lA = parity_sign(c.lamA), lD = parity_sign(c.lamD);
    const double r1b2 = R1B * R1B;

    const double m1 = (T0 * T1 + sA * T1 * R0A - 2.0 * R1A * R1A) *
                          (T0 * T1 + sD * T1 * R0D - 2.0 * R1D * R1D) +
                      36.0 * r1b2 * r1b2 - 3.0 * T1 * T1 * R0B * R0B -
                      6.0 * T1 * r1b2 * (2.0 * T0 + sA * R0A + sD * R0D) +
                      12.0 * sB * T1 * R0B * R1B * (lA * R1A + lD * R1D) -
                      24.0 * lA * lD * R1A * r1b2 * R1D;
    const double m2 = T1 * (T0 - sA * R0A) * (T1 * (T0 + sD * R0D) - 2.0 * R1D * R1D - 6.0 * r1b2);
    const double m3 = T1 * (T0 - sD * R0D) * (T1 * (T0 + sA * R0A) - 2.0 * R1A * R1A - 6.0 * r1b2);
    const double m4 = T1 * T1 * ((T0 - sA * R0A) * (T0 - sD * R0D) - 3.0 * R0B * R0B);
    return {m1, m2, m3, m4};
}

/// Corner values when R1^B = 0 (square-symmetric coupling).
inline std::array<double, 4> square_b_m4_corners(const LaminatePolar& lp, const AlignedConfig& c) noexcept {
    const double T0 = lp.T0(), T1 = lp.T1();
    const double R0A = lp.A.R0, R1A = lp.A.R1, R0B = lp.B.R0, R0D = lp.D.R0, R1D = lp.D.R1;
    const double sA = parity_sign(c.kA), sD = parity_sign(c.kD);
    const double gA = T1 * (T0 + sA * R0A) - 2.0 * R1A * R1A;
    const double gD = T1 * (T0 + sD * R0D) - 2.0 * R1D * R1D;
    return {gA * gD - 3.0 * T1 * T1 * R0B * R0B, T1 * (T0 - sA * R0A) * gD,
            T1 * (T0 - sD * R0D) * gA,
            T1 * T1 * ((T0 - sA * R0A) * (T0 - sD * R0D) - 3.0 * R0B * R0B)};
}

/// Corner values, divided by T1^2, when R1^A = R1^B = R1^D = 0.
inline std::array<double, 4> full_square_m4_corners(const LaminatePolar& lp, const AlignedConfig& c) noexcept {
    const double T0 = lp.T0();
    const double R0A = lp.A.R0, R0B = lp.B.R0, R0D = lp.D.R0;
    const double sA = parity_sign(c.kA), sD = parity_sign(c.kD);
    return {(T0 + sA * R0A) * (T0 + sD * R0D) - 3.0 * R0B * R0B, (T0 - sA * R0A) * (T0 + sD * R0D),
            (T0 - sD * R0D) * (T0 + sA * R0A), (T0 - sA * R0A) * (T0 - sD * R0D) - 3.0 * R0B * R0B};
}

/// Corner values when R0^A = R0^B = R0^D = 0; the fourth is T0^2 T1^2.
inline std::array<double, 4> r0_m4_corners(const LaminatePolar& lp, const AlignedConfig& c) noexcept {
    const double T0 = lp.T0(), T1 = lp.T1(), t = T0 * T1;
    const double R1A = lp.A.R1, R1B = lp.B.R1, R1D = lp.D.R1;
    const double lA = parity_sign(c.lamA), lD = parity_sign(c.lamD);
    const double r1b2 = R1B * R1B;
    return {(t - 2.0 * R1A * R1A) * (t - 2.0 * R1D * R1D) -
                12.0 * r1b2 * (t - 3.0 * r1b2 + 2.0 * lA * lD * R1A * R1D),
            t * (t - 2.0 * R1D * R1D - 6.0 * r1b2), t * (t - 2.0 * R1A * R1A - 6.0 * r1b2), t * t};
}

/// Corner values for isotropic A = D with an orthotropic B; the second and
/// third coincide.
inline std::array<double, 4> isotropic_m4_corners(const LaminatePolar& lp) noexcept {
    const double T0 = lp.T0(), T1 = lp.T1(), t = T0 * T1;
    const double R0B = lp.B.R0, r1b2 = lp.B.R1 * lp.B.R1;
    const double m1 = T1 * T1 * (T0 * T0 - 3.0 * R0B * R0B) - 12.0 * r1b2 * (t - 3.0 * r1b2);
    const double m2 = t * (t - 6.0 * r1b2);
    return {m1, m2, m2, T1 * T1 * (T0 * T0 - 3.0 * R0B * R0B)};
}

inline constexpr std::array<std::pair<double, double>, 4> kAlignedCorners{
    {{0.0, 0.0}, {pi / 4, 0.0}, {0.0, pi / 4}, {pi / 4, pi / 4}}};

// ---------------------------------------------------------------------------
// Reduced M4 polynomials of the special cases
// ---------------------------------------------------------------------------

/// M4 when R1^B = 0.
inline double square_b_m4(const M4Params& p, double pe, double pk) noexcept {
    const double T0 = p.T0, T1 = p.T1;
    const double cA2 = std::cos(2.0 * (p.deltaA + pe)), cD2 = std::cos(2.0 * (p.deltaD + pk));
    const double cb = std::cos(2.0 * (2.0 * p.PhiB - pe - pk));
    const double fA = T0 * T1 + T1 * p.R0A * std::cos(4.0 * (p.PhiA - p.deltaA - pe)) -
                      2.0 * p.R1A * p.R1A * cA2 * cA2;
    const double fD = T0 * T1 + T1 * p.R0D * std::cos(4.0 * (p.PhiD - p.deltaD - pk)) -
                      2.0 * p.R1D * p.R1D * cD2 * cD2;
    return fA * fD - 3.0 * T1 * T1 * p.R0B * p.R0B * cb * cb;
}

/// M4 when R0^A = R0^B = R0^D = 0.
inline double r0_m4(const M4Params& p, double pe, double pk) noexcept {
    const double t = p.T0 * p.T1, r1b2 = p.R1B * p.R1B;
    const double cA2 = std::cos(2.0 * (p.deltaA + pe)), cD2 = std::cos(2.0 * (p.deltaD + pk));
    const double ce = std::cos(2.0 * pe), ck = std::cos(2.0 * pk);
    return (t - 2.0 * p.R1A * p.R1A * cA2 * cA2) * (t - 2.0 * p.R1D * p.R1D * cD2 * cD2) +
           36.0 * r1b2 * r1b2 * ce * ce * ck * ck - 6.0 * t * r1b2 * (ce * ce + ck * ck) -
           24.0 * p.R1A * r1b2 * p.R1D * cA2 * ce * cD2 * ck;
}

/// M4 when A and D are isotropic.
inline double isotropic_m4(const M4Params& p, double pe, double pk) noexcept {
    const double t = p.T0 * p.T1, r1b2 = p.R1B * p.R1B;
    const double ce = std::cos(2.0 * pe), ck = std::cos(2.0 * pk);
    const double cb = std::cos(2.0 * (2.0 * p.PhiB - pe - pk));
    return t * t + 36.0 * r1b2 * r1b2 * ce * ce * ck * ck - 6.0 * t * r1b2 * (ce * ce + ck * ck) -
           3.0 * p.T1 * p.T1 * p.R0B * p.R0B * cb * cb;
}

// ---------------------------------------------------------------------------
// Feasibility checks
// ---------------------------------------------------------------------------

namespace detail {

struct MarginBuilder {
    double T0, T1;
    std::vector<ConditionMargin> out;

    void add(std::string name, double value, double normalizer,
             ConditionKind kind = ConditionKind::Strict, bool active = true) {
        out.push_back({std::move(name), value, normalizer, kind, active, std::nullopt});
    }
    void nonneg(std::string name, double r) { add(std::move(name), r, T0, ConditionKind::NonStrict); }
    double deg1() const { return T0; }
    double deg2() const { return T0 * T1; }
    double deg3() const { return T0 * T0 * T1; }
    double deg4() const { return T0 * T0 * T1 * T1; }
};

inline BoundsReport finish(MarginBuilder&& b, std::string case_used, std::string variant,
                           double tol, std::vector<std::string> snapped = {}) {
    BoundsReport r;
    r.margins = std::move(b.out);
    r.case_used = std::move(case_used);
    r.variant = std::move(variant);
    r.scale = b.deg4();
    r.tol = tol;
    r.snapped = std::move(snapped);
    r.verdict = decide_verdict(r.margins, tol);
    return r;
}

inline void add_minimum(MarginBuilder& b, const M4Minimum& m, double normalizer) {
    b.add("m4_min", m.value, normalizer);
    b.out.back().argmin = std::make_pair(m.phi_eps, m.phi_kap);
}

struct Snapper {
    double zero;
    std::vector<std::string> names;

    bool vanishing(double r) const { return r <= zero; }
    /// Requires `r` to vanish and sets it to exactly zero.
    bool snap(double& r, const char* name) {
        if (!vanishing(r)) return false;
        if (r != 0.0) names.emplace_back(name);
        r = 0.0;
        return true;
    }
};

inline Snapper make_snapper(const LaminatePolar& lp, double tol) {
    return {tol * std::max(lp.T0(), lp.T1()), {}};
}

inline void reapply_conventions(LaminatePolar& lp) {
    const double scale = std::max(lp.T0(), lp.T1());
    apply_angle_convention(lp.A, scale);
    apply_angle_convention(lp.B, scale);
    apply_angle_convention(lp.D, scale);
}

template <class F>
M4Minimum minimize_reduced(F&& f, const M4Params& p, const CheckOptions& opt) {
    return minimize_m4_expression(f, m4_lipschitz(p), opt.grid_step, opt.refine_tol);
}

inline std::pair<double, std::size_t> min_of(const std::array<double, 4>& v, std::size_t count = 4) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < count; ++i)
        if (v[i] < v[best]) best = i;
    return {v[best], best};
}

inline void add_corner_min(MarginBuilder& b, const std::array<double, 4>& corners, double normalizer,
                           std::size_t count = 4) {
    for (std::size_t i = 0; i < 4; ++i) {
        b.add("m4_corner_" + std::to_string(i + 1), corners[i], normalizer, ConditionKind::Strict,
              false);
    }
    const auto [value, index] = min_of(corners, count);
    b.add("m4_corner_min", value, normalizer);
    b.out.back().argmin = kAlignedCorners[index];
}

}  // namespace detail

inline constexpr std::string_view kCaseGeneral = "general";
inline constexpr std::string_view kCaseUncoupled = "general (uncoupled reduction)";
inline constexpr std::string_view kCaseAligned = "aligned orthotropic";
inline constexpr std::string_view kCaseSquareB = "square-symmetric B";
inline constexpr std::string_view kCaseFullSquare = "fully square symmetric";
inline constexpr std::string_view kCaseR0 = "R0-orthotropic";
inline constexpr std::string_view kCaseIsotropic = "coupled isotropic";
inline constexpr std::string_view kVariantCorners = "closed-form corners";
inline constexpr std::string_view kVariantNumeric = "numeric minimum";
inline constexpr std::string_view kVariantClosed = "closed form";

/// The complete condition set for an arbitrary laminate. When B vanishes the
/// set reduces to the separate bounds on A and D.
inline BoundsReport feasibility_general(const LaminatePolar& input, const CheckOptions& opt = {}) {
    validate(input);
    LaminatePolar lp = input;
    detail::Snapper snap = detail::make_snapper(lp, opt.tol);
    detail::MarginBuilder b{lp.T0(), lp.T1(), {}};

    if (snap.vanishing(lp.B.R0) && snap.vanishing(lp.B.R1)) {
        snap.snap(lp.B.R0, "R0B");
        snap.snap(lp.B.R1, "R1B");
        const M2Margins a = m2_margins(lp.A), d = m2_margins(lp.D);
        b.nonneg("r0a_nonneg", lp.A.R0);
        b.nonneg("r1a_nonneg", lp.A.R1);
        b.add("a_t0_minus_r0", a.m_a, b.deg1());
        b.add("a_m2_bound", a.m_b, b.deg3());
        b.nonneg("r0d_nonneg", lp.D.R0);
        b.nonneg("r1d_nonneg", lp.D.R1);
        b.add("d_t0_minus_r0", d.m_a, b.deg1());
        b.add("d_m2_bound", d.m_b, b.deg3());
        return detail::finish(std::move(b), std::string(kCaseUncoupled),
                              std::string(kVariantClosed), opt.tol, std::move(snap.names));
    }

    const DerivedAngles da = derived_angles(lp);
    const M2Margins a2 = m2_margins(lp.A), d2 = m2_margins(lp.D);
    const M3Margins a3 = m3_margins(lp.A, lp.B, da.deltaA);
    const M3Margins d3 = m3_margins(lp.D, lp.B, da.deltaD);
    const M4Minimum m4 = minimize_m4(lp, da, opt.grid_step, opt.refine_tol);

    b.nonneg("r0a_nonneg", lp.A.R0);
    b.nonneg("r1a_nonneg", lp.A.R1);
    b.nonneg("r0b_nonneg", lp.B.R0);
    b.nonneg("r1b_nonneg", lp.B.R1);
    b.nonneg("r0d_nonneg", lp.D.R0);
    b.nonneg("r1d_nonneg", lp.D.R1);
    b.add("a_t0_minus_r0", a2.m_a, b.deg1());
    b.add("a_m2_bound", a2.m_b, b.deg3());
    b.add("ab_m3_linear", a3.m_a, b.deg2());
    b.add("ab_m3_quartic", a3.m_b, b.deg4());
    detail::add_minimum(b, m4, b.deg4());
    // Implied by the conditions above; kept for inspection.
    b.add("a_t0t1_minus_r1sq", a2.discarded, b.deg2(), ConditionKind::Strict, false);
    b.add("d_t0_minus_r0", d2.m_a, b.deg1(), ConditionKind::Strict, false);
    b.add("d_m2_bound", d2.m_b, b.deg3(), ConditionKind::Strict, false);
    b.add("db_m3_linear", d3.m_a, b.deg2(), ConditionKind::Strict, false);
    b.add("db_m3_quartic", d3.m_b, b.deg4(), ConditionKind::Strict, false);

    BoundsReport r = detail::finish(std::move(b), std::string(kCaseGeneral),
                                    std::string(kVariantNumeric), opt.tol, std::move(snap.names));
    r.minimum = m4;
    return r;
}

/// Closed-form set for aligned orthotropic A, B, D. Throws NotAligned when
/// the laminate is off the aligned pattern.
inline BoundsReport feasibility_aligned(const LaminatePolar& lp, const AlignedConfig& cfg,
                                        const CheckOptions& opt = {}) {
    validate(lp);
    const DerivedAngles da = derived_angles(lp);
    const auto found = extract_aligned_config(lp, da, opt.tol, opt.angle_tol);
    if (!found) throw Error(ErrorKind::NotAligned, "laminate is not aligned orthotropic");
    const double zero = opt.tol * std::max(lp.T0(), lp.T1());
    const auto same = [zero](int a, int b, double r) { return r <= zero || a == b; };
    if (!same(found->kA, cfg.kA, lp.A.R0) || !same(found->kD, cfg.kD, lp.D.R0) ||
        !same(found->kB, cfg.kB, lp.B.R0) || !same(found->lamA, cfg.lamA, lp.A.R1) ||
        !same(found->lamD, cfg.lamD, lp.D.R1)) {
        throw Error(ErrorKind::NotAligned, "aligned parities do not match the laminate");
    }

    detail::MarginBuilder b{lp.T0(), lp.T1(), {}};
    const double T0 = lp.T0(), T1 = lp.T1();
    const double sA = parity_sign(cfg.kA);
    const double r1a2 = lp.A.R1 * lp.A.R1, r1b2 = lp.B.R1 * lp.B.R1;
    b.nonneg("r0a_nonneg", lp.A.R0);
    b.nonneg("r1a_nonneg", lp.A.R1);
    b.nonneg("r0b_nonneg", lp.B.R0);
    b.nonneg("r1b_nonneg", lp.B.R1);
    b.nonneg("r0d_nonneg", lp.D.R0);
    b.nonneg("r1d_nonneg", lp.D.R1);
    b.add("a_t0_minus_r0", T0 - lp.A.R0, b.deg1());
    b.add("ab_m3_linear", T0 * T1 - r1a2 - 3.0 * r1b2, b.deg2());
    b.add("ab_aligned_m3", T1 * (T0 + sA * lp.A.R0) - 2.0 * r1a2 - 6.0 * r1b2, b.deg2());
    detail::add_corner_min(b, aligned_m4_corners(lp, cfg), b.deg4());
    return detail::finish(std::move(b), std::string(kCaseAligned), std::string(kVariantCorners),
                          opt.tol);
}

inline BoundsReport feasibility_aligned(const LaminatePolar& lp, const CheckOptions& opt = {}) {
    validate(lp);
    const auto cfg = extract_aligned_config(lp, derived_angles(lp), opt.tol, opt.angle_tol);
    if (!cfg) throw Error(ErrorKind::NotAligned, "laminate is not aligned orthotropic");
    return feasibility_aligned(lp, *cfg, opt);
}

enum class SpecialCase { SquareB, FullSquare, R0Orthotropic, CoupledIsotropic };

inline constexpr std::string_view to_string(SpecialCase c) noexcept {
    switch (c) {
        case SpecialCase::SquareB: return kCaseSquareB;
        case SpecialCase::FullSquare: return kCaseFullSquare;
        case SpecialCase::R0Orthotropic: return kCaseR0;
        case SpecialCase::CoupledIsotropic: return kCaseIsotropic;
    }
    return "unknown";
}

/// Whether the laminate carries the vanishing-moduli pattern of `c`.
inline bool matches_pattern(const LaminatePolar& lp, SpecialCase c, double tol) {
    const double zero = tol * std::max(lp.T0(), lp.T1());
    const auto z = [zero](double r) { return r <= zero; };
    switch (c) {
        case SpecialCase::SquareB: return z(lp.B.R1);
        case SpecialCase::FullSquare: return z(lp.A.R1) && z(lp.B.R1) && z(lp.D.R1);
        case SpecialCase::R0Orthotropic: return z(lp.A.R0) && z(lp.B.R0) && z(lp.D.R0);
        case SpecialCase::CoupledIsotropic:
            return z(lp.A.R0) && z(lp.A.R1) && z(lp.D.R0) && z(lp.D.R1);
    }
    return false;
}

/// Condition set of one of the special cases. Moduli of the defining
/// pattern are snapped to zero first; throws CaseNotApplicable when the
/// pattern does not hold.
inline BoundsReport feasibility_special(const LaminatePolar& input, SpecialCase c,
                                        const CheckOptions& opt = {}) {
    validate(input);
    if (!matches_pattern(input, c, opt.tol)) {
        throw Error(ErrorKind::CaseNotApplicable,
                    std::string("laminate does not match the ") + std::string(to_string(c)) +
                        " pattern");
    }
    LaminatePolar lp = input;
    detail::Snapper snap = detail::make_snapper(lp, opt.tol);
    switch (c) {
        case SpecialCase::SquareB: snap.snap(lp.B.R1, "R1B"); break;
        case SpecialCase::FullSquare:
            snap.snap(lp.A.R1, "R1A");
            snap.snap(lp.B.R1, "R1B");
            snap.snap(lp.D.R1, "R1D");
            break;
        case SpecialCase::R0Orthotropic:
            snap.snap(lp.A.R0, "R0A");
            snap.snap(lp.B.R0, "R0B");
            snap.snap(lp.D.R0, "R0D");
            break;
        case SpecialCase::CoupledIsotropic:
            snap.snap(lp.A.R0, "R0A");
            snap.snap(lp.A.R1, "R1A");
            snap.snap(lp.D.R0, "R0D");
            snap.snap(lp.D.R1, "R1D");
            break;
    }
    detail::reapply_conventions(lp);

    const DerivedAngles da = derived_angles(lp);
    const M4Params p = m4_params(lp, da);
    const auto cfg = extract_aligned_config(lp, da, opt.tol, opt.angle_tol);
    const double T0 = lp.T0(), T1 = lp.T1(), t = T0 * T1;
    const double r1a2 = lp.A.R1 * lp.A.R1, r1b2 = lp.B.R1 * lp.B.R1;
    detail::MarginBuilder b{T0, T1, {}};
    std::optional<M4Minimum> minimum;

    switch (c) {
        case SpecialCase::SquareB: {
            b.nonneg("r0a_nonneg", lp.A.R0);
            b.nonneg("r1a_nonneg", lp.A.R1);
            b.nonneg("r0b_nonneg", lp.B.R0);
            b.nonneg("r0d_nonneg", lp.D.R0);
            b.nonneg("r1d_nonneg", lp.D.R1);
            b.add("a_t0_minus_r0", T0 - lp.A.R0, b.deg1());
            if (cfg) {
                b.add("a_aligned_m2", T1 * (T0 + parity_sign(cfg->kA) * lp.A.R0) - 2.0 * r1a2,
                      b.deg2());
                detail::add_corner_min(b, square_b_m4_corners(lp, *cfg), b.deg4());
            } else {
                b.add("a_m2_bound", m2_margins(lp.A).m_b, b.deg3());
                minimum = detail::minimize_reduced(
                    [&p](double e, double k) { return square_b_m4(p, e, k); }, p, opt);
                detail::add_minimum(b, *minimum, b.deg4());
            }
            break;
        }
        case SpecialCase::FullSquare: {
            b.nonneg("r0a_nonneg", lp.A.R0);
            b.nonneg("r0b_nonneg", lp.B.R0);
            b.nonneg("r0d_nonneg", lp.D.R0);
            b.add("a_t0_minus_r0", T0 - lp.A.R0, b.deg1());
            if (cfg) {
                detail::add_corner_min(b, full_square_m4_corners(lp, *cfg), T0 * T0);
            } else {
                minimum = detail::minimize_reduced(
                    [&p](double e, double k) { return square_b_m4(p, e, k); }, p, opt);
                detail::add_minimum(b, *minimum, b.deg4());
            }
            break;
        }
        case SpecialCase::R0Orthotropic: {
            b.nonneg("r1a_nonneg", lp.A.R1);
            b.nonneg("r1b_nonneg", lp.B.R1);
            b.nonneg("r1d_nonneg", lp.D.R1);
            b.add("ab_m3_linear", t - r1a2 - 3.0 * r1b2, b.deg2());
            if (cfg) {
                b.add("ab_aligned_m3", t - 2.0 * r1a2 - 6.0 * r1b2, b.deg2());
                detail::add_corner_min(b, r0_m4_corners(lp, *cfg), b.deg4(), 3);
            } else {
                b.add("a_r0_m2", t - 2.0 * r1a2, b.deg2());
                b.add("ab_m3_quartic",
                      t * t - 2.0 * r1a2 * (t - 3.0 * r1b2) -
                          6.0 * r1b2 * (t + r1a2 * std::cos(4.0 * da.deltaA)),
                      b.deg4());
                minimum = detail::minimize_reduced(
                    [&p](double e, double k) { return r0_m4(p, e, k); }, p, opt);
                detail::add_minimum(b, *minimum, b.deg4());
            }
            break;
        }
        case SpecialCase::CoupledIsotropic: {
            b.nonneg("r0b_nonneg", lp.B.R0);
            b.nonneg("r1b_nonneg", lp.B.R1);
            b.add("iso_m3", t - 6.0 * r1b2, b.deg2());
            const bool orthotropic_b = lp.B.R0 == 0.0 || lp.B.R1 <= 0.0 ||
                                       grid_distance(da.PhiB, pi / 4) <= opt.angle_tol;
            if (orthotropic_b) {
                detail::add_corner_min(b, isotropic_m4_corners(lp), b.deg4());
            } else {
                minimum = detail::minimize_reduced(
                    [&p](double e, double k) { return isotropic_m4(p, e, k); }, p, opt);
                detail::add_minimum(b, *minimum, b.deg4());
            }
            break;
        }
    }

    const bool closed = !minimum.has_value();
    BoundsReport r = detail::finish(std::move(b), std::string(to_string(c)),
                                    std::string(closed ? kVariantCorners : kVariantNumeric),
                                    opt.tol, std::move(snap.names));
    r.minimum = minimum;
    return r;
}

/// Disagreement that is not explained by either verdict being marginal.
inline bool verdicts_conflict(Verdict a, Verdict b) noexcept {
    return a != b && a != Verdict::Marginal && b != Verdict::Marginal;
}

enum class CaseChoice { Uncoupled, CoupledIsotropic, FullSquare, R0Orthotropic, SquareB, Aligned, General };

/// The most specific condition set applicable to the laminate.
inline CaseChoice select_case(const LaminatePolar& lp, const CheckOptions& opt = {}) {
    const double zero = opt.tol * std::max(lp.T0(), lp.T1());
    if (lp.B.R0 <= zero && lp.B.R1 <= zero) return CaseChoice::Uncoupled;
    if (matches_pattern(lp, SpecialCase::CoupledIsotropic, opt.tol)) return CaseChoice::CoupledIsotropic;
    if (matches_pattern(lp, SpecialCase::FullSquare, opt.tol)) return CaseChoice::FullSquare;
    if (matches_pattern(lp, SpecialCase::R0Orthotropic, opt.tol)) return CaseChoice::R0Orthotropic;
    if (matches_pattern(lp, SpecialCase::SquareB, opt.tol)) return CaseChoice::SquareB;
    if (extract_aligned_config(lp, derived_angles(lp), opt.tol, opt.angle_tol)) return CaseChoice::Aligned;
    return CaseChoice::General;
}

/// Routes the laminate to the most specific applicable condition set. With
/// `verify`, the general set also runs and its verdict is stored in
/// `cross_check`.
inline BoundsReport dispatch_check(const LaminatePolar& lp, const CheckOptions& opt = {},
                                   bool verify = false) {
    validate(lp);
    BoundsReport r;
    switch (select_case(lp, opt)) {
        case CaseChoice::Uncoupled:
        case CaseChoice::General: r = feasibility_general(lp, opt); break;
        case CaseChoice::CoupledIsotropic:
            r = feasibility_special(lp, SpecialCase::CoupledIsotropic, opt);
            break;
        case CaseChoice::FullSquare: r = feasibility_special(lp, SpecialCase::FullSquare, opt); break;
        case CaseChoice::R0Orthotropic:
            r = feasibility_special(lp, SpecialCase::R0Orthotropic, opt);
            break;
        case CaseChoice::SquareB: r = feasibility_special(lp, SpecialCase::SquareB, opt); break;
        case CaseChoice::Aligned: r = feasibility_aligned(lp, opt); break;
    }
    if (verify) {
        r.cross_check = r.case_used == kCaseGeneral || r.case_used == kCaseUncoupled
                            ? r.verdict
                            : feasibility_general(lp, opt).verdict;
    }
    return r;
}

/// Same moduli, angles reset to the aligned configuration `cfg`, with
/// Phi1 of A on the reference axis.
inline LaminatePolar with_aligned_config(LaminatePolar lp, const AlignedConfig& cfg) {
    lp.A.Phi1 = 0.0;
    lp.A.Phi0 = cfg.kA * pi / 4;
    lp.B.Phi1 = cfg.lamA * pi / 2;
    lp.B.Phi0 = lp.B.Phi1 + cfg.kB * pi / 4;
    lp.D.Phi1 = lp.B.Phi1 - cfg.lamD * pi / 2;
    lp.D.Phi0 = lp.D.Phi1 + cfg.kD * pi / 4;
    return normalize_laminate(lp);
}

/// All 32 parity combinations.
inline std::vector<AlignedConfig> all_aligned_configs() {
    std::vector<AlignedConfig> out;
    for (int bits = 0; bits < 32; ++bits)
        out.push_back({bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1, (bits >> 4) & 1});
    return out;
}

}  // namespace polarlam
