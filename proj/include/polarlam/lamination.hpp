#pragma once

// Classical lamination theory for stacks of identical plies, expressed in
// polar form. The plate law is
//
//   {N}   [ h A        h^2/2 B  ] {eps}
//   {M} = [ h^2/2 B    h^3/12 D ] {kap}
//
// so A, B, D share the units of the ply stiffness.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "polarlam/angles.hpp"
#include "polarlam/error.hpp"
#include "polarlam/linalg.hpp"
#include "polarlam/polar.hpp"

namespace polarlam {

/// Identical-ply laminate. Ply angles are listed bottom-to-top, in radians.
struct Stacking {
    PolarElastic4 ply;
    std::vector<double> angles;
    double h = 1.0;
};

/// Polar sets of the extension (A), coupling (B) and bending (D) tensors.
/// A and D carry the ply's T0, T1; B has T0 = T1 = 0.
struct LaminatePolar {
    PolarElastic4 A;
    PolarElastic4 B;
    PolarElastic4 D;
    double h = 1.0;

    double T0() const noexcept { return A.T0; }
    double T1() const noexcept { return A.T1; }
};

/// Invariant angle differences and shift angles of a laminate.
/// Phi* are reduced to [-pi/4, pi/4), delta* to [-pi/2, pi/2).
struct DerivedAngles {
    double PhiA = 0.0;
    double PhiB = 0.0;
    double PhiD = 0.0;
    double deltaA = 0.0;
    double deltaD = 0.0;

    // Set when a modulus involved in the angle vanishes, so the value comes
    // from the angle convention rather than from the tensor.
    bool PhiA_conventional = false;
    bool PhiB_conventional = false;
    bool PhiD_conventional = false;
    bool deltaA_conventional = false;
    bool deltaD_conventional = false;
};

/// 6x6 plate law in Kelvin coordinates (eps11, eps22, sqrt2 eps12,
/// kap11, kap22, sqrt2 kap12); energy density is x^T K x / 2.
struct PlateLaw {
    Matrix<6> K{};
};

/// Through-thickness weights of ply k (1-based) in a stack of n plies.
struct PlyWeights {
    long a;
    long b;
    long d;
};

constexpr PlyWeights ply_weights(long k, long n) noexcept {
    const long m = 2 * k - n - 1;
    return {1, m, 3 * m * m + 1};
}

/// Precondition check for hand-built laminates: T0, T1 positive and shared
/// by A and D, B without isotropic part, non-negative moduli, h > 0.
inline void validate(const LaminatePolar& lp) {
    const auto fail = [](const char* what) { throw Error(ErrorKind::InvalidArgument, what); };
    if (!(lp.A.T0 > 0.0) || !(lp.A.T1 > 0.0)) fail("laminate requires T0 > 0 and T1 > 0");
    if (lp.D.T0 != lp.A.T0 || lp.D.T1 != lp.A.T1) fail("A and D must share T0 and T1");
    if (lp.B.T0 != 0.0 || lp.B.T1 != 0.0) fail("B must have T0 = T1 = 0");
    for (const PolarElastic4* t : {&lp.A, &lp.B, &lp.D}) {
        if (!(t->R0 >= 0.0) || !(t->R1 >= 0.0)) fail("polar moduli must be non-negative");
        if (!std::isfinite(t->Phi0) || !std::isfinite(t->Phi1)) fail("polar angles must be finite");
    }
    if (!(lp.h > 0.0) || !std::isfinite(lp.h)) fail("thickness must be positive");
}

inline void validate(const Stacking& s) {
    if (s.angles.empty()) throw Error(ErrorKind::EmptyStacking, "stacking has no plies");
    if (!(s.h > 0.0) || !std::isfinite(s.h)) {
        throw Error(ErrorKind::InvalidArgument, "thickness must be positive");
    }
    if (!check_layer_bounds(s.ply).admissible()) {
        throw Error(ErrorKind::InvalidMaterial, "ply violates the layer elastic bounds");
    }
}

inline LaminatePolar compute_abd_polar(const Stacking& s) {
    validate(s);
    const long n = static_cast<long>(s.angles.size());
    const std::complex<double> z0 = std::polar(s.ply.R0, 4.0 * s.ply.Phi0);
    const std::complex<double> z1 = std::polar(s.ply.R1, 2.0 * s.ply.Phi1);

    std::complex<double> a0, a1, b0, b1, d0, d1;
    for (long k = 1; k <= n; ++k) {
        const double delta = s.angles[static_cast<std::size_t>(k - 1)];
        const std::complex<double> e4 = std::polar(1.0, 4.0 * delta);
        const std::complex<double> e2 = std::polar(1.0, 2.0 * delta);
        const PlyWeights w = ply_weights(k, n);
        a0 += static_cast<double>(w.a) * e4;
        a1 += static_cast<double>(w.a) * e2;
        b0 += static_cast<double>(w.b) * e4;
        b1 += static_cast<double>(w.b) * e2;
        d0 += static_cast<double>(w.d) * e4;
        d1 += static_cast<double>(w.d) * e2;
    }
    const double nn = static_cast<double>(n);
    const double scale = modulus_scale(s.ply);

    LaminatePolar lp;
    lp.h = s.h;
    lp.A = polar_from_phases(s.ply.T0, s.ply.T1, z0 * a0 / nn, z1 * a1 / nn, scale);
    lp.B = polar_from_phases(0.0, 0.0, z0 * b0 / (nn * nn), z1 * b1 / (nn * nn), scale);
    lp.D = polar_from_phases(s.ply.T0, s.ply.T1, z0 * d0 / (nn * nn * nn), z1 * d1 / (nn * nn * nn),
                             scale);
    return lp;
}

inline DerivedAngles derived_angles(const LaminatePolar& lp) noexcept {
    const double zero = kVanishingModulus * std::max(modulus_scale(lp.A), modulus_scale(lp.D));
    const auto diff = [](const PolarElastic4& p) { return wrap_angle(p.Phi0 - p.Phi1, -pi / 4, pi / 2); };
    const auto shift = [](double a, double b) { return wrap_angle(a - b, -pi / 2, pi); };
    const auto vanishing = [zero](double r) { return r <= zero; };

    DerivedAngles da;
    da.PhiA = diff(lp.A);
    da.PhiB = diff(lp.B);
    da.PhiD = diff(lp.D);
    da.deltaA = shift(lp.B.Phi1, lp.A.Phi1);
    da.deltaD = shift(lp.B.Phi1, lp.D.Phi1);
    da.PhiA_conventional = vanishing(lp.A.R0) || vanishing(lp.A.R1);
    da.PhiB_conventional = vanishing(lp.B.R0) || vanishing(lp.B.R1);
    da.PhiD_conventional = vanishing(lp.D.R0) || vanishing(lp.D.R1);
    da.deltaA_conventional = vanishing(lp.B.R1) || vanishing(lp.A.R1);
    da.deltaD_conventional = vanishing(lp.B.R1) || vanishing(lp.D.R1);
    return da;
}

/// Kelvin-normalized 3x3 matrix of a plane elastic tensor.
inline Matrix<3> kelvin_matrix(const Cartesian4& c) noexcept {
    constexpr double s2 = std::numbers::sqrt2;
    return {{{c.c1111, c.c1122, s2 * c.c1112},
             {c.c1122, c.c2222, s2 * c.c1222},
             {s2 * c.c1112, s2 * c.c1222, 2.0 * c.c1212}}};
}

inline PlateLaw plate_law_matrix(const Cartesian4& A, const Cartesian4& B, const Cartesian4& D,
                                 double h) noexcept {
    const Matrix<3> ka = kelvin_matrix(A);
    const Matrix<3> kb = kelvin_matrix(B);
    const Matrix<3> kd = kelvin_matrix(D);
    const double wa = h, wb = 0.5 * h * h, wd = h * h * h / 12.0;
    PlateLaw law;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            law.K[i][j] = wa * ka[i][j];
            law.K[i][j + 3] = wb * kb[i][j];
            law.K[i + 3][j] = wb * kb[i][j];
            law.K[i + 3][j + 3] = wd * kd[i][j];
        }
    }
    return law;
}

inline PlateLaw plate_law_matrix(const LaminatePolar& lp) noexcept {
    return plate_law_matrix(polar4_to_cartesian_at(lp.A, 0.0), polar4_to_cartesian_at(lp.B, 0.0),
                            polar4_to_cartesian_at(lp.D, 0.0), lp.h);
}

/// Normalizes the angles of a hand-built laminate and applies the
/// vanishing-modulus angle convention against the ply scale max(T0, T1).
inline LaminatePolar normalize_laminate(LaminatePolar lp) noexcept {
    const double scale = std::max(std::abs(lp.A.T0), std::abs(lp.A.T1));
    for (PolarElastic4* t : {&lp.A, &lp.B, &lp.D}) {
        t->Phi0 = normalize_phi0(t->Phi0);
        t->Phi1 = normalize_phi1(t->Phi1);
        apply_angle_convention(*t, scale);
    }
    return lp;
}

/// Rotates every tensor of the laminate by `theta` (equivalently, adds
/// `theta` to every ply angle).
inline LaminatePolar rotate_laminate(const LaminatePolar& lp, double theta) noexcept {
    LaminatePolar out = lp;
    out.A = rotate_polar4(lp.A, -theta);
    out.B = rotate_polar4(lp.B, -theta);
    out.D = rotate_polar4(lp.D, -theta);
    return out;
}

}  // namespace polarlam
