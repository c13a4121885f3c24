#pragma once

// Polar representation of plane elastic tensors: conversions to and from
// Cartesian components, frame rotation, Mohr decomposition of second-rank
// tensors, symmetry classification and the admissibility bounds of a layer.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string_view>

#include "polarlam/angles.hpp"
#include "polarlam/error.hpp"

namespace polarlam {

/// Polar parameters of a fourth-rank plane elastic tensor.
/// Phi0 lives in [-pi/4, pi/4), Phi1 in [-pi/2, pi/2).
struct PolarElastic4 {
    double T0 = 0.0;
    double T1 = 0.0;
    double R0 = 0.0;
    double R1 = 0.0;
    double Phi0 = 0.0;
    double Phi1 = 0.0;
};

/// The six independent Cartesian components of a plane elastic tensor.
struct Cartesian4 {
    double c1111 = 0.0;
    double c1112 = 0.0;
    double c1122 = 0.0;
    double c1212 = 0.0;
    double c1222 = 0.0;
    double c2222 = 0.0;
};

/// Symmetric second-rank plane tensor (strain or curvature).
struct Cartesian2 {
    double e11 = 0.0;
    double e12 = 0.0;
    double e22 = 0.0;
};

/// Mohr-circle parameters of a second-rank tensor; phi in [-pi/2, pi/2).
struct Polar2 {
    double t = 0.0;
    double r = 0.0;
    double phi = 0.0;
};

struct EngineeringConstants {
    double E1 = 0.0;
    double E2 = 0.0;
    double G12 = 0.0;
    double nu12 = 0.0;
};

enum class SymmetryClass {
    OrdinaryOrthotropyK0,
    OrdinaryOrthotropyK1,
    R0Orthotropy,
    SquareSymmetry,
    Isotropy,
    GenericAnisotropy,
};

inline constexpr std::string_view to_string(SymmetryClass c) noexcept {
    switch (c) {
        case SymmetryClass::OrdinaryOrthotropyK0: return "ordinary-orthotropy-k0";
        case SymmetryClass::OrdinaryOrthotropyK1: return "ordinary-orthotropy-k1";
        case SymmetryClass::R0Orthotropy: return "r0-orthotropy";
        case SymmetryClass::SquareSymmetry: return "square-symmetry";
        case SymmetryClass::Isotropy: return "isotropy";
        case SymmetryClass::GenericAnisotropy: return "generic-anisotropy";
    }
    return "unknown";
}

inline constexpr double kDefaultClassifyTol = 1e-8;
inline constexpr double kDefaultAngleTol = 1e-8;

/// Relative threshold under which a polar modulus is treated as zero when
/// fixing its (undefined) angle.
inline constexpr double kVanishingModulus = 1e-12;

inline double normalize_phi0(double phi0) noexcept { return wrap_angle(phi0, -pi / 4, pi / 2); }
inline double normalize_phi1(double phi1) noexcept { return wrap_angle(phi1, -pi / 2, pi); }

/// Largest of |T0|, |T1|, R0, R1; the reference for relative comparisons.
inline double modulus_scale(const PolarElastic4& p) noexcept {
    return std::max({std::abs(p.T0), std::abs(p.T1), p.R0, p.R1});
}

/// Classification scale: the largest modulus, or R0 + R1 for a tensor whose
/// isotropic part vanishes (the coupling tensor).
inline double classification_scale(const PolarElastic4& p) noexcept {
    if (p.T0 == 0.0 && p.T1 == 0.0) return p.R0 + p.R1;
    return modulus_scale(p);
}

/// Fixes the angle of a vanishing modulus so that Phi0 - Phi1 = 0 (mod pi/2):
/// R1 = 0 takes Phi1 := Phi0, R0 = 0 takes Phi0 := Phi1, both zero gives 0.
inline void apply_angle_convention(PolarElastic4& p, double scale) noexcept {
    const double zero = kVanishingModulus * scale;
    const bool r0_zero = p.R0 <= zero;
    const bool r1_zero = p.R1 <= zero;
    if (r0_zero && r1_zero) {
        p.Phi0 = 0.0;
        p.Phi1 = 0.0;
    } else if (r1_zero) {
        p.Phi1 = normalize_phi1(p.Phi0);
    } else if (r0_zero) {
        p.Phi0 = normalize_phi0(p.Phi1);
    }
}

/// Builds a polar set from the two anisotropic phases given as complex
/// numbers z0 = R0 e^{4i Phi0}, z1 = R1 e^{2i Phi1}.
inline PolarElastic4 polar_from_phases(double T0, double T1, std::complex<double> z0,
                                       std::complex<double> z1, double scale) noexcept {
    PolarElastic4 p;
    p.T0 = T0;
    p.T1 = T1;
    p.R0 = std::abs(z0);
    p.R1 = std::abs(z1);
    p.Phi0 = p.R0 > 0.0 ? normalize_phi0(std::arg(z0) / 4.0) : 0.0;
    p.Phi1 = p.R1 > 0.0 ? normalize_phi1(std::arg(z1) / 2.0) : 0.0;
    apply_angle_convention(p, scale);
    return p;
}

inline Cartesian4 engineering_to_cartesian(const EngineeringConstants& ec) {
    if (!(ec.E1 > 0.0) || !(ec.E2 > 0.0) || !(ec.G12 > 0.0)) {
        throw Error(ErrorKind::InvalidMaterial, "engineering moduli E1, E2, G12 must be positive");
    }
    const double nu21 = ec.nu12 * ec.E2 / ec.E1;
    const double det = 1.0 - ec.nu12 * nu21;
    if (!(det > 0.0) || !std::isfinite(det)) {
        throw Error(ErrorKind::InvalidMaterial, "Poisson ratios violate 1 - nu12*nu21 > 0");
    }
    Cartesian4 c;
    c.c1111 = ec.E1 / det;
    c.c2222 = ec.E2 / det;
    c.c1122 = ec.nu12 * c.c2222;
    c.c1212 = ec.G12;
    return c;
}

inline PolarElastic4 cartesian_to_polar4(const Cartesian4& c) noexcept {
    const double T0 = (c.c1111 - 2.0 * c.c1122 + 4.0 * c.c1212 + c.c2222) / 8.0;
    const double T1 = (c.c1111 + 2.0 * c.c1122 + c.c2222) / 8.0;
    const std::complex<double> z0((c.c1111 - 2.0 * c.c1122 - 4.0 * c.c1212 + c.c2222) / 8.0,
                                  (c.c1112 - c.c1222) / 2.0);
    const std::complex<double> z1((c.c1111 - c.c2222) / 8.0, (c.c1112 + c.c1222) / 4.0);
    const double scale = std::max({std::abs(T0), std::abs(T1), std::abs(z0), std::abs(z1)});
    return polar_from_phases(T0, T1, z0, z1, scale);
}

/// Cartesian components in a frame rotated by `theta`.
inline Cartesian4 polar4_to_cartesian_at(const PolarElastic4& p, double theta) noexcept {
    const double a0 = 4.0 * (p.Phi0 - theta);
    const double a1 = 2.0 * (p.Phi1 - theta);
    const double c0 = std::cos(a0), s0 = std::sin(a0);
    const double c1 = std::cos(a1), s1 = std::sin(a1);
    Cartesian4 c;
    c.c1111 = p.T0 + 2.0 * p.T1 + p.R0 * c0 + 4.0 * p.R1 * c1;
    c.c1112 = p.R0 * s0 + 2.0 * p.R1 * s1;
    c.c1122 = -p.T0 + 2.0 * p.T1 - p.R0 * c0;
    c.c1212 = p.T0 - p.R0 * c0;
    c.c1222 = -p.R0 * s0 + 2.0 * p.R1 * s1;
    c.c2222 = p.T0 + 2.0 * p.T1 + p.R0 * c0 - 4.0 * p.R1 * c1;
    return c;
}

inline PolarElastic4 rotate_polar4(const PolarElastic4& p, double theta) noexcept {
    PolarElastic4 q = p;
    q.Phi0 = normalize_phi0(p.Phi0 - theta);
    q.Phi1 = normalize_phi1(p.Phi1 - theta);
    return q;
}

inline Polar2 mohr_decompose(const Cartesian2& l) noexcept {
    Polar2 out;
    out.t = 0.5 * (l.e11 + l.e22);
    const std::complex<double> z(0.5 * (l.e11 - l.e22), l.e12);
    out.r = std::abs(z);
    out.phi = out.r > 0.0 ? wrap_angle(std::arg(z) / 2.0, -pi / 2, pi) : 0.0;
    return out;
}

inline Cartesian2 mohr_compose_at(const Polar2& p, double theta) noexcept {
    const double a = 2.0 * (p.phi - theta);
    return {p.t + p.r * std::cos(a), p.r * std::sin(a), p.t - p.r * std::cos(a)};
}

inline SymmetryClass classify_symmetry(const PolarElastic4& p, double tol = kDefaultClassifyTol,
                                       double angle_tol = kDefaultAngleTol) noexcept {
    const double zero = tol * classification_scale(p);
    const bool r0_zero = p.R0 <= zero;
    const bool r1_zero = p.R1 <= zero;
    if (r0_zero && r1_zero) return SymmetryClass::Isotropy;
    if (r1_zero) return SymmetryClass::SquareSymmetry;
    if (r0_zero) return SymmetryClass::R0Orthotropy;
    const double diff = p.Phi0 - p.Phi1;
    if (grid_distance(diff, pi / 4) <= angle_tol) {
        return grid_index(diff, pi / 4, 2) == 0 ? SymmetryClass::OrdinaryOrthotropyK0
                                                : SymmetryClass::OrdinaryOrthotropyK1;
    }
    return SymmetryClass::GenericAnisotropy;
}

/// Admissibility margins of a single layer; all must be positive.
struct LayerMargins {
    double t0_minus_r0 = 0.0;   // T0 - R0
    double quartic = 0.0;       // T1 (T0^2 - R0^2) - 2 R1^2 (T0 - R0 cos 4(Phi0 - Phi1))
    double t0 = 0.0;
    double t1 = 0.0;
    double r0 = 0.0;
    double r1 = 0.0;

    bool admissible() const noexcept {
        return t0_minus_r0 > 0.0 && quartic > 0.0 && t0 > 0.0 && t1 > 0.0 && r0 >= 0.0 &&
               r1 >= 0.0;
    }
};

inline LayerMargins check_layer_bounds(const PolarElastic4& p) noexcept {
    LayerMargins m;
    m.t0_minus_r0 = p.T0 - p.R0;
    m.quartic = p.T1 * (p.T0 * p.T0 - p.R0 * p.R0) -
                2.0 * p.R1 * p.R1 * (p.T0 - p.R0 * std::cos(4.0 * (p.Phi0 - p.Phi1)));
    m.t0 = p.T0;
    m.t1 = p.T1;
    m.r0 = p.R0;
    m.r1 = p.R1;
    return m;
}

}  // namespace polarlam
