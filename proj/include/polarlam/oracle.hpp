#pragma once

// Independent ground truth for the closed-form bounds: eigenvalues of the
// 6x6 plate law, direct sampling of the strain energy, exhaustive angle-grid
// minima, and a deterministic random laminate generator.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "polarlam/angles.hpp"
#include "polarlam/bounds.hpp"
#include "polarlam/error.hpp"
#include "polarlam/lamination.hpp"
#include "polarlam/linalg.hpp"
#include "polarlam/minimize.hpp"
#include "polarlam/polar.hpp"

namespace polarlam {

// ---------------------------------------------------------------------------
// Symmetric eigenproblem
// ---------------------------------------------------------------------------

template <std::size_t N>
struct EigenResult {
    Vector<N> values{};   // ascending
    Matrix<N> vectors{};  // vectors[i] is the unit eigenvector of values[i]
    int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal norm drops below
/// `rel_tol` times the Frobenius norm.
template <std::size_t N>
EigenResult<N> jacobi_eigen(Matrix<N> a, double rel_tol = 1e-14, int max_sweeps = 100) {
    Matrix<N> v{};
    for (std::size_t i = 0; i < N; ++i) v[i][i] = 1.0;

    double frob = 0.0;
    for (const auto& row : a)
        for (double x : row) frob += x * x;
    frob = std::sqrt(frob);

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off += 2.0 * a[p][q] * a[p][q];
        if (std::sqrt(off) <= rel_tol * frob) break;

        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < N; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::array<std::size_t, N> order{};
    for (std::size_t i = 0; i < N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&a](std::size_t i, std::size_t j) { return a[i][i] < a[j][j]; });

    EigenResult<N> out;
    out.sweeps = sweep;
    for (std::size_t i = 0; i < N; ++i) {
        out.values[i] = a[order[i]][order[i]];
        for (std::size_t k = 0; k < N; ++k) out.vectors[i][k] = v[k][order[i]];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Positive definiteness of the plate law
// ---------------------------------------------------------------------------

struct OracleVerdict {
    double min_eigenvalue = 0.0;
    double normalized = 0.0;  // min_eigenvalue / max |K_ij|
    Verdict verdict = Verdict::Feasible;
    int iterations = 0;
};

inline OracleVerdict kelvin_pd_check(const PlateLaw& law, double tol = 1e-9) {
    if (!is_symmetric(law.K)) {
        throw Error(ErrorKind::ContractViolation, "plate law matrix is not symmetric");
    }
    const auto eig = jacobi_eigen(law.K);
    OracleVerdict out;
    out.min_eigenvalue = eig.values[0];
    out.iterations = eig.sweeps;
    const double scale = max_abs_entry(law.K);
    out.normalized = scale > 0.0 ? out.min_eigenvalue / scale : 0.0;
    if (out.normalized < -tol)
        out.verdict = Verdict::Infeasible;
    else if (out.normalized <= tol)
        out.verdict = Verdict::Marginal;
    return out;
}

inline OracleVerdict kelvin_pd_check(const LaminatePolar& lp, double tol = 1e-9) {
    return kelvin_pd_check(plate_law_matrix(lp), tol);
}

// ---------------------------------------------------------------------------
// Strain energy
// ---------------------------------------------------------------------------

/// Strain energy density written directly in the polar components of the
/// laminate and of the strain and curvature tensors.
inline double polar_energy(const LaminatePolar& lp, const Cartesian2& eps,
                           const Cartesian2& kap) noexcept {
    const Polar2 e = mohr_decompose(eps);
    const Polar2 k = mohr_decompose(kap);
    const double T0 = lp.T0(), T1 = lp.T1(), h = lp.h;
    const PolarElastic4 &A = lp.A, &B = lp.B, &D = lp.D;

    const double ext = 2.0 * T1 * e.t * e.t + (T0 + A.R0 * std::cos(4.0 * (A.Phi0 - e.phi))) * e.r * e.r +
                       4.0 * A.R1 * e.t * e.r * std::cos(2.0 * (A.Phi1 - e.phi));
    const double cpl = 2.0 * B.R1 * e.t * k.r * std::cos(2.0 * (B.Phi1 - k.phi)) +
                       2.0 * B.R1 * k.t * e.r * std::cos(2.0 * (B.Phi1 - e.phi)) +
                       B.R0 * e.r * k.r * std::cos(2.0 * (2.0 * B.Phi0 - e.phi - k.phi));
    const double bnd = 2.0 * T1 * k.t * k.t + (T0 + D.R0 * std::cos(4.0 * (D.Phi0 - k.phi))) * k.r * k.r +
                       4.0 * D.R1 * k.t * k.r * std::cos(2.0 * (D.Phi1 - k.phi));
    return 2.0 * h * ext + 2.0 * h * h * cpl + h * h * h / 6.0 * bnd;
}

/// Kelvin coordinates (eps11, eps22, sqrt2 eps12, kap11, kap22, sqrt2 kap12).
inline Vector<6> kelvin_state(const Cartesian2& eps, const Cartesian2& kap) noexcept {
    const double s2 = std::sqrt(2.0);
    return {eps.e11, eps.e22, s2 * eps.e12, kap.e11, kap.e22, s2 * kap.e12};
}

inline std::pair<Cartesian2, Cartesian2> from_kelvin_state(const Vector<6>& x) noexcept {
    const double s2 = std::sqrt(2.0);
    return {{x[0], x[2] / s2, x[1]}, {x[3], x[5] / s2, x[4]}};
}

/// Energy from the 4x4 form in the polar strain components.
inline double matrix_m_energy(const LaminatePolar& lp, const Cartesian2& eps,
                              const Cartesian2& kap) noexcept {
    const Polar2 e = mohr_decompose(eps);
    const Polar2 k = mohr_decompose(kap);
    const MatrixM mm = assemble_M(lp, e.phi, k.phi);
    return lp.h / 24.0 * quadratic_form(mm.m, Vector<4>{e.t, e.r, k.t, k.r});
}

inline double plate_law_energy(const PlateLaw& law, const Cartesian2& eps,
                               const Cartesian2& kap) noexcept {
    return 0.5 * quadratic_form(law.K, kelvin_state(eps, kap));
}

// ---------------------------------------------------------------------------
// Deterministic random numbers
// ---------------------------------------------------------------------------

/// Portable random stream: mt19937_64 is fully specified by the standard,
/// the distributions are not, so they are built here from raw bits.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() noexcept { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Integer in [lo, hi].
    long integer(long lo, long hi) noexcept {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(gen_() % span);
    }
    double normal() noexcept {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }

private:
    std::mt19937_64 gen_;
};

/// splitmix64 finalizer, used to derive independent per-sample seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct EnergySample {
    double min_energy = std::numeric_limits<double>::infinity();  // over unit Kelvin states
    double max_discrepancy = 0.0;  // largest relative spread among the three evaluations
    Vector<6> argmin{};
};

/// Minimum of the energy over `n` random unit states, with every sample
/// evaluated three ways (polar form, 4x4 form, 6x6 law).
inline EnergySample energy_min_sample(const LaminatePolar& lp, std::size_t n, std::uint64_t seed) {
    const PlateLaw law = plate_law_matrix(lp);
    const double scale = max_abs_entry(law.K);
    Rng rng(seed);
    EnergySample out;
    for (std::size_t s = 0; s < n; ++s) {
        Vector<6> x{};
        double norm = 0.0;
        for (double& c : x) {
            c = rng.normal();
            norm += c * c;
        }
        norm = std::sqrt(norm);
        for (double& c : x) c /= norm;

        const auto [eps, kap] = from_kelvin_state(x);
        const double u_law = plate_law_energy(law, eps, kap);
        const double u_polar = polar_energy(lp, eps, kap);
        const double u_m = matrix_m_energy(lp, eps, kap);
        const double spread = std::max({std::abs(u_law - u_polar), std::abs(u_law - u_m),
                                        std::abs(u_polar - u_m)});
        out.max_discrepancy = std::max(out.max_discrepancy, spread / scale);
        if (u_law < out.min_energy) {
            out.min_energy = u_law;
            out.argmin = x;
        }
    }
    return out;
}

/// Unit-norm state whose polar components follow the lowest eigenvector of
/// [M] at the given Mohr angles (absolute frame). Its energy is negative
/// whenever [M] is indefinite there.
inline Vector<6> violating_state(const LaminatePolar& lp, double phi_eps, double phi_kap) {
    const MatrixM mm = assemble_M(lp, phi_eps, phi_kap);
    const auto eig = jacobi_eigen(mm.m);
    Vector<4> v = eig.vectors[0];
    // r must be non-negative; flipping r alone is equivalent to rotating phi by pi/2.
    double pe = phi_eps, pk = phi_kap;
    if (v[1] < 0.0) {
        v[1] = -v[1];
        pe += pi / 2;
    }
    if (v[3] < 0.0) {
        v[3] = -v[3];
        pk += pi / 2;
    }
    const Cartesian2 eps = mohr_compose_at({v[0], v[1], pe}, 0.0);
    const Cartesian2 kap = mohr_compose_at({v[2], v[3], pk}, 0.0);
    Vector<6> x = kelvin_state(eps, kap);
    double norm = 0.0;
    for (double c : x) norm += c * c;
    norm = std::sqrt(norm);
    for (double& c : x) c /= norm;
    return x;
}

// ---------------------------------------------------------------------------
// Brute-force angle minima
// ---------------------------------------------------------------------------

enum class OracleExpression {
    ExtensionSecondMinor,  // second minor of [M] for A, one angle
    BendingSecondMinor,    // same for D
    CouplingThirdMinor,    // bracketed third-minor factor for A and B, one angle
    FullDeterminant,       // det[M] / (147456 h^4), two angles
};

/// Laplace (cofactor) expansion, independent of the elimination routine.
inline double cofactor_determinant(const Matrix<4>& m) noexcept {
    const auto det3 = [&m](std::size_t skip) {
        std::array<std::size_t, 3> c{};
        for (std::size_t j = 0, k = 0; j < 4; ++j)
            if (j != skip) c[k++] = j;
        const auto e = [&](std::size_t r, std::size_t i) { return m[r][c[i]]; };
        return e(1, 0) * (e(2, 1) * e(3, 2) - e(2, 2) * e(3, 1)) -
               e(1, 1) * (e(2, 0) * e(3, 2) - e(2, 2) * e(3, 0)) +
               e(1, 2) * (e(2, 0) * e(3, 1) - e(2, 1) * e(3, 0));
    };
    double d = 0.0;
    for (std::size_t j = 0; j < 4; ++j) d += (j % 2 == 0 ? 1.0 : -1.0) * m[0][j] * det3(j);
    return d;
}

/// The 4x4 matrix recovered from the polar energy by polarization, with
/// no reference to its closed-form entries.
inline Matrix<4> matrix_m_from_energy(const LaminatePolar& lp, double phi_eps, double phi_kap) {
    const auto energy = [&](const Vector<4>& v) {
        const Cartesian2 eps = mohr_compose_at({v[0], v[1], phi_eps}, 0.0);
        const Cartesian2 kap = mohr_compose_at({v[2], v[3], phi_kap}, 0.0);
        return polar_energy(lp, eps, kap);
    };
    const double f = 24.0 / lp.h;
    Matrix<4> m{};
    std::array<double, 4> diag{};
    for (std::size_t i = 0; i < 4; ++i) {
        Vector<4> e{};
        e[i] = 1.0;
        diag[i] = energy(e);
        m[i][i] = f * diag[i];
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            Vector<4> e{};
            e[i] = 1.0;
            e[j] = 1.0;
            m[i][j] = m[j][i] = 0.5 * f * (energy(e) - diag[i] - diag[j]);
        }
    }
    return m;
}

/// Value of one oracle expression in the absolute frame; the one-angle
/// expressions ignore `phi_kap`.
inline double oracle_expression(OracleExpression which, const LaminatePolar& lp, double phi_eps,
                                double phi_kap) {
    const double T0 = lp.T0(), T1 = lp.T1();
    const auto second = [&](const PolarElastic4& x, double phi) {
        const double c = std::cos(2.0 * (x.Phi1 - phi));
        return T1 * (T0 + x.R0 * std::cos(4.0 * (x.Phi0 - phi))) - 2.0 * x.R1 * x.R1 * c * c;
    };
    switch (which) {
        case OracleExpression::ExtensionSecondMinor: return second(lp.A, phi_eps);
        case OracleExpression::BendingSecondMinor: return second(lp.D, phi_eps);
        case OracleExpression::CouplingThirdMinor: {
            const double cb = std::cos(2.0 * (lp.B.Phi1 - phi_eps));
            return T0 * T1 + (second(lp.A, phi_eps) - T0 * T1) - 6.0 * lp.B.R1 * lp.B.R1 * cb * cb;
        }
        case OracleExpression::FullDeterminant:
            return cofactor_determinant(matrix_m_from_energy(lp, phi_eps, phi_kap)) /
                   (kDetMScale * std::pow(lp.h, 4));
    }
    return 0.0;
}

/// Exhaustive grid minimum (no refinement) over the expression's period.
inline double grid_min_expression(OracleExpression which, const LaminatePolar& lp, double grid_step) {
    const std::size_t n = grid_cells(pi / 2, grid_step);
    const double h = (pi / 2) / static_cast<double>(n);
    double best = std::numeric_limits<double>::infinity();
    if (which != OracleExpression::FullDeterminant) {
        for (std::size_t i = 0; i < n; ++i)
            best = std::min(best, oracle_expression(which, lp, static_cast<double>(i) * h, 0.0));
        return best;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            best = std::min(best, oracle_expression(which, lp, static_cast<double>(i) * h,
                                                    static_cast<double>(j) * h));
    return best;
}

/// Grid scan of a one-angle expression followed by golden-section polishing.
inline double refined_min_expression(OracleExpression which, const LaminatePolar& lp,
                                     double grid_step) {
    if (which == OracleExpression::FullDeterminant) {
        throw Error(ErrorKind::InvalidArgument, "refinement is only provided for one-angle expressions");
    }
    return minimize_periodic_1d([&](double phi) { return oracle_expression(which, lp, phi, 0.0); },
                                pi / 2, grid_step);
}

// ---------------------------------------------------------------------------
// Random laminates
// ---------------------------------------------------------------------------

enum class LaminateFamily { Generic, Palindrome, AlignedCrossPly, QuasiIsotropic60 };

struct PlyBounds {
    double t_min = 0.5;
    double t_max = 2.0;
    double r0_fraction = 0.95;  // R0 <= r0_fraction * T0
    double r1_fraction = 0.95;  // R1 <= r1_fraction * (largest admissible R1)
};

struct SampleSpec {
    std::size_t count = 1000;
    std::uint64_t seed = 1;
    PlyBounds ply_bounds{};
    int min_plies = 2;
    int max_plies = 16;
    std::vector<LaminateFamily> families{LaminateFamily::Generic, LaminateFamily::Palindrome,
                                         LaminateFamily::AlignedCrossPly,
                                         LaminateFamily::QuasiIsotropic60};
};

inline void validate(const SampleSpec& spec) {
    if (spec.count == 0) throw Error(ErrorKind::InvalidArgument, "sample count must be positive");
    if (spec.min_plies < 1 || spec.max_plies < spec.min_plies) {
        throw Error(ErrorKind::InvalidArgument, "ply count range is empty");
    }
    if (spec.families.empty()) throw Error(ErrorKind::InvalidArgument, "no laminate family selected");
    const PlyBounds& b = spec.ply_bounds;
    if (!(b.t_min > 0.0) || !(b.t_max >= b.t_min) || !(b.r0_fraction >= 0.0 && b.r0_fraction < 1.0) ||
        !(b.r1_fraction >= 0.0 && b.r1_fraction < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "ply bounds are not admissible");
    }
}

/// Random admissible ply. `diff` fixes Phi0 - Phi1 when given.
inline PolarElastic4 random_ply(Rng& rng, const PlyBounds& b, std::optional<double> diff = std::nullopt) {
    PolarElastic4 p;
    p.T0 = rng.uniform(b.t_min, b.t_max);
    p.T1 = rng.uniform(b.t_min, b.t_max);
    p.R0 = rng.uniform(0.0, b.r0_fraction * p.T0);
    const double d = diff ? *diff : rng.uniform(-pi / 4, pi / 4);
    const double r1max = std::sqrt(p.T1 * (p.T0 * p.T0 - p.R0 * p.R0) /
                                   (2.0 * (p.T0 - p.R0 * std::cos(4.0 * d))));
    p.R1 = rng.uniform(0.0, b.r1_fraction * r1max);
    p.Phi1 = rng.uniform(-pi / 2, pi / 2);
    p.Phi0 = normalize_phi0(p.Phi1 + d);
    p.Phi1 = normalize_phi1(p.Phi1);
    return p;
}

struct LaminateSample {
    Stacking stacking;
    LaminateFamily family = LaminateFamily::Generic;
};

/// The `index`-th laminate of the stream; independent of evaluation order.
inline LaminateSample sample_laminate(const SampleSpec& spec, std::size_t index) {
    Rng rng(mix_seed(spec.seed, index));
    LaminateSample out;
    out.family = spec.families[index % spec.families.size()];
    const int n = static_cast<int>(rng.integer(spec.min_plies, spec.max_plies));

    std::optional<double> diff;
    if (out.family == LaminateFamily::AlignedCrossPly) diff = rng.integer(0, 1) == 0 ? 0.0 : pi / 4;
    Stacking& s = out.stacking;
    s.ply = random_ply(rng, spec.ply_bounds, diff);
    s.h = 1.0;
    s.angles.resize(static_cast<std::size_t>(n));

    switch (out.family) {
        case LaminateFamily::Generic:
            for (double& a : s.angles) a = rng.uniform(-pi / 2, pi / 2);
            break;
        case LaminateFamily::Palindrome:
            for (std::size_t k = 0; k < s.angles.size(); ++k) {
                const std::size_t mirror = s.angles.size() - 1 - k;
                s.angles[k] = k <= mirror ? rng.uniform(-pi / 2, pi / 2) : s.angles[mirror];
            }
            break;
        case LaminateFamily::AlignedCrossPly: {
            // Aligned tensors need the ply axes on the laminate axes.
            s.ply.Phi1 = 0.0;
            s.ply.Phi0 = normalize_phi0(*diff);
            for (double& a : s.angles) a = rng.integer(0, 1) == 0 ? 0.0 : pi / 2;
            break;
        }
        case LaminateFamily::QuasiIsotropic60: {
            constexpr std::array<double, 3> set{0.0, pi / 3, -pi / 3};
            for (double& a : s.angles) a = set[static_cast<std::size_t>(rng.integer(0, 2))];
            break;
        }
    }
    return out;
}

inline std::vector<LaminateSample> random_laminates(const SampleSpec& spec) {
    validate(spec);
    std::vector<LaminateSample> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) out.push_back(sample_laminate(spec, i));
    return out;
}

/// Multiplies the coupling moduli by `factor`; used to push physical
/// laminates across the feasibility boundary.
inline LaminatePolar scale_coupling(LaminatePolar lp, double factor) noexcept {
    lp.B.R0 *= factor;
    lp.B.R1 *= factor;
    return lp;
}

inline constexpr std::string_view to_string(LaminateFamily f) noexcept {
    switch (f) {
        case LaminateFamily::Generic: return "generic";
        case LaminateFamily::Palindrome: return "palindrome";
        case LaminateFamily::AlignedCrossPly: return "aligned-cross-ply";
        case LaminateFamily::QuasiIsotropic60: return "quasi-isotropic-60";
    }
    return "unknown";
}

}  // namespace polarlam
