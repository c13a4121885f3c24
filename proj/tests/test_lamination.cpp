#include <gtest/gtest.h>

#include "support.hpp"

using namespace polarlam;
using polarlam::test::angle_gap;
using polarlam::test::glass_epoxy;
using polarlam::test::stacking_deg;

namespace {

// Textbook Cartesian lamination: transformed reduced stiffness of each ply,
// integrated through the thickness with explicit ply coordinates.
struct CartesianAbd {
    Cartesian4 A, B, D;
};

Cartesian4 transformed(const Cartesian4& q, double theta) {
    const double m = std::cos(theta), s = std::sin(theta);
    const double m2 = m * m, s2 = s * s, ms = m * s;
    const double Q11 = q.c1111, Q22 = q.c2222, Q12 = q.c1122, Q66 = q.c1212;
    Cartesian4 out;
    out.c1111 = Q11 * m2 * m2 + 2 * (Q12 + 2 * Q66) * m2 * s2 + Q22 * s2 * s2;
    out.c2222 = Q11 * s2 * s2 + 2 * (Q12 + 2 * Q66) * m2 * s2 + Q22 * m2 * m2;
    out.c1122 = (Q11 + Q22 - 4 * Q66) * m2 * s2 + Q12 * (m2 * m2 + s2 * s2);
    out.c1212 = (Q11 + Q22 - 2 * Q12 - 2 * Q66) * m2 * s2 + Q66 * (m2 * m2 + s2 * s2);
    out.c1112 = (Q11 - Q12 - 2 * Q66) * m2 * ms + (Q12 - Q22 + 2 * Q66) * s2 * ms;
    out.c1222 = (Q11 - Q12 - 2 * Q66) * s2 * ms + (Q12 - Q22 + 2 * Q66) * m2 * ms;
    return out;
}

void accumulate(Cartesian4& acc, const Cartesian4& q, double w) {
    acc.c1111 += w * q.c1111;
    acc.c1112 += w * q.c1112;
    acc.c1122 += w * q.c1122;
    acc.c1212 += w * q.c1212;
    acc.c1222 += w * q.c1222;
    acc.c2222 += w * q.c2222;
}

// Orthotropic ply only (Phi0 = Phi1 = 0, the textbook principal frame).
CartesianAbd cartesian_lamination(const Cartesian4& q, const std::vector<double>& angles, double h) {
    const double n = static_cast<double>(angles.size());
    CartesianAbd out;
    for (std::size_t k = 0; k < angles.size(); ++k) {
        const double z0 = -h / 2 + h * static_cast<double>(k) / n;
        const double z1 = z0 + h / n;
        const Cartesian4 qb = transformed(q, angles[k]);
        accumulate(out.A, qb, (z1 - z0) / h);
        accumulate(out.B, qb, 2.0 * 0.5 * (z1 * z1 - z0 * z0) / (h * h));
        accumulate(out.D, qb, 12.0 * (z1 * z1 * z1 - z0 * z0 * z0) / 3.0 / (h * h * h));
    }
    return out;
}

void expect_cartesian_near(const Cartesian4& a, const Cartesian4& b, double abs_tol) {
    EXPECT_NEAR(a.c1111, b.c1111, abs_tol);
    EXPECT_NEAR(a.c1112, b.c1112, abs_tol);
    EXPECT_NEAR(a.c1122, b.c1122, abs_tol);
    EXPECT_NEAR(a.c1212, b.c1212, abs_tol);
    EXPECT_NEAR(a.c1222, b.c1222, abs_tol);
    EXPECT_NEAR(a.c2222, b.c2222, abs_tol);
}

void expect_same_tensor(const PolarElastic4& a, const PolarElastic4& b, double abs_tol) {
    expect_cartesian_near(polar4_to_cartesian_at(a, 0.0), polar4_to_cartesian_at(b, 0.0), abs_tol);
}

ErrorKind error_kind(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::ContractViolation;
}

}  // namespace

TEST(PlyWeights, Identities) {
    for (long n = 1; n <= 40; ++n) {
        long sa = 0, sb = 0, sd = 0;
        for (long k = 1; k <= n; ++k) {
            const PlyWeights w = ply_weights(k, n);
            EXPECT_EQ(w.a, 1);
            EXPECT_EQ(w.b, -ply_weights(n + 1 - k, n).b);
            sa += w.a;
            sb += w.b;
            sd += w.d;
        }
        EXPECT_EQ(sa, n);
        EXPECT_EQ(sb, 0);
        EXPECT_EQ(sd, n * n * n);
    }
}

TEST(PlyWeights, SmallStacks) {
    EXPECT_EQ(ply_weights(1, 2).b, -1);
    EXPECT_EQ(ply_weights(2, 2).b, 1);
    EXPECT_EQ(ply_weights(1, 2).d, 4);
    EXPECT_EQ(ply_weights(2, 3).b, 0);
    EXPECT_EQ(ply_weights(2, 3).d, 1);
}

TEST(Lamination, UnidirectionalReproducesPly) {
    const LaminatePolar lp = compute_abd_polar(stacking_deg(glass_epoxy(), {0, 0, 0, 0}));
    expect_same_tensor(lp.A, glass_epoxy(), 1e-12);
    expect_same_tensor(lp.D, glass_epoxy(), 1e-12);
    EXPECT_NEAR(lp.B.R0, 0.0, 1e-12);
    EXPECT_NEAR(lp.B.R1, 0.0, 1e-12);
}

TEST(Lamination, TwoPlyCrossPly) {
    const PolarElastic4 p = glass_epoxy();
    const LaminatePolar lp = compute_abd_polar(stacking_deg(p, {0, 90}));
    // Hand evaluation: both plies carry the same R0 phase, R1 phases cancel in A and D.
    EXPECT_NEAR(lp.A.R0, p.R0, 1e-12);
    EXPECT_NEAR(lp.A.R1, 0.0, 1e-12);
    EXPECT_NEAR(lp.D.R0, p.R0, 1e-12);
    EXPECT_NEAR(lp.D.R1, 0.0, 1e-12);
    EXPECT_NEAR(lp.B.R0, 0.0, 1e-12);
    EXPECT_NEAR(lp.B.R1, p.R1 / 2, 1e-12);
    EXPECT_EQ(classify_symmetry(lp.A), SymmetryClass::SquareSymmetry);
    EXPECT_EQ(classify_symmetry(lp.D), SymmetryClass::SquareSymmetry);
}

TEST(Lamination, EighteenPlyIsIsotropicInExtensionAndBending) {
    const LaminatePolar lp = compute_abd_polar(stacking_deg(glass_epoxy(), test::eighteen_ply_deg()));
    EXPECT_NEAR(lp.A.R0, 0.0, 1e-12);
    EXPECT_NEAR(lp.A.R1, 0.0, 1e-12);
    EXPECT_NEAR(lp.D.R0, 0.0, 1e-12);
    EXPECT_NEAR(lp.D.R1, 0.0, 1e-12);
    EXPECT_EQ(classify_symmetry(lp.A), SymmetryClass::Isotropy);
    EXPECT_EQ(classify_symmetry(lp.D), SymmetryClass::Isotropy);
    // Coupling survives: regression values of the isotropic-coupled case.
    EXPECT_NEAR(lp.B.R0, 3.3573987320541909, 1e-9);
    EXPECT_NEAR(lp.B.R1, 3.2795633624301064, 1e-9);
}

TEST(Lamination, MatchesCartesianTextbookForm) {
    Rng rng(11);
    const EngineeringConstants ec{181.0, 10.3, 7.17, 0.28};
    const Cartesian4 q = engineering_to_cartesian(ec);
    const PolarElastic4 ply = cartesian_to_polar4(q);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = static_cast<int>(rng.integer(1, 12));
        std::vector<double> deg;
        for (int i = 0; i < n; ++i) deg.push_back(rng.uniform(-90.0, 90.0));
        const double h = rng.uniform(0.1, 5.0);
        const LaminatePolar lp = compute_abd_polar(stacking_deg(ply, deg, h));
        std::vector<double> rad;
        for (double d : deg) rad.push_back(deg_to_rad(d));
        const CartesianAbd ref = cartesian_lamination(q, rad, h);
        expect_cartesian_near(polar4_to_cartesian_at(lp.A, 0.0), ref.A, 1e-10);
        expect_cartesian_near(polar4_to_cartesian_at(lp.B, 0.0), ref.B, 1e-10);
        expect_cartesian_near(polar4_to_cartesian_at(lp.D, 0.0), ref.D, 1e-10);
    }
}

TEST(Lamination, RotatingAllPliesRotatesTensors) {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> deg;
        const int n = static_cast<int>(rng.integer(2, 10));
        for (int i = 0; i < n; ++i) deg.push_back(rng.uniform(-90.0, 90.0));
        const double theta = rng.uniform(-180.0, 180.0);
        std::vector<double> shifted;
        for (double d : deg) shifted.push_back(d + theta);
        const LaminatePolar a = rotate_laminate(compute_abd_polar(stacking_deg(glass_epoxy(), deg)), deg_to_rad(theta));
        const LaminatePolar b = compute_abd_polar(stacking_deg(glass_epoxy(), shifted));
        expect_same_tensor(a.A, b.A, 1e-10);
        expect_same_tensor(a.B, b.B, 1e-10);
        expect_same_tensor(a.D, b.D, 1e-10);
    }
}

TEST(Lamination, ReversalFlipsCouplingOnly) {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> deg;
        const int n = static_cast<int>(rng.integer(2, 10));
        for (int i = 0; i < n; ++i) deg.push_back(rng.uniform(-90.0, 90.0));
        const std::vector<double> rev(deg.rbegin(), deg.rend());
        const LaminatePolar a = compute_abd_polar(stacking_deg(glass_epoxy(), deg));
        const LaminatePolar b = compute_abd_polar(stacking_deg(glass_epoxy(), rev));
        expect_same_tensor(a.A, b.A, 1e-10);
        expect_same_tensor(a.D, b.D, 1e-10);
        EXPECT_NEAR(a.B.R0, b.B.R0, 1e-10);
        EXPECT_NEAR(a.B.R1, b.B.R1, 1e-10);
        const Cartesian4 ca = polar4_to_cartesian_at(a.B, 0.0), cb = polar4_to_cartesian_at(b.B, 0.0);
        EXPECT_NEAR(ca.c1111, -cb.c1111, 1e-10);
        EXPECT_NEAR(ca.c1212, -cb.c1212, 1e-10);
    }
}

TEST(Lamination, PalindromesAreUncoupled) {
    Rng rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> deg;
        const int half = static_cast<int>(rng.integer(1, 6));
        for (int i = 0; i < half; ++i) deg.push_back(rng.uniform(-90.0, 90.0));
        std::vector<double> full(deg);
        if (rng.integer(0, 1) == 1) full.push_back(rng.uniform(-90.0, 90.0));
        full.insert(full.end(), deg.rbegin(), deg.rend());
        const LaminatePolar lp = compute_abd_polar(stacking_deg(glass_epoxy(), full));
        EXPECT_NEAR(lp.B.R0, 0.0, 1e-12);
        EXPECT_NEAR(lp.B.R1, 0.0, 1e-12);
    }
}

TEST(Lamination, ThicknessOnlyScalesPlateLaw) {
    const std::vector<double> deg{0, 45, -45, 90, 30};
    const LaminatePolar a = compute_abd_polar(stacking_deg(glass_epoxy(), deg, 1.0));
    const LaminatePolar b = compute_abd_polar(stacking_deg(glass_epoxy(), deg, 2.5));
    expect_same_tensor(a.A, b.A, 0.0);
    expect_same_tensor(a.B, b.B, 0.0);
    expect_same_tensor(a.D, b.D, 0.0);
    // K(h) = S K(1) S with S = diag(sqrt h, sqrt h, sqrt h, h^1.5, h^1.5, h^1.5).
    const PlateLaw ka = plate_law_matrix(a), kb = plate_law_matrix(b);
    const double h = 2.5;
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            const double si = i < 3 ? std::sqrt(h) : std::pow(h, 1.5);
            const double sj = j < 3 ? std::sqrt(h) : std::pow(h, 1.5);
            EXPECT_NEAR(kb.K[i][j], si * sj * ka.K[i][j], 1e-10 * max_abs_entry(kb.K));
        }
    }
}

TEST(Lamination, PlateLawIsSymmetric) {
    const LaminatePolar lp = compute_abd_polar(stacking_deg(glass_epoxy(), {10, -35, 70}));
    EXPECT_TRUE(is_symmetric(plate_law_matrix(lp).K));
}

TEST(Lamination, InvalidInputs) {
    EXPECT_EQ(error_kind([] { compute_abd_polar(stacking_deg(glass_epoxy(), {})); }), ErrorKind::EmptyStacking);
    EXPECT_EQ(error_kind([] { compute_abd_polar(stacking_deg(glass_epoxy(), {0}, 0.0)); }),
              ErrorKind::InvalidArgument);
    EXPECT_EQ(error_kind([] { compute_abd_polar(stacking_deg({1.0, 1.0, 1.5, 0.0, 0, 0}, {0})); }),
              ErrorKind::InvalidMaterial);
    LaminatePolar lp = compute_abd_polar(stacking_deg(glass_epoxy(), {0, 90}));
    EXPECT_NO_THROW(validate(lp));
    LaminatePolar bad = lp;
    bad.D.T0 += 1.0;
    EXPECT_EQ(error_kind([&] { validate(bad); }), ErrorKind::InvalidArgument);
    bad = lp;
    bad.B.T1 = 1.0;
    EXPECT_EQ(error_kind([&] { validate(bad); }), ErrorKind::InvalidArgument);
    bad = lp;
    bad.h = -1.0;
    EXPECT_EQ(error_kind([&] { validate(bad); }), ErrorKind::InvalidArgument);
}

TEST(DerivedAngles, ConventionalFlags) {
    const LaminatePolar ud = compute_abd_polar(stacking_deg(glass_epoxy(), {0, 0}));
    const DerivedAngles da = derived_angles(ud);
    EXPECT_TRUE(da.PhiB_conventional);
    EXPECT_TRUE(da.deltaA_conventional);
    EXPECT_FALSE(da.PhiA_conventional);

    const LaminatePolar cp = compute_abd_polar(stacking_deg(glass_epoxy(), {0, 90}));
    const DerivedAngles dc = derived_angles(cp);
    EXPECT_TRUE(dc.PhiA_conventional);
    EXPECT_TRUE(dc.PhiB_conventional);
    EXPECT_TRUE(dc.deltaD_conventional);
}

TEST(DerivedAngles, InvariantUnderLaminateRotation) {
    Rng rng(15);
    for (int trial = 0; trial < 200; ++trial) {
        const LaminatePolar lp = test::random_laminate_polar(rng);
        const LaminatePolar r = rotate_laminate(lp, rng.uniform(-pi, pi));
        const DerivedAngles a = derived_angles(lp), b = derived_angles(r);
        EXPECT_LT(angle_gap(a.PhiA, b.PhiA, pi / 2), 1e-9);
        EXPECT_LT(angle_gap(a.PhiB, b.PhiB, pi / 2), 1e-9);
        EXPECT_LT(angle_gap(a.PhiD, b.PhiD, pi / 2), 1e-9);
        EXPECT_LT(angle_gap(a.deltaA, b.deltaA, pi), 1e-9);
        EXPECT_LT(angle_gap(a.deltaD, b.deltaD, pi), 1e-9);
    }
}
