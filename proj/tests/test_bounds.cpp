#include <gtest/gtest.h>

#include <functional>

#include "support.hpp"

using namespace polarlam;
using polarlam::test::glass_epoxy;
using polarlam::test::random_laminate_polar;
using polarlam::test::stacking_deg;

namespace {

ErrorKind error_kind(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::ContractViolation;
}

// Laminate with isotropic A and D sharing the glass-epoxy T0, T1.
LaminatePolar coupled_isotropic(double r0b, double r1b, double phi0b = 0.0) {
    const PolarElastic4 g = glass_epoxy();
    LaminatePolar lp;
    lp.A = {g.T0, g.T1, 0, 0, 0, 0};
    lp.D = lp.A;
    lp.B = {0, 0, r0b, r1b, phi0b, 0};
    return normalize_laminate(lp);
}

double deg4(const LaminatePolar& lp) { return lp.T0() * lp.T0() * lp.T1() * lp.T1(); }

}  // namespace

TEST(MatrixM, EntriesByHand) {
    LaminatePolar lp;
    lp.h = 2.0;
    lp.A = {3.0, 2.0, 1.0, 0.5, 0.0, 0.0};
    lp.B = {0.0, 0.0, 0.25, 0.125, 0.0, 0.0};
    lp.D = {3.0, 2.0, 0.5, 0.25, 0.0, 0.0};
    const Matrix<4> m = assemble_M(lp, 0.0, 0.0).m;
    EXPECT_DOUBLE_EQ(m[0][0], 96.0 * 2.0);
    EXPECT_DOUBLE_EQ(m[0][1], 96.0 * 0.5);
    EXPECT_DOUBLE_EQ(m[0][2], 0.0);
    EXPECT_DOUBLE_EQ(m[0][3], 48.0 * 2.0 * 0.125);
    EXPECT_DOUBLE_EQ(m[1][1], 48.0 * (3.0 + 1.0));
    EXPECT_DOUBLE_EQ(m[1][2], 48.0 * 2.0 * 0.125);
    EXPECT_DOUBLE_EQ(m[1][3], 24.0 * 2.0 * 0.25);
    EXPECT_DOUBLE_EQ(m[2][2], 8.0 * 4.0 * 2.0);
    EXPECT_DOUBLE_EQ(m[2][3], 8.0 * 4.0 * 0.25);
    EXPECT_DOUBLE_EQ(m[3][3], 4.0 * 4.0 * (3.0 + 0.5));
    EXPECT_TRUE(is_symmetric(m, 0.0));
}

TEST(MatrixM, MatchesPolarizedEnergy) {
    Rng rng(21);
    for (int i = 0; i < 300; ++i) {
        const LaminatePolar lp = random_laminate_polar(rng);
        const double pe = rng.uniform(-pi, pi), pk = rng.uniform(-pi, pi);
        const Matrix<4> a = assemble_M(lp, pe, pk).m;
        const Matrix<4> b = matrix_m_from_energy(lp, pe, pk);
        const double s = max_abs_entry(a);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(a[r][c], b[r][c], 1e-9 * s);
    }
}

TEST(MatrixM, MinorsMatchOracleExpressions) {
    Rng rng(22);
    for (int i = 0; i < 300; ++i) {
        const LaminatePolar lp = random_laminate_polar(rng);
        const double pe = rng.uniform(-pi, pi), pk = rng.uniform(-pi, pi);
        const MatrixM mm = assemble_M(lp, pe, pk);
        const SylvesterMinors s = sylvester_minors(mm);
        EXPECT_DOUBLE_EQ(s.M1, 96.0 * lp.T1());
        const double m2 = 96.0 * 48.0 * oracle_expression(OracleExpression::ExtensionSecondMinor, lp, pe, pk);
        EXPECT_NEAR(s.M2, m2, 1e-10 * std::abs(96.0 * 48.0 * lp.T0() * lp.T1()));
        const double det = cofactor_determinant(mm.m);
        EXPECT_NEAR(s.M4, det, 1e-9 * kDetMScale * std::pow(lp.h, 4) * deg4(lp));
    }
}

TEST(M4Polynomial, EqualsScaledDeterminantInCouplingFrame) {
    Rng rng(23);
    for (int i = 0; i < 500; ++i) {
        const LaminatePolar lp = random_laminate_polar(rng, 1.0);
        const DerivedAngles da = derived_angles(lp);
        const double pe = rng.uniform(-pi, pi), pk = rng.uniform(-pi, pi);
        const double ref = oracle_expression(OracleExpression::FullDeterminant, lp, pe + lp.B.Phi1, pk + lp.B.Phi1);
        EXPECT_NEAR(m4_value(lp, da, pe, pk), ref, 1e-10 * deg4(lp));
    }
}

TEST(M4Polynomial, PeriodicInBothAngles) {
    Rng rng(24);
    const LaminatePolar lp = random_laminate_polar(rng);
    const DerivedAngles da = derived_angles(lp);
    for (int i = 0; i < 100; ++i) {
        const double pe = rng.uniform(-pi, pi), pk = rng.uniform(-pi, pi);
        const double v = m4_value(lp, da, pe, pk);
        EXPECT_NEAR(m4_value(lp, da, pe + pi / 2, pk), v, 1e-12 * deg4(lp));
        EXPECT_NEAR(m4_value(lp, da, pe, pk + pi / 2), v, 1e-12 * deg4(lp));
    }
}

TEST(M4Polynomial, FactorsWithoutCoupling) {
    Rng rng(25);
    for (int i = 0; i < 200; ++i) {
        LaminatePolar lp = random_laminate_polar(rng);
        lp.B.R0 = lp.B.R1 = 0.0;
        lp = normalize_laminate(lp);
        const DerivedAngles da = derived_angles(lp);
        const double pe = rng.uniform(-pi, pi), pk = rng.uniform(-pi, pi);
        const double fa = oracle_expression(OracleExpression::ExtensionSecondMinor, lp, pe + lp.B.Phi1, 0.0);
        const double fd = oracle_expression(OracleExpression::BendingSecondMinor, lp, pk + lp.B.Phi1, 0.0);
        EXPECT_NEAR(m4_value(lp, da, pe, pk), fa * fd, 1e-10 * deg4(lp));
    }
}

TEST(M4Polynomial, LipschitzBoundHolds) {
    Rng rng(26);
    for (int i = 0; i < 100; ++i) {
        const LaminatePolar lp = random_laminate_polar(rng, 1.0);
        const M4Params p = m4_params(lp, derived_angles(lp));
        const double L = m4_lipschitz(p);
        for (int k = 0; k < 50; ++k) {
            const double x1 = rng.uniform(0, pi), y1 = rng.uniform(0, pi);
            const double x2 = x1 + rng.uniform(-0.05, 0.05), y2 = y1 + rng.uniform(-0.05, 0.05);
            const double gap = std::abs(m4_value(p, x1, y1) - m4_value(p, x2, y2));
            EXPECT_LE(gap, L * std::hypot(x1 - x2, y1 - y2) * (1 + 1e-12) + 1e-12 * deg4(lp));
        }
    }
}

TEST(M4Minimizer, NotAboveDenseGridAndAboveLowerBound) {
    Rng rng(27);
    for (int i = 0; i < 40; ++i) {
        const LaminatePolar lp = random_laminate_polar(rng, 1.0);
        const DerivedAngles da = derived_angles(lp);
        const M4Minimum m = minimize_m4(lp, da, kDefaultGridStep, kDefaultRefineTol);
        const double dense = grid_min_expression(OracleExpression::FullDeterminant, lp, pi / 720);
        EXPECT_LE(m.value, m.grid_value);
        EXPECT_LE(m.value, dense + 1e-9 * deg4(lp));
        EXPECT_GE(m.value, m.lower_bound);
        // Grid at 1/4 degree is within its own Lipschitz slack of the true minimum.
        const double L = m4_lipschitz(m4_params(lp, da));
        EXPECT_GE(m.value, dense - L * (pi / 720) / std::sqrt(2.0) - 1e-9 * deg4(lp));
        EXPECT_NEAR(m4_value(lp, da, m.phi_eps, m.phi_kap), m.value, 1e-12 * deg4(lp));
        EXPECT_FALSE(m.fallback);
    }
}

TEST(M4Minimizer, RejectsBadRefineTolerance) {
    const LaminatePolar lp = coupled_isotropic(1.0, 1.0, 0.1);
    EXPECT_EQ(error_kind([&] { minimize_m4(lp, derived_angles(lp), kDefaultGridStep, 0.0); }),
              ErrorKind::InvalidArgument);
}

TEST(SecondMinor, MarginsEquivalentToAngleMinimum) {
    Rng rng(28);
    int clear = 0;
    for (int i = 0; i < 500; ++i) {
        LaminatePolar lp = random_laminate_polar(rng);
        lp.A.R1 *= 1.6;  // push some draws past the bound
        const double scale = lp.T0() * lp.T1();
        const double mn = refined_min_expression(OracleExpression::ExtensionSecondMinor, lp, pi / 360);
        if (std::abs(mn) < 1e-7 * scale) continue;
        ++clear;
        const M2Margins m = m2_margins(lp.A);
        EXPECT_EQ(m.m_a > 0 && m.m_b > 0, mn > 0) << "draw " << i;
        if (mn > 0) {
            EXPECT_GT(m.discarded, 0.0);
        }
    }
    EXPECT_GT(clear, 450);
}

TEST(ThirdMinor, MarginsEquivalentToAngleMinimum) {
    Rng rng(29);
    int clear = 0, negative = 0;
    for (int i = 0; i < 1000; ++i) {
        const LaminatePolar lp = random_laminate_polar(rng, 0.8);
        const M2Margins a2 = m2_margins(lp.A);
        if (!(a2.m_a > 0 && a2.m_b > 0)) continue;
        const double scale = lp.T0() * lp.T1();
        const double mn = refined_min_expression(OracleExpression::CouplingThirdMinor, lp, pi / 360);
        if (std::abs(mn) < 1e-7 * scale) continue;
        ++clear;
        negative += mn < 0;
        const M3Margins m = m3_margins(lp.A, lp.B, derived_angles(lp).deltaA);
        EXPECT_EQ(m.m_a > 0 && m.m_b > 0, mn > 0) << "draw " << i;
    }
    EXPECT_GT(clear, 300);
    EXPECT_GT(negative, 10);
}

TEST(Verdict, DecisionRules) {
    const auto margin = [](double v, ConditionKind k = ConditionKind::Strict, bool active = true) {
        return ConditionMargin{"m", v, 1.0, k, active, std::nullopt};
    };
    EXPECT_EQ(decide_verdict({margin(1.0), margin(0.5)}, 1e-9), Verdict::Feasible);
    EXPECT_EQ(decide_verdict({margin(1.0), margin(1e-12)}, 1e-9), Verdict::Marginal);
    EXPECT_EQ(decide_verdict({margin(1.0), margin(-1e-6)}, 1e-9), Verdict::Infeasible);
    EXPECT_EQ(decide_verdict({margin(1.0), margin(-1.0, ConditionKind::Strict, false)}, 1e-9), Verdict::Feasible);
    EXPECT_EQ(decide_verdict({margin(0.0, ConditionKind::NonStrict)}, 1e-9), Verdict::Feasible);
    EXPECT_EQ(decide_verdict({margin(std::nan(""))}, 1e-9), Verdict::Infeasible);
    EXPECT_EQ(decide_verdict({}, 1e-9), Verdict::Feasible);
    EXPECT_TRUE(verdicts_conflict(Verdict::Feasible, Verdict::Infeasible));
    EXPECT_FALSE(verdicts_conflict(Verdict::Marginal, Verdict::Infeasible));
}

TEST(Feasibility, UnidirectionalIsUncoupled) {
    const LaminatePolar lp = compute_abd_polar(stacking_deg(glass_epoxy(), {0, 0, 0, 0}));
    const BoundsReport r = dispatch_check(lp);
    EXPECT_EQ(r.case_used, kCaseUncoupled);
    EXPECT_EQ(r.verdict, Verdict::Feasible);
    ASSERT_NE(r.find("a_t0_minus_r0"), nullptr);
    EXPECT_NEAR(r.find("a_t0_minus_r0")->value, 92.38 - 44.86, 1e-12);
}

TEST(Feasibility, CrossPlyUsesAlignedCorners) {
    const LaminatePolar lp = compute_abd_polar(stacking_deg(glass_epoxy(), {0, 90}));
    const BoundsReport r = dispatch_check(lp, {}, true);
    EXPECT_EQ(r.case_used, kCaseSquareB == r.case_used ? kCaseSquareB : kCaseAligned);
    EXPECT_EQ(r.verdict, Verdict::Feasible);
    ASSERT_TRUE(r.cross_check.has_value());
    EXPECT_EQ(*r.cross_check, Verdict::Feasible);
    const ConditionMargin* lin = r.find("ab_m3_linear");
    ASSERT_NE(lin, nullptr);
    // T0 T1 - 3 (R1/2)^2 with R1A = 0.
    EXPECT_NEAR(lin->value, 92.38 * 86.97 - 3 * 21.91 * 21.91, 1e-9);
    EXPECT_NEAR(lin->value, 6594.1443, 1e-4);
}

TEST(Feasibility, EighteenPlyIsCoupledIsotropic) {
    const LaminatePolar lp = compute_abd_polar(stacking_deg(glass_epoxy(), test::eighteen_ply_deg()));
    EXPECT_EQ(select_case(lp), CaseChoice::CoupledIsotropic);
    const BoundsReport r = dispatch_check(lp, {}, true);
    EXPECT_EQ(r.case_used, kCaseIsotropic);
    EXPECT_EQ(r.verdict, Verdict::Feasible);
    EXPECT_EQ(*r.cross_check, Verdict::Feasible);
}

TEST(Feasibility, CoupledIsotropicBoundary) {
    // Boundary where T0 T1 = 6 R1B^2.
    const double t = 92.38 * 86.97;
    const double r1 = std::sqrt(t / 6.0);
    const BoundsReport in = feasibility_special(coupled_isotropic(0.0, r1 * (1 - 1e-4)), SpecialCase::CoupledIsotropic);
    const BoundsReport out = feasibility_special(coupled_isotropic(0.0, r1 * (1 + 1e-4)), SpecialCase::CoupledIsotropic);
    EXPECT_EQ(in.verdict, Verdict::Feasible);
    EXPECT_EQ(out.verdict, Verdict::Infeasible);
    EXPECT_EQ(kelvin_pd_check(coupled_isotropic(0.0, r1 * (1 - 1e-4))).verdict, Verdict::Feasible);
    EXPECT_EQ(kelvin_pd_check(coupled_isotropic(0.0, r1 * (1 + 1e-4))).verdict, Verdict::Infeasible);
}

TEST(Feasibility, FullSquareBoundary) {
    // A, D isotropic and B square-symmetric: R0B < T0 / sqrt 3.
    const double T0 = glass_epoxy().T0;
    const double edge = T0 / std::sqrt(3.0);
    for (const double f : {0.999, 1.001}) {
        const LaminatePolar lp = coupled_isotropic(edge * f, 0.0);
        const BoundsReport r = feasibility_special(lp, SpecialCase::FullSquare);
        const Verdict expected = f < 1 ? Verdict::Feasible : Verdict::Infeasible;
        EXPECT_EQ(r.verdict, expected);
        EXPECT_EQ(feasibility_general(lp).verdict, expected);
        EXPECT_EQ(kelvin_pd_check(lp).verdict, expected);
    }
}

TEST(Feasibility, SpecialCaseRequiresPattern) {
    const LaminatePolar lp = compute_abd_polar(stacking_deg(glass_epoxy(), {0, 30, -20}));
    EXPECT_EQ(error_kind([&] { feasibility_special(lp, SpecialCase::CoupledIsotropic); }),
              ErrorKind::CaseNotApplicable);
    EXPECT_EQ(error_kind([&] { feasibility_aligned(lp); }), ErrorKind::NotAligned);
}

TEST(Feasibility, AlignedParityMismatchIsRejected) {
    const LaminatePolar lp = compute_abd_polar(stacking_deg(glass_epoxy(), {0, 0, 90}));
    const auto cfg = extract_aligned_config(lp, derived_angles(lp), 1e-9, kDefaultAngleTol);
    ASSERT_TRUE(cfg.has_value());
    AlignedConfig wrong = *cfg;
    wrong.kA = 1 - wrong.kA;
    EXPECT_EQ(error_kind([&] { feasibility_aligned(lp, wrong); }), ErrorKind::NotAligned);
}

TEST(Feasibility, NumericVariantForNonOrthotropicCoupling) {
    const LaminatePolar lp = coupled_isotropic(10.0, 10.0, 0.3);
    const BoundsReport r = dispatch_check(lp);
    EXPECT_EQ(r.case_used, kCaseIsotropic);
    EXPECT_EQ(r.variant, kVariantNumeric);
    ASSERT_TRUE(r.minimum.has_value());
    EXPECT_EQ(r.verdict, kelvin_pd_check(lp).verdict);
}

TEST(Feasibility, DispatchAgreesWithGeneralAndOracle) {
    SampleSpec spec;
    spec.count = 300;
    spec.seed = 5;
    int infeasible = 0;
    for (const auto& s : random_laminates(spec)) {
        const LaminatePolar base = compute_abd_polar(s.stacking);
        for (const double f : {1.0, 4.0}) {
            const LaminatePolar lp = scale_coupling(base, f);
            const BoundsReport r = dispatch_check(lp, {}, true);
            const Verdict oracle = kelvin_pd_check(lp).verdict;
            EXPECT_FALSE(verdicts_conflict(r.verdict, *r.cross_check)) << r.case_used;
            EXPECT_FALSE(verdicts_conflict(r.verdict, oracle)) << r.case_used;
            infeasible += r.verdict == Verdict::Infeasible;
        }
    }
    EXPECT_GT(infeasible, 0);
}

TEST(Feasibility, PhysicalLaminatesAreFeasible) {
    SampleSpec spec;
    spec.count = 200;
    spec.seed = 9;
    for (const auto& s : random_laminates(spec)) {
        EXPECT_EQ(dispatch_check(compute_abd_polar(s.stacking)).verdict, Verdict::Feasible)
            << to_string(s.family);
    }
}

TEST(Feasibility, InvariantUnderFrameRotation) {
    Rng rng(30);
    for (int i = 0; i < 40; ++i) {
        const LaminatePolar lp = random_laminate_polar(rng, 0.9);
        const BoundsReport a = feasibility_general(lp);
        const BoundsReport b = feasibility_general(rotate_laminate(lp, rng.uniform(-pi, pi)));
        ASSERT_EQ(a.margins.size(), b.margins.size());
        for (std::size_t k = 0; k < a.margins.size(); ++k) {
            EXPECT_EQ(a.margins[k].name, b.margins[k].name);
            EXPECT_NEAR(a.margins[k].normalized(), b.margins[k].normalized(), 1e-8) << a.margins[k].name;
        }
        EXPECT_FALSE(verdicts_conflict(a.verdict, b.verdict));
    }
}

TEST(Feasibility, BendingConditionsImpliedWhenFeasible) {
    SampleSpec spec;
    spec.count = 120;
    spec.seed = 31;
    spec.families = {LaminateFamily::Generic};
    int checked = 0;
    for (const auto& s : random_laminates(spec)) {
        const LaminatePolar lp = compute_abd_polar(s.stacking);
        const BoundsReport r = feasibility_general(lp);
        if (r.verdict != Verdict::Feasible || r.case_used != kCaseGeneral) continue;
        ++checked;
        for (const char* name : {"d_t0_minus_r0", "d_m2_bound", "db_m3_linear", "db_m3_quartic", "a_t0t1_minus_r1sq"}) {
            const ConditionMargin* m = r.find(name);
            ASSERT_NE(m, nullptr);
            EXPECT_FALSE(m->active);
            EXPECT_GT(m->value, 0.0) << name;
        }
    }
    EXPECT_GT(checked, 100);
}

TEST(Feasibility, VerdictMonotoneAlongCouplingRays) {
    Rng rng(32);
    for (int i = 0; i < 60; ++i) {
        const LaminatePolar lp = random_laminate_polar(rng, 0.5);
        bool seen_infeasible = false;
        for (double s = 0.25; s <= 4.0; s += 0.25) {
            const Verdict v = dispatch_check(scale_coupling(lp, s)).verdict;
            if (seen_infeasible) {
                EXPECT_NE(v, Verdict::Feasible) << "scale " << s;
            }
            seen_infeasible = seen_infeasible || v == Verdict::Infeasible;
        }
    }
}

TEST(Feasibility, AlignedCornersAgreeWithGeneral) {
    Rng rng(33);
    int compared = 0;
    for (int i = 0; i < 40; ++i) {
        LaminatePolar lp = random_laminate_polar(rng, 0.8);
        for (const AlignedConfig& cfg : all_aligned_configs()) {
            const LaminatePolar al = with_aligned_config(lp, cfg);
            const Verdict a = feasibility_aligned(al).verdict;
            const Verdict g = feasibility_general(al).verdict;
            EXPECT_FALSE(verdicts_conflict(a, g));
            EXPECT_FALSE(verdicts_conflict(a, kelvin_pd_check(al).verdict));
            ++compared;
        }
    }
    EXPECT_EQ(compared, 40 * 32);
}

TEST(Feasibility, SnappingIsReported) {
    LaminatePolar lp = coupled_isotropic(1e-14, 0.0);
    const BoundsReport r = feasibility_general(lp);
    EXPECT_EQ(r.case_used, kCaseUncoupled);
    ASSERT_EQ(r.snapped.size(), 1u);
    EXPECT_EQ(r.snapped[0], "R0B");
}
