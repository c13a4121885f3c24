#pragma once

// The six CLI commands as functions over an input document and an output
// stream; main.cpp only parses flags and maps exceptions to exit codes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "document.hpp"

namespace polarlam::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitDisagreement = 1,
    kExitInputError = 2,
    kExitInfeasible = 3,
    kExitMarginal = 4,
    kExitNotApplicable = 5,
};

inline int exit_code_for(Verdict v) noexcept {
    switch (v) {
        case Verdict::Feasible: return kExitOk;
        case Verdict::Marginal: return kExitMarginal;
        case Verdict::Infeasible: return kExitInfeasible;
    }
    return kExitInputError;
}

inline int exit_code_for(ErrorKind k) noexcept {
    switch (k) {
        case ErrorKind::NotAligned:
        case ErrorKind::CaseNotApplicable: return kExitNotApplicable;
        default: return kExitInputError;
    }
}

struct CommonOptions {
    bool json = false;
    double tol = 1e-9;
    double grid_step_deg = 0.5;
    std::optional<double> h;

    CheckOptions check_options() const {
        if (!(tol > 0.0)) throw Error(ErrorKind::InputError, "--tol must be positive");
        CheckOptions o;
        o.tol = tol;
        o.grid_step = deg_to_rad(grid_step_deg);
        return o;
    }
    ReportParams report_params() const { return {tol, grid_step_deg}; }
};

/// 17 significant digits, locale independent.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string read_source(const std::string& path) {
    if (path.empty() || path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InputError, "cannot open input file '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline LaminatePolar laminate_with_options(const InputDocument& doc, const CommonOptions& opt) {
    LaminatePolar lp;
    if (doc.abd) {
        lp = *doc.abd;
    } else {
        Stacking s = stacking_of(doc);
        if (opt.h) s.h = *opt.h;
        lp = compute_abd_polar(s);
    }
    if (opt.h) {
        if (!(*opt.h > 0.0)) throw Error(ErrorKind::InputError, "--h must be positive");
        lp.h = *opt.h;
    }
    validate(lp);
    return lp;
}

/// Symmetry class of a laminate tensor; B reports "zero" when both of its
/// moduli vanish against the ply scale.
inline std::string tensor_class(const PolarElastic4& t, double ply_scale, bool coupling) {
    if (coupling && t.R0 <= kDefaultClassifyTol * ply_scale && t.R1 <= kDefaultClassifyTol * ply_scale)
        return "zero";
    return std::string(to_string(classify_symmetry(t)));
}

// ---------------------------------------------------------------------------
// abd
// ---------------------------------------------------------------------------

inline int cmd_abd(const InputDocument& doc, const CommonOptions& opt, std::ostream& out) {
    const LaminatePolar lp = laminate_with_options(doc, opt);
    if (!doc.has_stacking()) throw Error(ErrorKind::InputError, "$.stacking_deg: required by the abd command");
    const DerivedAngles da = derived_angles(lp);
    const double scale = std::max(lp.T0(), lp.T1());
    const std::array<std::pair<const char*, const PolarElastic4*>, 3> tensors{
        {{"A", &lp.A}, {"B", &lp.B}, {"D", &lp.D}}};

    if (opt.json) {
        json j;
        j["tool"] = kToolName;
        j["version"] = kToolVersion;
        j["input"] = doc.raw;
        j["h"] = lp.h;
        for (const auto& [name, t] : tensors) {
            j[name] = {{"polar", to_json(*t)},
                       {"cartesian", to_json(polar4_to_cartesian_at(*t, 0.0))},
                       {"symmetry", tensor_class(*t, scale, std::string(name) == "B")}};
        }
        j["derived_angles"] = to_json(da);
        out << j.dump(2) << '\n';
        return kExitOk;
    }

    out << "plies: " << doc.stacking_deg->size() << "  h: " << fmt(lp.h) << '\n';
    for (const auto& [name, t] : tensors) {
        const Cartesian4 c = polar4_to_cartesian_at(*t, 0.0);
        out << name << " (" << tensor_class(*t, scale, std::string(name) == "B") << ")\n"
            << "  T0=" << fmt(t->T0) << " T1=" << fmt(t->T1) << " R0=" << fmt(t->R0)
            << " R1=" << fmt(t->R1) << " Phi0_deg=" << fmt(rad_to_deg(t->Phi0))
            << " Phi1_deg=" << fmt(rad_to_deg(t->Phi1)) << '\n'
            << "  c1111=" << fmt(c.c1111) << " c1112=" << fmt(c.c1112) << " c1122=" << fmt(c.c1122)
            << " c1212=" << fmt(c.c1212) << " c1222=" << fmt(c.c1222) << " c2222=" << fmt(c.c2222)
            << '\n';
    }
    const auto flag = [](bool conventional) { return conventional ? " (convention)" : ""; };
    out << "PhiA_deg=" << fmt(rad_to_deg(da.PhiA)) << flag(da.PhiA_conventional)
        << " PhiB_deg=" << fmt(rad_to_deg(da.PhiB)) << flag(da.PhiB_conventional)
        << " PhiD_deg=" << fmt(rad_to_deg(da.PhiD)) << flag(da.PhiD_conventional) << '\n'
        << "deltaA_deg=" << fmt(rad_to_deg(da.deltaA)) << flag(da.deltaA_conventional)
        << " deltaD_deg=" << fmt(rad_to_deg(da.deltaD)) << flag(da.deltaD_conventional) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckArgs {
    CommonOptions common;
    std::string case_name = "auto";
    bool verify = false;
};

inline BoundsReport run_check(const LaminatePolar& lp, const std::string& case_name,
                              const CheckOptions& o, bool verify) {
    BoundsReport r;
    if (case_name == "auto") return dispatch_check(lp, o, verify);
    if (case_name == "general")
        r = feasibility_general(lp, o);
    else if (case_name == "aligned")
        r = feasibility_aligned(lp, o);
    else if (case_name == "square-b")
        r = feasibility_special(lp, SpecialCase::SquareB, o);
    else if (case_name == "full-square")
        r = feasibility_special(lp, SpecialCase::FullSquare, o);
    else if (case_name == "r0")
        r = feasibility_special(lp, SpecialCase::R0Orthotropic, o);
    else if (case_name == "isotropic")
        r = feasibility_special(lp, SpecialCase::CoupledIsotropic, o);
    else
        throw Error(ErrorKind::InputError, "--case: unknown case '" + case_name + "'");
    if (verify) r.cross_check = feasibility_general(lp, o).verdict;
    return r;
}

inline void print_report_text(const BoundsReport& r, std::ostream& out) {
    out << "case: " << r.case_used << '\n'
        << "variant: " << r.variant << '\n'
        << "verdict: " << to_string(r.verdict) << '\n';
    if (!r.snapped.empty()) {
        out << "snapped to zero:";
        for (const auto& s : r.snapped) out << ' ' << s;
        out << '\n';
    }
    out << "margins (name, value, normalized):\n";
    for (const auto& m : r.margins) {
        out << "  " << m.name << "  " << fmt(m.value) << "  " << fmt(m.normalized());
        if (m.kind == ConditionKind::NonStrict) out << "  [>= 0]";
        if (!m.active) out << "  [informational]";
        if (m.argmin) {
            out << "  at (" << fmt(rad_to_deg(m.argmin->first)) << ", "
                << fmt(rad_to_deg(m.argmin->second)) << ") deg";
        }
        out << '\n';
    }
    if (r.minimum) {
        out << "m4 grid minimum: " << fmt(r.minimum->grid_value)
            << "  certified lower bound: " << fmt(r.minimum->lower_bound);
        if (r.minimum->fallback) out << "  [refinement did not converge]";
        out << '\n';
    }
    if (r.cross_check) out << "general verdict: " << to_string(*r.cross_check) << '\n';
}

inline int cmd_check(const InputDocument& doc, const CheckArgs& args, std::ostream& out) {
    const LaminatePolar lp = laminate_with_options(doc, args.common);
    const BoundsReport r = run_check(lp, args.case_name, args.common.check_options(), args.verify);
    if (args.common.json)
        out << to_json(r, doc, args.common.report_params()).dump(2) << '\n';
    else
        print_report_text(r, out);
    if (r.cross_check && verdicts_conflict(r.verdict, *r.cross_check)) return kExitDisagreement;
    return exit_code_for(r.verdict);
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

inline int cmd_classify(const InputDocument& doc, const CommonOptions& opt, std::ostream& out) {
    const LaminatePolar lp = laminate_with_options(doc, opt);
    const CheckOptions o = opt.check_options();
    const double scale = std::max(lp.T0(), lp.T1());
    const auto cfg = extract_aligned_config(lp, derived_angles(lp), o.tol, o.angle_tol);

    std::string dispatch;
    switch (select_case(lp, o)) {
        case CaseChoice::Uncoupled: dispatch = std::string(kCaseUncoupled); break;
        case CaseChoice::CoupledIsotropic: dispatch = std::string(kCaseIsotropic); break;
        case CaseChoice::FullSquare: dispatch = std::string(kCaseFullSquare); break;
        case CaseChoice::R0Orthotropic: dispatch = std::string(kCaseR0); break;
        case CaseChoice::SquareB: dispatch = std::string(kCaseSquareB); break;
        case CaseChoice::Aligned: dispatch = std::string(kCaseAligned); break;
        case CaseChoice::General: dispatch = std::string(kCaseGeneral); break;
    }

    if (opt.json) {
        json j;
        j["tool"] = kToolName;
        j["version"] = kToolVersion;
        if (doc.ply) j["ply"] = std::string(to_string(classify_symmetry(*doc.ply)));
        j["A"] = tensor_class(lp.A, scale, false);
        j["B"] = tensor_class(lp.B, scale, true);
        j["D"] = tensor_class(lp.D, scale, false);
        if (cfg) {
            j["aligned"] = {{"kA", cfg->kA}, {"kB", cfg->kB}, {"kD", cfg->kD},
                            {"lamA", cfg->lamA}, {"lamD", cfg->lamD}};
        } else {
            j["aligned"] = nullptr;
        }
        j["dispatch"] = dispatch;
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    if (doc.ply) out << "ply: " << to_string(classify_symmetry(*doc.ply)) << '\n';
    out << "A: " << tensor_class(lp.A, scale, false) << '\n'
        << "B: " << tensor_class(lp.B, scale, true) << '\n'
        << "D: " << tensor_class(lp.D, scale, false) << '\n';
    if (cfg) {
        out << "aligned: kA=" << cfg->kA << " kB=" << cfg->kB << " kD=" << cfg->kD
            << " lamA=" << cfg->lamA << " lamD=" << cfg->lamD << '\n';
    } else {
        out << "aligned: no\n";
    }
    out << "dispatch: " << dispatch << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// diagram
// ---------------------------------------------------------------------------

struct DiagramArgs {
    CommonOptions common;
    std::string tensor = "A";
    std::string component = "1111";
    double step_deg = 1.0;
};

inline double cartesian_component(const Cartesian4& c, const std::string& name) {
    std::string key = name;
    if (!key.empty() && std::isalpha(static_cast<unsigned char>(key.front()))) key.erase(0, 1);
    if (key == "1111") return c.c1111;
    if (key == "1112") return c.c1112;
    if (key == "1122") return c.c1122;
    if (key == "1212") return c.c1212;
    if (key == "1222") return c.c1222;
    if (key == "2222") return c.c2222;
    throw Error(ErrorKind::InputError, "--component: unknown component '" + name + "'");
}

inline int cmd_diagram(const InputDocument& doc, const DiagramArgs& args, std::ostream& out) {
    if (!(args.step_deg > 0.0) || !(args.step_deg <= 360.0))
        throw Error(ErrorKind::InputError, "--step-deg must lie in (0, 360]");
    cartesian_component(Cartesian4{}, args.component);  // validates the name up front

    PolarElastic4 t;
    if (args.tensor == "ply") {
        if (!doc.ply) throw Error(ErrorKind::InputError, "--tensor ply: the document has no material");
        t = *doc.ply;
    } else {
        const LaminatePolar lp = laminate_with_options(doc, args.common);
        if (args.tensor == "A")
            t = lp.A;
        else if (args.tensor == "B")
            t = lp.B;
        else if (args.tensor == "D")
            t = lp.D;
        else
            throw Error(ErrorKind::InputError, "--tensor: expected A, B, D or ply");
    }

    out << "theta_deg,value\n";
    const auto n = static_cast<long>(std::floor(360.0 / args.step_deg + 1e-9));
    for (long k = 0; k <= n; ++k) {
        const double deg = static_cast<double>(k) * args.step_deg;
        out << fmt(deg) << ','
            << fmt(cartesian_component(polar4_to_cartesian_at(t, deg_to_rad(deg)), args.component))
            << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    long n = 1;

    double at(long i) const noexcept {
        return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
};

struct ScanGrid {
    std::optional<GridAxis> r0b;
    std::optional<GridAxis> r1b;
};

/// Parses "r0b=lo:hi:n,r1b=lo:hi:n"; either axis may be omitted.
inline ScanGrid parse_grid(const std::string& spec) {
    const auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::InputError, "--grid '" + spec + "': " + why);
    };
    ScanGrid g;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) fail("expected name=lo:hi:n");
        const std::string name = item.substr(0, eq);
        std::stringstream vs(item.substr(eq + 1));
        std::string lo, hi, n;
        if (!std::getline(vs, lo, ':') || !std::getline(vs, hi, ':') || !std::getline(vs, n, ':'))
            fail("expected name=lo:hi:n");
        GridAxis axis;
        try {
            std::size_t used = 0;
            axis.lo = std::stod(lo, &used);
            if (used != lo.size()) fail("bad number '" + lo + "'");
            axis.hi = std::stod(hi, &used);
            if (used != hi.size()) fail("bad number '" + hi + "'");
            axis.n = std::stol(n, &used);
            if (used != n.size()) fail("bad count '" + n + "'");
        } catch (const std::logic_error&) {
            fail("bad number in '" + item + "'");
        }
        if (axis.n < 1) fail("point count must be at least 1");
        if (axis.lo < 0.0 || axis.hi < 0.0) fail("moduli must be non-negative");
        if (name == "r0b") {
            if (g.r0b) fail("r0b given twice");
            g.r0b = axis;
        } else if (name == "r1b") {
            if (g.r1b) fail("r1b given twice");
            g.r1b = axis;
        } else {
            fail("only r0b and r1b can be scanned");
        }
    }
    if (!g.r0b && !g.r1b) fail("no axis given");
    return g;
}

struct ScanArgs {
    CommonOptions common;
    std::string grid;
    bool probe_conjecture = false;
    int perturbations = 16;
    double perturb_deg = 15.0;
    std::uint64_t seed = 1;
};

struct ProbeResult {
    Verdict aligned_worst = Verdict::Feasible;
    double aligned_worst_margin = 0.0;
    Verdict perturbed_worst = Verdict::Feasible;
    double perturbed_worst_margin = 0.0;
    bool counterexample = false;
};

/// Checks the claim that aligned orthotropy is the worst configuration for
/// given moduli: worst over all aligned parities against random angle
/// perturbations of the laminate.
inline ProbeResult probe_conjecture(const LaminatePolar& lp, const CheckOptions& o, int count,
                                    double perturb_deg, std::uint64_t seed) {
    ProbeResult p;
    p.aligned_worst_margin = std::numeric_limits<double>::infinity();
    for (const AlignedConfig& cfg : all_aligned_configs()) {
        const LaminatePolar al = with_aligned_config(lp, cfg);
        const BoundsReport r = feasibility_aligned(al, cfg, o);
        p.aligned_worst_margin = std::min(p.aligned_worst_margin, r.worst_normalized());
        if (static_cast<int>(r.verdict) > static_cast<int>(p.aligned_worst)) p.aligned_worst = r.verdict;
    }
    p.perturbed_worst_margin = std::numeric_limits<double>::infinity();
    Rng rng(seed);
    const double amp = deg_to_rad(perturb_deg);
    for (int i = 0; i < count; ++i) {
        LaminatePolar q = lp;
        for (PolarElastic4* t : {&q.A, &q.B, &q.D}) {
            t->Phi0 += rng.uniform(-amp, amp);
            t->Phi1 += rng.uniform(-amp, amp);
        }
        q = normalize_laminate(q);
        const BoundsReport r = feasibility_general(q, o);
        p.perturbed_worst_margin = std::min(p.perturbed_worst_margin, r.worst_normalized());
        if (static_cast<int>(r.verdict) > static_cast<int>(p.perturbed_worst)) p.perturbed_worst = r.verdict;
    }
    p.counterexample = p.aligned_worst == Verdict::Feasible && p.perturbed_worst == Verdict::Infeasible;
    return p;
}

inline int cmd_scan(const InputDocument& doc, const ScanArgs& args, std::ostream& out) {
    const ScanGrid grid = parse_grid(args.grid);
    const LaminatePolar base = laminate_with_options(doc, args.common);
    const CheckOptions o = args.common.check_options();
    if (args.probe_conjecture) {
        if (args.perturbations < 1) throw Error(ErrorKind::InputError, "--perturbations must be at least 1");
        if (!extract_aligned_config(base, derived_angles(base), o.tol, o.angle_tol))
            throw Error(ErrorKind::NotAligned, "--probe-conjecture needs an aligned orthotropic laminate");
    }

    const GridAxis a0 = grid.r0b.value_or(GridAxis{base.B.R0, base.B.R0, 1});
    const GridAxis a1 = grid.r1b.value_or(GridAxis{base.B.R1, base.B.R1, 1});
    out << "r0b,r1b,verdict,case,worst_margin";
    if (args.probe_conjecture)
        out << ",general_verdict,aligned_worst_verdict,aligned_worst_margin,perturbed_worst_verdict,"
               "perturbed_worst_margin,counterexample";
    out << '\n';

    long counterexamples = 0;
    std::uint64_t index = 0;
    for (long i = 0; i < a0.n; ++i) {
        for (long k = 0; k < a1.n; ++k, ++index) {
            LaminatePolar lp = base;
            lp.B.R0 = a0.at(i);
            lp.B.R1 = a1.at(k);
            // Keep the input's B angles even where a modulus passes through zero.
            const BoundsReport r = dispatch_check(lp, o);
            out << fmt(lp.B.R0) << ',' << fmt(lp.B.R1) << ',' << to_string(r.verdict) << ','
                << r.case_used << ',' << fmt(r.worst_normalized());
            if (args.probe_conjecture) {
                const Verdict general = feasibility_general(lp, o).verdict;
                const ProbeResult p = probe_conjecture(lp, o, args.perturbations, args.perturb_deg,
                                                       mix_seed(args.seed, index));
                counterexamples += p.counterexample ? 1 : 0;
                out << ',' << to_string(general) << ',' << to_string(p.aligned_worst) << ','
                    << fmt(p.aligned_worst_margin) << ',' << to_string(p.perturbed_worst) << ','
                    << fmt(p.perturbed_worst_margin) << ',' << (p.counterexample ? 1 : 0);
            }
            out << '\n';
        }
    }
    if (args.probe_conjecture)
        std::cerr << "counterexample candidates: " << counterexamples << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyArgs {
    CommonOptions common;
    bool random = false;
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    double coupling_scale_lo = 1.0;
    double coupling_scale_hi = 1.0;
    /// Disagreements are forgiven when both normalized margins are this close to zero.
    double band = 1e-7;
};

struct VerifySummary {
    std::size_t samples = 0;
    std::size_t agreements = 0;
    std::size_t marginal = 0;  // verdict pairs where at least one side is marginal
    std::size_t disagreements = 0;
    std::size_t case_conflicts = 0;  // special/aligned set vs general set
    std::size_t feasible = 0;
    std::size_t infeasible = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_eigen = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> disagreeing;

    bool all_marginal() const noexcept { return samples > 0 && marginal == samples; }
};

/// Compares the closed-form verdict with the eigenvalue verdict on one laminate.
inline void verify_one(const LaminatePolar& lp, const CheckOptions& o, double band, std::size_t index,
                       VerifySummary& s) {
    const BoundsReport r = dispatch_check(lp, o, true);
    const OracleVerdict e = kelvin_pd_check(lp, o.tol);
    ++s.samples;
    s.worst_margin = std::min(s.worst_margin, r.worst_normalized());
    s.worst_eigen = std::min(s.worst_eigen, e.normalized);
    if (r.verdict == Verdict::Feasible) ++s.feasible;
    if (r.verdict == Verdict::Infeasible) ++s.infeasible;
    if (r.verdict == Verdict::Marginal || e.verdict == Verdict::Marginal) ++s.marginal;
    if (r.cross_check && verdicts_conflict(r.verdict, *r.cross_check)) ++s.case_conflicts;

    const bool conflict = verdicts_conflict(r.verdict, e.verdict) &&
                          !(std::abs(r.worst_normalized()) <= band && std::abs(e.normalized) <= band);
    const bool case_conflict = r.cross_check && verdicts_conflict(r.verdict, *r.cross_check);
    if (conflict || case_conflict) {
        ++s.disagreements;
        s.disagreeing.push_back(index);
    } else if (r.verdict == e.verdict) {
        ++s.agreements;
    }
}

inline VerifySummary run_verify(const std::optional<InputDocument>& doc, const VerifyArgs& args) {
    const CheckOptions o = args.common.check_options();
    VerifySummary s;
    if (!args.random) {
        if (!doc) throw Error(ErrorKind::InputError, "verify needs an input document or --random");
        verify_one(laminate_with_options(*doc, args.common), o, args.band, 0, s);
        return s;
    }
    if (args.samples < 1) throw Error(ErrorKind::InputError, "--samples must be at least 1");
    if (!(args.coupling_scale_lo > 0.0) || args.coupling_scale_hi < args.coupling_scale_lo)
        throw Error(ErrorKind::InputError, "--coupling-scale must be lo:hi with 0 < lo <= hi");
    SampleSpec spec;
    spec.count = args.samples;
    spec.seed = args.seed;
    for (std::size_t i = 0; i < args.samples; ++i) {
        LaminatePolar lp = compute_abd_polar(sample_laminate(spec, i).stacking);
        if (args.common.h) lp.h = *args.common.h;
        if (args.coupling_scale_hi > 1.0 || args.coupling_scale_lo != 1.0) {
            Rng rng(mix_seed(args.seed ^ 0x5ca1eULL, i));
            lp = scale_coupling(lp, rng.uniform(args.coupling_scale_lo, args.coupling_scale_hi));
        }
        verify_one(lp, o, args.band, i, s);
    }
    return s;
}

inline int cmd_verify(const std::optional<InputDocument>& doc, const VerifyArgs& args, std::ostream& out) {
    const VerifySummary s = run_verify(doc, args);
    const char* warning = s.all_marginal()
                              ? "every verdict is marginal: the tolerance is too large to decide anything"
                              : nullptr;
    if (args.common.json) {
        json j = {{"tool", kToolName},
                  {"version", kToolVersion},
                  {"samples", s.samples},
                  {"agreements", s.agreements},
                  {"marginal", s.marginal},
                  {"disagreements", s.disagreements},
                  {"case_conflicts", s.case_conflicts},
                  {"feasible", s.feasible},
                  {"infeasible", s.infeasible},
                  {"worst_margin", s.worst_margin},
                  {"worst_eigen", s.worst_eigen},
                  {"disagreeing", s.disagreeing},
                  {"parameters", {{"tol", args.common.tol},
                                  {"grid_step_deg", args.common.grid_step_deg},
                                  {"seed", args.seed},
                                  {"random", args.random}}}};
        j["warning"] = warning ? json(warning) : json(nullptr);
        out << j.dump(2) << '\n';
    } else {
        out << "samples: " << s.samples << '\n'
            << "agreements: " << s.agreements << '\n'
            << "marginal: " << s.marginal << '\n'
            << "disagreements: " << s.disagreements << '\n'
            << "case conflicts: " << s.case_conflicts << '\n'
            << "feasible: " << s.feasible << "  infeasible: " << s.infeasible << '\n'
            << "worst normalized margin: " << fmt(s.worst_margin) << '\n'
            << "worst normalized eigenvalue: " << fmt(s.worst_eigen) << '\n';
        for (std::size_t i : s.disagreeing) out << "disagreement at sample " << i << '\n';
        if (warning) out << "warning: " << warning << '\n';
    }
    return s.disagreements > 0 ? kExitDisagreement : kExitOk;
}

}  // namespace polarlam::cli
