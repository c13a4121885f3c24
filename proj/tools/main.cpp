#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace polarlam::cli;

void add_common(CLI::App* cmd, CommonOptions& opt, std::string& input) {
    // --h is the thickness, so help is long-form only.
    cmd->set_help_flag("--help", "Print this help message and exit");
    cmd->add_option("input", input, "Input document (path, or - for standard input)");
    cmd->add_flag("--json", opt.json, "Emit JSON instead of text");
    cmd->add_option("--tol", opt.tol, "Relative tolerance of the marginal band")->capture_default_str();
    cmd->add_option("--grid-step-deg", opt.grid_step_deg, "Grid step of the M4 minimization, degrees")
        ->capture_default_str();
    cmd->add_option("--h", opt.h, "Override the laminate thickness");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polar-formalism elastic bounds of coupled laminates"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::string input = "-";
    CommonOptions abd_opt, classify_opt;
    CheckArgs check;
    DiagramArgs diagram;
    ScanArgs scan;
    VerifyArgs verify;
    std::string coupling_scale;

    auto* abd = app.add_subcommand("abd", "Polar and Cartesian A, B, D of a stacking");
    add_common(abd, abd_opt, input);

    auto* chk = app.add_subcommand("check", "Feasibility of the laminate against its elastic bounds");
    add_common(chk, check.common, input);
    chk->add_option("--case", check.case_name, "Condition set to apply")
        ->check(CLI::IsMember({"auto", "general", "aligned", "square-b", "full-square", "r0", "isotropic"}))
        ->capture_default_str();
    chk->add_flag("--verify", check.verify, "Also run the general set and compare verdicts");

    auto* cls = app.add_subcommand("classify", "Symmetry classes and the condition set dispatch would use");
    add_common(cls, classify_opt, input);

    auto* dia = app.add_subcommand("diagram", "Polar diagram data of one Cartesian component (CSV)");
    add_common(dia, diagram.common, input);
    dia->add_option("--tensor", diagram.tensor, "A, B, D or ply")->capture_default_str();
    dia->add_option("--component", diagram.component, "1111, 1112, 1122, 1212, 1222 or 2222 (prefix optional)")
        ->capture_default_str();
    dia->add_option("--step-deg", diagram.step_deg, "Angular step, degrees")->capture_default_str();

    auto* scn = app.add_subcommand("scan", "Feasibility over a grid of coupling moduli (CSV)");
    add_common(scn, scan.common, input);
    scn->add_option("--grid", scan.grid, "r0b=lo:hi:n,r1b=lo:hi:n")->required();
    scn->add_flag("--probe-conjecture", scan.probe_conjecture,
                  "Compare the worst aligned configuration with perturbed alignments");
    scn->add_option("--perturbations", scan.perturbations, "Perturbed laminates per grid point")
        ->capture_default_str();
    scn->add_option("--perturb-deg", scan.perturb_deg, "Largest angle perturbation, degrees")
        ->capture_default_str();
    scn->add_option("--seed", scan.seed, "Seed of the perturbations")->capture_default_str();

    auto* ver = app.add_subcommand("verify", "Closed-form verdicts against the eigenvalue oracle");
    add_common(ver, verify.common, input);
    ver->add_flag("--random", verify.random, "Use seeded random laminates instead of an input");
    ver->add_option("--samples", verify.samples, "Number of random laminates")->capture_default_str();
    ver->add_option("--seed", verify.seed, "Seed of the random laminates")->capture_default_str();
    ver->add_option("--coupling-scale", coupling_scale,
                    "lo:hi range of factors applied to the coupling moduli of random laminates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (*ver) {
            if (!coupling_scale.empty()) {
                const auto colon = coupling_scale.find(':');
                if (colon == std::string::npos)
                    throw polarlam::Error(polarlam::ErrorKind::InputError, "--coupling-scale: expected lo:hi");
                try {
                    verify.coupling_scale_lo = std::stod(coupling_scale.substr(0, colon));
                    verify.coupling_scale_hi = std::stod(coupling_scale.substr(colon + 1));
                } catch (const std::logic_error&) {
                    throw polarlam::Error(polarlam::ErrorKind::InputError, "--coupling-scale: bad number");
                }
            }
            std::optional<InputDocument> doc;
            if (!verify.random) doc = parse_input(read_source(input));
            return cmd_verify(doc, verify, std::cout);
        }
        const InputDocument doc = parse_input(read_source(input));
        if (*abd) return cmd_abd(doc, abd_opt, std::cout);
        if (*chk) return cmd_check(doc, check, std::cout);
        if (*cls) return cmd_classify(doc, classify_opt, std::cout);
        if (*dia) return cmd_diagram(doc, diagram, std::cout);
        if (*scn) return cmd_scan(doc, scan, std::cout);
    } catch (const polarlam::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}
