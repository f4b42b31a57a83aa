#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace cli = fixpoint::cli;

int main(int argc, char** argv) {
    CLI::App app{"sampled condition checks, scale scans and fixed-point drivers for "
                 "nonexpansive mappings"};
    app.require_subcommand(1);
    int rc = cli::kExitOk;

    cli::CheckConfig check;
    check.seed = cli::default_seed();
    std::string check_x0;
    std::string check_x1;
    auto* check_cmd = app.add_subcommand("check", "verify one contraction condition by sampling");
    check_cmd->add_option("--map", check.mapping, "catalog mapping name")->required();
    check_cmd->add_option("--cond", check.condition, "condition id, C1..C6")->required();
    check_cmd->add_option("--r", check.r, "contraction ratio in (0,1) for C1/C2");
    check_cmd->add_option("--lambda", check.lambda, "additive drop > 0 for C3/C4/C5");
    auto* opt_x0 = check_cmd->add_option("--x0", check_x0, "base point for C2/C4/C5/C6");
    auto* opt_x1 = check_cmd->add_option("--x1", check_x1, "base point for C1/C3");
    opt_x0->excludes(opt_x1);
    check_cmd->add_option("--eta", check.eta, "norm threshold of the condition")->required();
    check_cmd->add_option("--rmax", check.radius_max,
                          "top of the sampling band (default 100 * max(eta, 1))");
    check_cmd->add_option("--samples", check.samples, "number of sampled far points");
    check_cmd->add_option("--seed", check.seed, "sampling seed");
    check_cmd->add_option("--out", check.out, "write the JSON report here instead of stdout");
    check_cmd->callback([&] {
        if (check_x0.empty() == check_x1.empty()) {
            std::cerr << "error: give exactly one base point (--x0 or --x1)\n";
            rc = cli::kExitUsage;
            return;
        }
        check.base = check_x0.empty() ? check_x1 : check_x0;
        rc = cli::run_check(check, std::cout, std::cerr);
    });

    cli::ScanConfig scan;
    scan.seed = cli::default_seed();
    std::string scan_x0;
    std::string scan_x1;
    auto* scan_cmd = app.add_subcommand("scan", "sweep a ratio or gap statistic across scales");
    scan_cmd->add_option("--map", scan.mapping, "catalog mapping name")->required();
    scan_cmd->add_option("--kind", scan.kind, "ratio or gap");
    auto* scan_opt_x0 = scan_cmd->add_option("--x0", scan_x0, "base point (gap scans)");
    auto* scan_opt_x1 = scan_cmd->add_option("--x1", scan_x1, "base point (ratio scans)");
    scan_opt_x0->excludes(scan_opt_x1);
    scan_cmd->add_option("--radii", scan.radii, "explicit ring radii")->delimiter(',');
    scan_cmd->add_option("--rmin", scan.rmin, "first ring radius");
    scan_cmd->add_option("--rmax", scan.rmax, "last ring radius");
    scan_cmd->add_option("--per-decade", scan.per_decade, "rings per decade (default 1)");
    scan_cmd->add_option("--band-factor", scan.band_factor,
                         "each ring samples norms in (radius, radius * factor]");
    scan_cmd->add_option("--samples", scan.samples, "samples per ring");
    scan_cmd->add_option("--seed", scan.seed, "sampling seed");
    scan_cmd->add_option("--out", scan.out, "write the CSV here instead of stdout");
    scan_cmd->callback([&] {
        if (scan_x0.empty() == scan_x1.empty()) {
            std::cerr << "error: give exactly one base point (--x0 or --x1)\n";
            rc = cli::kExitUsage;
            return;
        }
        scan.base = scan_x0.empty() ? scan_x1 : scan_x0;
        rc = cli::run_scan(scan, std::cout, std::cerr);
    });

    cli::SolveConfig solve;
    solve.seed = cli::default_seed();
    auto* solve_cmd = app.add_subcommand("solve", "iterate a mapping towards a fixed point");
    solve_cmd->add_option("--map", solve.mapping, "catalog mapping name")->required();
    solve_cmd->add_option("--start", solve.start, "starting point literal")->required();
    solve_cmd->add_option("--method", solve.method, "picard, averaged or resolvent");
    solve_cmd->add_option("--alpha", solve.alpha, "averaging weight in (0,1]");
    solve_cmd->add_option("--tol", solve.tol, "target residual ||Tx - x||");
    solve_cmd->add_option("--max-iter", solve.max_iter, "iteration budget");
    solve_cmd->add_option("--ball-x0", solve.ball_x0, "base point of the invariant ball check");
    solve_cmd->add_option("--ball-eta", solve.ball_eta, "threshold for the invariant ball");
    solve_cmd->add_option("--samples", solve.samples, "samples for the invariance check");
    solve_cmd->add_option("--seed", solve.seed, "sampling seed");
    solve_cmd->add_option("--out", solve.out, "write the JSON result here instead of stdout");
    solve_cmd->add_option("--trace", solve.trace, "also write the iteration trace CSV here");
    solve_cmd->callback([&] { rc = cli::run_solve(solve, std::cout, std::cerr); });

    cli::ReproConfig repro;
    repro.seed = cli::default_seed();
    auto* repro_cmd =
        app.add_subcommand("repro", "regenerate the bundled case studies and their manifest");
    repro_cmd->add_option("--example", repro.example,
                          "all (default) or one case: log_retreat, shift_down_2, identity_ray");
    repro_cmd->add_option("--outdir", repro.outdir, "bundle directory (default repro_out)");
    repro_cmd->add_option("--samples", repro.samples, "samples per sampled check");
    repro_cmd->add_option("--seed", repro.seed, "sampling seed");
    repro_cmd->callback([&] { rc = cli::run_repro(repro, std::cerr); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitUsage;
    }
    return rc;
}
