#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fixpoint::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRefuted = 3;
inline constexpr int kExitNoConvergence = 4;
inline constexpr int kExitMismatch = 5;

/// Seed taken from the FIXPOINT_SEED environment variable when set and
/// parseable, 42 otherwise.
std::uint64_t default_seed();

/// `check`: verify one condition spec on one mapping, write a JSON report.
struct CheckConfig {
    std::string mapping;
    std::string condition;        // C1..C6
    std::optional<double> r;      // ratio conditions
    std::optional<double> lambda; // drop conditions
    std::string base;             // point literal, e.g. "1" or "{1:1,3:2}"
    double eta = 0.0;
    std::optional<double> radius_max;  // default: 100 * max(eta, 1)
    int samples = 10000;
    std::uint64_t seed = 42;
    std::string out;  // JSON file; empty writes to the payload stream
};
int run_check(const CheckConfig& cfg, std::ostream& payload, std::ostream& diag);

/// `scan`: sweep the contraction ratio or additive gap across scales, CSV out.
struct ScanConfig {
    std::string mapping;
    std::string kind = "ratio";  // "ratio" or "gap"
    std::string base;
    std::vector<double> radii;  // explicit ring radii; wins over rmin/rmax
    double rmin = 0.0;
    double rmax = 0.0;
    int per_decade = 1;
    double band_factor = 10.0;
    int samples = 10000;
    std::uint64_t seed = 42;
    std::string out;  // CSV file; empty writes to the payload stream
};
int run_scan(const ScanConfig& cfg, std::ostream& payload, std::ostream& diag);

/// `solve`: iterate to a fixed point, optionally confirming an invariant
/// ball first and watching that the orbit never leaves it.
struct SolveConfig {
    std::string mapping;
    std::string start;
    std::string method = "picard";  // "picard" | "averaged" | "resolvent"
    double alpha = 0.5;
    double tol = 1e-9;
    int max_iter = 200000;
    std::string ball_x0;  // with ball_eta, run the invariance check
    std::optional<double> ball_eta;
    int samples = 1000;  // for the invariance check
    std::uint64_t seed = 42;
    std::string out;    // JSON file; empty writes to the payload stream
    std::string trace;  // optional CSV file with the iteration trace
};
int run_solve(const SolveConfig& cfg, std::ostream& payload, std::ostream& diag);

/// `repro`: regenerate the bundled case studies (curves, checks, manifest)
/// into a directory and compare observed verdicts against expected ones.
struct ReproConfig {
    std::string example = "all";  // "all" or a case name (catalog mapping name)
    std::string outdir = "repro_out";
    int samples = 10000;
    std::uint64_t seed = 42;
};
int run_repro(const ReproConfig& cfg, std::ostream& diag);

}  // namespace fixpoint::cli
