#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fixpoint/conditions.hpp"
#include "fixpoint/mappings.hpp"
#include "fixpoint/report.hpp"
#include "fixpoint/spaces.hpp"

namespace fixpoint {

/// Closed ball D = {y in space : d(y, center) <= radius}, itself closed,
/// convex and bounded inside its parent space.
struct Ball {
    Point center;
    double radius = 0.0;
    Space space = Space::real_interval(0.0);

    bool contains(const Point& y) const;
    json to_json() const;
};

struct TraceStep {
    int k;
    double residual;  // ||T x_k - x_k||
    double step;      // distance moved to reach x_{k+1}
};

struct SolverTrace {
    std::string method;
    std::vector<TraceStep> steps;
    bool converged = false;

    int iterations() const { return steps.empty() ? 0 : steps.back().k; }
    /// CSV rows "k,residual,step" (header included).
    std::string to_csv() const;
};

/// An iteration ran out of budget before reaching its tolerance. Carries the
/// full trace so callers can inspect how far it got.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what_arg, SolverTrace trace)
        : Error(what_arg), trace_(std::move(trace)) {}
    const SolverTrace& trace() const { return trace_; }

private:
    SolverTrace trace_;
};

/// The ball at x0 of radius eta + ||x0|| + ||T x0 - x0||. Any drop-type
/// bound at x0 with threshold eta forces T to map this ball into itself.
Ball invariant_ball(const Mapping& m, const Point& x0, double eta);

/// Samples the ball (boundary points included deliberately) and checks that
/// every image stays inside: margin = radius - d(T y, center) >= 0.
VerificationReport verify_invariance(const Mapping& m, const Ball& ball, int samples,
                                     std::uint64_t seed);

struct ResolventResult {
    Point point;
    SolverTrace trace;
    /// d(z, (1-t) T z + t x1) at the returned z; at most tol by construction.
    double equation_residual = 0.0;
};

/// Solves z = (1-t) T z + t x1 by damped iteration. The update is a strict
/// (1-t)-contraction, so successive steps shrink geometrically; iteration
/// stops once step <= tol * t / (1-t), which guarantees the returned point
/// is within tol of the exact solution. Throws ConvergenceError when
/// max_iter is exhausted first.
ResolventResult resolvent(const Mapping& m, const Point& x1, double t, double tol,
                          int max_iter, std::optional<Point> start = std::nullopt);

struct PicardMethod {};
struct AveragedMethod {
    double alpha = 0.5;  // x_{k+1} = (1-alpha) x_k + alpha T x_k
};
struct ResolventScheduleMethod {
    std::vector<double> ts;  // decreasing damping levels in (0, 1)
};

using Method = std::variant<PicardMethod, AveragedMethod, ResolventScheduleMethod>;

std::string to_string(const Method& method);
/// Damping levels 2^-1, ..., 2^-20.
std::vector<double> default_resolvent_schedule();

/// Certifies the found point as a base for the self-drop condition:
/// a fixed point satisfies it at every threshold, eta = 1 is recorded.
struct Certificate {
    Point x0;
    double eta = 1.0;
};

struct FixedPointResult {
    Point point;
    double residual = 0.0;  // ||T point - point||
    SolverTrace trace;
    bool converged = false;
    std::optional<Certificate> certificate;

    json to_json() const;
};

using IterateObserver = std::function<void(const Point&)>;

/// Iterates towards a fixed point with the chosen method until the residual
/// ||T x - x|| falls to tol. Non-convergence within max_iter is reported via
/// the `converged` flag, not an error. The observer, when given, sees every
/// new iterate; useful for confirming that orbits stay inside a ball.
/// With the resolvent schedule, residuals scale like t * ||T x - start||, so
/// only modest tolerances are reachable unless an exact fixed point exists;
/// max_iter is then a total budget across all damping levels.
FixedPointResult find_fixed_point(const Mapping& m, const Point& start, const Method& method,
                                  double tol, int max_iter,
                                  const IterateObserver& observer = {});

/// Checks that an (approximate) fixed point works as a self-drop base: for
/// sampled far points the drop inequality holds up to the point's own
/// residual. An exact fixed point of a nonexpansive mapping satisfies it
/// with no allowance at all.
VerificationReport certify_c6_from_fixed_point(const Mapping& m, const Point& p, int samples,
                                               std::uint64_t seed, double tol = 1e-6);

}  // namespace fixpoint
