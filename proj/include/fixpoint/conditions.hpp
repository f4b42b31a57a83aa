#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fixpoint/mappings.hpp"
#include "fixpoint/report.hpp"
#include "fixpoint/spaces.hpp"

namespace fixpoint {

/// How a condition's inequality is shaped. For base x and far point y:
///   Ratio:    d(Tx, Ty) <= r * d(x, y)
///   Drop:     d(Tx, Ty) <= d(x, y) - lambda
///   SelfDrop: d(Tx, Ty) <= d(x, y) - d(Tx, x)     (base-dependent drop)
enum class MarginForm { Ratio, Drop, SelfDrop };

MarginForm form_of(ConditionId id);
std::string to_string(MarginForm form);

/// A fully instantiated condition: which inequality, with which parameter,
/// at which base point, beyond which norm threshold. Conditions that
/// quantify over all bases (C1, C3, C5) are checked one base at a time.
struct ConditionSpec {
    ConditionId id = ConditionId::C1;
    MarginForm form = MarginForm::Ratio;
    double param = 0.0;  // r for Ratio, lambda for Drop, unused for SelfDrop
    std::optional<Point> base;
    double eta = 0.0;

    static ConditionSpec ratio(ConditionId id, double r, Point base, double eta);
    static ConditionSpec drop(ConditionId id, double lambda, Point base, double eta);
    static ConditionSpec self_drop(Point base, double eta);

    /// Throws ParamError when parameters are out of range for the form.
    void validate() const;
    json to_json() const;
};

/// Signed slack of the condition's inequality at one far point y:
/// rhs - lhs with the subtraction ordered so that cancellation-free cases
/// (identity mappings, integer points) come out bit-exact.
///   Ratio:    r * d(base, y) - d(T base, T y)
///   Drop:     (d(base, y) - d(T base, T y)) - lambda
///   SelfDrop: (d(base, y) - d(T base, T y)) - d(T base, base)
double pointwise_margin(const Mapping& m, const ConditionSpec& spec, const Point& base,
                        const Point& y);

/// Norm band (eta, radius_max] to draw far points from. Its eta may sit
/// above the condition's threshold but never below it.
struct Annulus {
    double eta = 0.0;
    double radius_max = 0.0;
};

/// Samples the annulus (plus any registered witness for the condition, which
/// is evaluated first so reports surface the canonical counterexample) and
/// evaluates the margin at every point. Refutes on any margin below the
/// float slack; otherwise reports holds-on-samples with the worst margin.
VerificationReport verify_condition(const Mapping& m, const ConditionSpec& spec,
                                    Annulus annulus, int samples, std::uint64_t seed);

struct DerivedRatio {
    double r;
    double eta;
};

/// From a one-base ratio bound (r', x0, eta') produces a bound valid at any
/// other base x1: r = (1 + r') / 2 and
/// eta = max(eta', ||x1|| + (d(x1,x0) + d(Tx1,Tx0)) / (r - r')).
DerivedRatio derive_c1_from_c2(const Mapping& m, double r_prime, const Point& x0,
                               double eta_prime, const Point& x1);

/// From a one-base ratio bound produces, for a requested drop lambda, the
/// threshold eta = max(eta', ||x0|| + lambda / (1 - r')) beyond which the
/// drop holds at x0.
double derive_c4_from_c2(double r_prime, const Point& x0, double eta_prime, double lambda);

/// Threshold schedule lambda -> eta(lambda); monotone in lambda.
struct EtaSchedule {
    std::function<double(double)> fn;
    std::string desc;

    double operator()(double lambda) const;
};

/// The schedule realised by derive_c4_from_c2 for fixed (r', x0, eta').
EtaSchedule c4_schedule_from_c2(double r_prime, const Point& x0, double eta_prime);

/// Transports a one-base drop schedule to another base x1:
/// eta = schedule(lambda + d(x1,x0) + d(Tx1,Tx0)).
double derive_c3_from_c4(const Mapping& m, const Point& x0, const EtaSchedule& schedule,
                         const Point& x1, double lambda);

struct ProbeStep {
    double t;
    double y_norm;
    double residual;      // ||T y_t - y_t||
    double identity_gap;  // | ||T y_t - y_t|| - t * ||T y_t - x1|| |
    int iterations;
};

struct ProbeResult {
    double d_estimate;  // smallest residual seen; upper bound for inf ||Tx - x||
    Point best_point;
    std::vector<ProbeStep> steps;

    json to_json() const;
};

/// Drives the damped fixed-point equation y = (1-t) T y + t x1 along a
/// decreasing t schedule. Residuals scale like t, giving ever-better upper
/// bounds on the displacement infimum d = inf ||Tx - x||; a drop condition
/// with lambda > d at threshold eta would be contradicted by any probe point
/// of norm above eta, so small residuals found there refute such drops.
ProbeResult residual_infimum_probe(const Mapping& m, const Point& x1, double lambda,
                                   double eta, const std::vector<double>& t_schedule);

/// One ring of a scale sweep: the extreme statistic over sampled points with
/// norms in (radius, radius * band_factor], and the norm of the point that
/// attained it.
struct CurvePoint {
    double radius;
    double statistic;
    int samples;
    double arg_norm;
};

/// statistic = max d(Tx1, Ty) / d(x1, y): the observed contraction ratio at
/// each scale. Approaching 1 from below means no single r < 1 works.
std::vector<CurvePoint> ratio_curve(const Mapping& m, const Point& x1,
                                    const std::vector<double>& radii, double band_factor,
                                    int samples, std::uint64_t seed);

/// statistic = max d(Tx0, Ty) - d(x0, y): the observed additive drop at each
/// scale (negated). Diverging to -infinity means every fixed drop eventually
/// holds; staying near 0 means drops fail.
std::vector<CurvePoint> gap_curve(const Mapping& m, const Point& x0,
                                  const std::vector<double>& radii, double band_factor,
                                  int samples, std::uint64_t seed);

/// CSV rows "radius,statistic,samples" (header included).
std::string curve_to_csv(const std::vector<CurvePoint>& curve);

/// Deterministic pool of base points for universally quantified checks:
/// `count` sampled moderate-norm points plus the mapping's special points.
std::vector<Point> universal_bases(const Mapping& m, int count, std::uint64_t seed);

}  // namespace fixpoint
