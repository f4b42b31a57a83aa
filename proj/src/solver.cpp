#include "fixpoint/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixpoint/numfmt.hpp"
#include "fixpoint/rng.hpp"

namespace fixpoint {

bool Ball::contains(const Point& y) const {
    return space.contains(y) && space.distance(y, center) <= radius;
}

json Ball::to_json() const {
    json j;
    j["center"] = center.to_json();
    j["radius"] = radius;
    j["space"] = space.to_json();
    return j;
}

std::string SolverTrace::to_csv() const {
    std::string out = "k,residual,step\n";
    for (const auto& s : steps) {
        out += std::to_string(s.k);
        out += ",";
        out += format_double(s.residual);
        out += ",";
        out += format_double(s.step);
        out += "\n";
    }
    return out;
}

Ball invariant_ball(const Mapping& m, const Point& x0, double eta) {
    if (!(eta > 0.0)) throw ParamError("invariant_ball: eta must be positive");
    const Space& sp = m.domain();
    if (!sp.contains(x0)) throw DomainError("invariant_ball: x0 is outside the domain");
    double radius = eta + sp.norm(x0) + sp.distance(m.apply(x0), x0);
    return Ball{x0, radius, sp};
}

namespace {

// Deterministic ball candidates: the center, points pushed to the boundary
// along each active direction, and filtered annulus draws for bulk coverage.
std::vector<Point> ball_candidates(const Ball& ball, int samples, std::uint64_t seed) {
    const Space& sp = ball.space;
    const Point& c = ball.center;
    double rho = ball.radius;
    std::vector<Point> cand;
    cand.push_back(c);
    if (sp.kind() == SpaceKind::RealInterval) {
        double cv = c.scalar_value();
        double lo = std::max(sp.lower(), cv - rho);
        double hi = cv + rho;
        if (sp.upper()) hi = std::min(hi, *sp.upper());
        cand.push_back(Point::scalar(lo));
        cand.push_back(Point::scalar(hi));
        SampleRng rng(mix_seed(seed, {0xBA11ULL}));
        for (int i = 0; i < samples; ++i) cand.push_back(Point::scalar(rng.uniform(lo, hi)));
        return cand;
    }
    // Box: per-coordinate pushes to the boundary of ball and box...
    for (const auto& [n, v] : c.entries()) {
        Point::Entries up = c.entries();
        up[n] = std::min(static_cast<double>(n), v + rho);
        cand.push_back(Point::seq(std::move(up)));
        Point::Entries down = c.entries();
        down[n] = std::max(0.0, v - rho);
        cand.push_back(Point::seq(std::move(down)));
    }
    // ... a fresh spike at distance exactly rho ...
    int spike = std::max(1, static_cast<int>(std::ceil(rho)));
    while (c.coord(spike) != 0.0) ++spike;
    if (rho <= static_cast<double>(spike)) {
        Point::Entries e = c.entries();
        e[spike] = rho;
        cand.push_back(Point::seq(std::move(e)));
    }
    cand.push_back(Point::zero_seq());
    // ... and annulus draws kept when they land inside the ball.
    double hi = sp.norm(c) + rho;
    auto drawn = sp.sample_annulus(hi * 1e-6, hi, samples, mix_seed(seed, {0xBA11ULL}));
    for (auto& y : drawn) {
        if (sp.distance(y, c) <= rho) cand.push_back(std::move(y));
    }
    return cand;
}

}  // namespace

VerificationReport verify_invariance(const Mapping& m, const Ball& ball, int samples,
                                     std::uint64_t seed) {
    if (samples < 0) throw ParamError("verify_invariance: samples must be >= 0");
    if (!(ball.radius > 0.0)) throw ParamError("verify_invariance: ball radius must be positive");
    if (!(ball.space == m.domain())) {
        throw StructureError("verify_invariance: ball does not live in the mapping's domain");
    }
    const Space& sp = m.domain();
    if (!sp.contains(ball.center)) {
        throw DomainError("verify_invariance: ball center is outside the domain");
    }

    VerificationReport rep;
    rep.spec = json{{"check", "ball_invariance"},
                    {"center", ball.center.to_json()},
                    {"radius", ball.radius}};
    rep.mapping = m.name();
    rep.seed = seed;
    rep.band_lo = 0.0;
    rep.band_hi = ball.radius;
    rep.note = "sampled, not proved";
    rep.exact = true;

    double worst = std::numeric_limits<double>::infinity();
    long evaluated = 0;
    for (const Point& y : ball_candidates(ball, samples, seed)) {
        if (!ball.contains(y)) continue;
        Point ty = m.apply(y);
        double dist = sp.distance(ty, ball.center);
        double margin = ball.radius - dist;
        ++evaluated;
        bool exact = y.is_integral() && ty.is_integral() && ball.center.is_integral() &&
                     std::nearbyint(ball.radius) == ball.radius;
        rep.exact = rep.exact && exact;
        worst = std::min(worst, margin);
        double slack = exact ? 0.0 : float_slack(std::max(dist, ball.radius));
        if (!rep.counterexample && margin < -slack) {
            rep.counterexample = Counterexample{y, std::nullopt, dist, ball.radius};
        }
    }
    rep.samples = evaluated;
    rep.worst_margin = evaluated == 0 ? 0.0 : worst;
    rep.verdict = rep.counterexample ? Verdict::Refuted : Verdict::HoldsOnSamples;
    return rep;
}

ResolventResult resolvent(const Mapping& m, const Point& x1, double t, double tol, int max_iter,
                          std::optional<Point> start) {
    if (!(t > 0.0 && t < 1.0)) throw ParamError("resolvent: t must lie in (0, 1)");
    if (!(tol > 0.0)) throw ParamError("resolvent: tol must be positive");
    if (max_iter < 1) throw ParamError("resolvent: max_iter must be >= 1");
    const Space& sp = m.domain();
    if (!sp.contains(x1)) throw DomainError("resolvent: x1 is outside the domain");
    Point z = start.value_or(x1);
    if (!sp.contains(z)) throw DomainError("resolvent: start is outside the domain");

    SolverTrace trace;
    trace.method = "resolvent(t=" + format_double(t) + ")";
    // The update F z = (1-t) T z + t x1 contracts with factor 1-t, so
    // once a step is below tol * t / (1-t) the limit is within tol.
    double stop = tol * t / (1.0 - t);
    for (int k = 0; k <= max_iter; ++k) {
        Point tz = m.apply(z);
        double residual = sp.distance(tz, z);
        Point next = lin_comb(1.0 - t, tz, t, x1);
        double step = sp.distance(next, z);
        trace.steps.push_back(TraceStep{k, residual, step});
        z = std::move(next);
        if (step <= stop) {
            trace.converged = true;
            Point tz2 = m.apply(z);
            double eq = sp.distance(z, lin_comb(1.0 - t, tz2, t, x1));
            return ResolventResult{std::move(z), std::move(trace), eq};
        }
    }
    throw ConvergenceError("resolvent: no convergence within " + std::to_string(max_iter) +
                               " iterations at t = " + format_double(t),
                           std::move(trace));
}

std::string to_string(const Method& method) {
    if (std::holds_alternative<PicardMethod>(method)) return "picard";
    if (const auto* a = std::get_if<AveragedMethod>(&method)) {
        return "averaged(alpha=" + format_double(a->alpha) + ")";
    }
    const auto& s = std::get<ResolventScheduleMethod>(method);
    return "resolvent_schedule(levels=" + std::to_string(s.ts.size()) + ")";
}

std::vector<double> default_resolvent_schedule() {
    std::vector<double> ts;
    double t = 0.5;
    for (int k = 0; k < 20; ++k) {
        ts.push_back(t);
        t /= 2.0;
    }
    return ts;
}

json FixedPointResult::to_json() const {
    json j;
    j["point"] = point.to_json();
    j["residual"] = residual;
    j["converged"] = converged;
    j["iterations"] = trace.iterations();
    j["method"] = trace.method;
    if (certificate) {
        j["certificate"] = json{{"x0", certificate->x0.to_json()}, {"eta", certificate->eta}};
    } else {
        j["certificate"] = nullptr;
    }
    return j;
}

namespace {

FixedPointResult iterate_fixed_point(const Mapping& m, const Point& start, double alpha,
                                     const std::string& method_name, double tol, int max_iter,
                                     const IterateObserver& observer) {
    const Space& sp = m.domain();
    SolverTrace trace;
    trace.method = method_name;
    Point x = start;
    for (int k = 0; k <= max_iter; ++k) {
        Point tx = m.apply(x);
        double residual = sp.distance(tx, x);
        if (residual <= tol) {
            trace.steps.push_back(TraceStep{k, residual, 0.0});
            trace.converged = true;
            break;
        }
        if (k == max_iter) {
            trace.steps.push_back(TraceStep{k, residual, 0.0});
            break;
        }
        Point next = alpha == 1.0 ? std::move(tx) : lin_comb(1.0 - alpha, x, alpha, tx);
        double step = sp.distance(next, x);
        trace.steps.push_back(TraceStep{k, residual, step});
        x = std::move(next);
        if (observer) observer(x);
    }
    FixedPointResult out;
    out.residual = sp.distance(m.apply(x), x);
    out.point = std::move(x);
    out.converged = trace.converged;
    out.trace = std::move(trace);
    if (out.converged) out.certificate = Certificate{out.point, 1.0};
    return out;
}

FixedPointResult schedule_fixed_point(const Mapping& m, const Point& start,
                                      const ResolventScheduleMethod& sched,
                                      const std::string& method_name, double tol, int max_iter,
                                      const IterateObserver& observer) {
    if (sched.ts.empty()) throw ParamError("find_fixed_point: empty damping schedule");
    for (size_t i = 0; i < sched.ts.size(); ++i) {
        if (!(sched.ts[i] > 0.0 && sched.ts[i] < 1.0)) {
            throw ParamError("find_fixed_point: damping levels must lie in (0, 1)");
        }
        if (i > 0 && !(sched.ts[i] < sched.ts[i - 1])) {
            throw ParamError("find_fixed_point: damping levels must decrease");
        }
    }
    const Space& sp = m.domain();
    SolverTrace trace;
    trace.method = method_name;
    Point best = start;
    double best_res = sp.distance(m.apply(start), start);
    trace.steps.push_back(TraceStep{0, best_res, 0.0});
    // max_iter is the total budget across all damping levels; residuals at
    // level t scale like t * ||T y_t - start||, so deep levels are the
    // expensive ones and are only reached while budget remains.
    int budget = max_iter;
    int level = 0;
    Point prev = start;
    if (best_res > tol) {
        for (double t : sched.ts) {
            if (budget <= 0) break;
            ResolventResult rr = [&]() -> ResolventResult {
                try {
                    return resolvent(m, start, t, std::min(tol, 1e-10), budget);
                } catch (ConvergenceError& e) {
                    budget = 0;
                    ResolventResult partial;
                    partial.point = prev;
                    partial.trace = e.trace();
                    partial.equation_residual = std::numeric_limits<double>::infinity();
                    return partial;
                }
            }();
            if (budget <= 0) break;
            budget -= static_cast<int>(rr.trace.steps.size());
            ++level;
            double res = sp.distance(m.apply(rr.point), rr.point);
            trace.steps.push_back(TraceStep{level, res, sp.distance(rr.point, prev)});
            prev = rr.point;
            if (observer) observer(rr.point);
            if (res < best_res) {
                best_res = res;
                best = std::move(rr.point);
            }
            if (best_res <= tol) break;
        }
    }
    trace.converged = best_res <= tol;
    FixedPointResult out;
    out.point = std::move(best);
    out.residual = best_res;
    out.converged = trace.converged;
    out.trace = std::move(trace);
    if (out.converged) out.certificate = Certificate{out.point, 1.0};
    return out;
}

}  // namespace

FixedPointResult find_fixed_point(const Mapping& m, const Point& start, const Method& method,
                                  double tol, int max_iter, const IterateObserver& observer) {
    if (!(tol >= 0.0)) throw ParamError("find_fixed_point: tol must be >= 0");
    if (max_iter < 1) throw ParamError("find_fixed_point: max_iter must be >= 1");
    const Space& sp = m.domain();
    if (!sp.contains(start)) throw DomainError("find_fixed_point: start is outside the domain");
    std::string name = to_string(method);
    if (std::holds_alternative<PicardMethod>(method)) {
        return iterate_fixed_point(m, start, 1.0, name, tol, max_iter, observer);
    }
    if (const auto* a = std::get_if<AveragedMethod>(&method)) {
        if (!(a->alpha > 0.0 && a->alpha <= 1.0)) {
            throw ParamError("find_fixed_point: alpha must lie in (0, 1]");
        }
        return iterate_fixed_point(m, start, a->alpha, name, tol, max_iter, observer);
    }
    return schedule_fixed_point(m, start, std::get<ResolventScheduleMethod>(method), name, tol,
                                max_iter, observer);
}

VerificationReport certify_c6_from_fixed_point(const Mapping& m, const Point& p, int samples,
                                               std::uint64_t seed, double tol) {
    if (samples < 0) throw ParamError("certify_c6_from_fixed_point: samples must be >= 0");
    if (!(tol >= 0.0)) throw ParamError("certify_c6_from_fixed_point: tol must be >= 0");
    const Space& sp = m.domain();
    if (!sp.contains(p)) {
        throw DomainError("certify_c6_from_fixed_point: point is outside the domain");
    }
    Point tp = m.apply(p);
    double resid = sp.distance(tp, p);
    if (resid > tol) {
        throw ParamError("certify_c6_from_fixed_point: residual " + format_double(resid) +
                         " exceeds tolerance " + format_double(tol));
    }

    // A genuine fixed point gives d(Tp, Ty) <= d(p, y) - ||Tp - p|| outright;
    // an approximate one can miss by at most its own residual, which is
    // granted as allowance below.
    double eta = 1.0;
    double hi = std::max(100.0, 100.0 * (sp.norm(p) + 1.0));
    ConditionSpec spec = ConditionSpec::self_drop(p, eta);

    VerificationReport rep;
    rep.spec = spec.to_json();
    rep.spec["allowance"] = resid;
    rep.mapping = m.name();
    rep.seed = seed;
    rep.band_lo = eta;
    rep.band_hi = hi;
    rep.note = "sampled, not proved";
    rep.exact = true;

    bool base_integral = p.is_integral() && tp.is_integral();
    double worst = std::numeric_limits<double>::infinity();
    long evaluated = 0;
    for (const Point& y : sp.sample_annulus(eta, hi, samples, mix_seed(seed, {0xCE27ULL}))) {
        Point ty = m.apply(y);
        double d1 = sp.distance(p, y);
        double d2 = sp.distance(tp, ty);
        double margin = (d1 - d2) - resid;
        ++evaluated;
        bool exact = base_integral && y.is_integral() && ty.is_integral() && resid == 0.0;
        rep.exact = rep.exact && exact;
        worst = std::min(worst, margin);
        double slack = (exact ? 0.0 : float_slack(std::max(d1, d2))) + resid;
        if (!rep.counterexample && margin < -slack) {
            rep.counterexample = Counterexample{y, std::nullopt, d2, d1 - resid};
        }
    }
    rep.samples = evaluated;
    rep.worst_margin = evaluated == 0 ? 0.0 : worst;
    rep.verdict = rep.counterexample ? Verdict::Refuted : Verdict::HoldsOnSamples;
    return rep;
}

}  // namespace fixpoint
