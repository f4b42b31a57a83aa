#include "fixpoint/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixpoint/numfmt.hpp"
#include "fixpoint/rng.hpp"
#include "fixpoint/solver.hpp"

namespace fixpoint {

MarginForm form_of(ConditionId id) {
    switch (id) {
        case ConditionId::C1:
        case ConditionId::C2: return MarginForm::Ratio;
        case ConditionId::C3:
        case ConditionId::C4:
        case ConditionId::C5: return MarginForm::Drop;
        case ConditionId::C6: return MarginForm::SelfDrop;
    }
    throw ParamError("form_of: bad ConditionId");
}

std::string to_string(MarginForm form) {
    switch (form) {
        case MarginForm::Ratio: return "ratio";
        case MarginForm::Drop: return "drop";
        case MarginForm::SelfDrop: return "self-drop";
    }
    throw ParamError("to_string: bad MarginForm");
}

ConditionSpec ConditionSpec::ratio(ConditionId id, double r, Point base, double eta) {
    if (form_of(id) != MarginForm::Ratio) {
        throw ParamError("ConditionSpec::ratio: " + to_string(id) + " is not a ratio condition");
    }
    ConditionSpec spec{id, MarginForm::Ratio, r, std::move(base), eta};
    spec.validate();
    return spec;
}

ConditionSpec ConditionSpec::drop(ConditionId id, double lambda, Point base, double eta) {
    if (form_of(id) != MarginForm::Drop) {
        throw ParamError("ConditionSpec::drop: " + to_string(id) + " is not a drop condition");
    }
    ConditionSpec spec{id, MarginForm::Drop, lambda, std::move(base), eta};
    spec.validate();
    return spec;
}

ConditionSpec ConditionSpec::self_drop(Point base, double eta) {
    ConditionSpec spec{ConditionId::C6, MarginForm::SelfDrop, 0.0, std::move(base), eta};
    spec.validate();
    return spec;
}

void ConditionSpec::validate() const {
    if (form != form_of(id)) throw ParamError("ConditionSpec: form does not match id");
    if (form == MarginForm::Ratio && !(param > 0.0 && param < 1.0)) {
        throw ParamError("ConditionSpec: ratio parameter must lie in (0, 1)");
    }
    if (form == MarginForm::Drop && !(param > 0.0 && std::isfinite(param))) {
        throw ParamError("ConditionSpec: drop parameter must be positive");
    }
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw ParamError("ConditionSpec: eta must be positive");
    }
}

json ConditionSpec::to_json() const {
    json j;
    j["id"] = to_string(id);
    j["form"] = to_string(form);
    if (form == MarginForm::Ratio) j["r"] = param;
    if (form == MarginForm::Drop) j["lambda"] = param;
    j["base"] = base ? base->to_json() : json(nullptr);
    j["eta"] = eta;
    return j;
}

namespace {

bool param_integral(double v) { return std::abs(v) < 9.0e15 && std::nearbyint(v) == v; }

struct MarginEval {
    double margin;
    double lhs;  // d(T base, T y)
    double rhs;  // allowed bound for it
    bool exact;  // no rounding occurred anywhere in the evaluation
};

// `base_integral` covers base and T base; self_drop is d(T base, base).
MarginEval eval_margin(const Space& sp, MarginForm form, double param, const Point& base,
                       const Point& tbase, double self_drop, const Point& y, const Point& ty,
                       bool base_integral) {
    double d1 = sp.distance(base, y);
    double d2 = sp.distance(tbase, ty);
    bool integral = base_integral && y.is_integral() && ty.is_integral();
    MarginEval ev{};
    ev.lhs = d2;
    switch (form) {
        case MarginForm::Ratio:
            ev.rhs = param * d1;
            ev.margin = ev.rhs - d2;
            // The product is exact iff fma sees no rounding to undo.
            ev.exact = integral && std::fma(param, d1, -ev.rhs) == 0.0;
            break;
        case MarginForm::Drop:
            ev.rhs = d1 - param;
            // Gap first: on points where distances agree the margin is an
            // exact -param instead of a rounded one.
            ev.margin = (d1 - d2) - param;
            ev.exact = integral && param_integral(param);
            break;
        case MarginForm::SelfDrop:
            ev.rhs = d1 - self_drop;
            ev.margin = (d1 - d2) - self_drop;
            ev.exact = integral;
            break;
    }
    return ev;
}

}  // namespace

double pointwise_margin(const Mapping& m, const ConditionSpec& spec, const Point& base,
                        const Point& y) {
    spec.validate();
    const Space& sp = m.domain();
    if (!sp.contains(base)) throw DomainError("pointwise_margin: base is outside the domain");
    if (!sp.contains(y)) throw DomainError("pointwise_margin: y is outside the domain");
    Point tbase = m.apply(base);
    double self_drop = sp.distance(tbase, base);
    return eval_margin(sp, spec.form, spec.param, base, tbase, self_drop, y, m.apply(y),
                       base.is_integral() && tbase.is_integral())
        .margin;
}

VerificationReport verify_condition(const Mapping& m, const ConditionSpec& spec, Annulus annulus,
                                    int samples, std::uint64_t seed) {
    spec.validate();
    if (!spec.base) {
        throw ParamError("verify_condition: spec needs a concrete base point");
    }
    if (samples < 0) throw ParamError("verify_condition: samples must be >= 0");
    if (!(annulus.eta >= spec.eta)) {
        throw ParamError("verify_condition: annulus may not sample below the condition's eta");
    }
    if (!(annulus.radius_max > annulus.eta)) {
        throw ParamError("verify_condition: annulus needs radius_max > eta");
    }

    const Space& sp = m.domain();
    const Point& base = *spec.base;
    if (!sp.contains(base)) throw DomainError("verify_condition: base is outside the domain");
    Point tbase = m.apply(base);
    double self_drop = sp.distance(tbase, base);
    bool base_integral = base.is_integral() && tbase.is_integral();

    // The registered witness goes first: when the condition fails, the
    // counterexample surfaced should be the canonical adversarial point.
    std::vector<Point> points;
    if (auto w = m.witness(spec.id, annulus.eta, spec.param)) {
        if (sp.contains(*w) && sp.norm(*w) > spec.eta) points.push_back(*w);
    }
    auto drawn = sp.sample_annulus(annulus.eta, annulus.radius_max, samples, seed);
    points.insert(points.end(), drawn.begin(), drawn.end());

    VerificationReport rep;
    rep.spec = spec.to_json();
    rep.mapping = m.name();
    rep.seed = seed;
    rep.band_lo = annulus.eta;
    rep.band_hi = annulus.radius_max;
    rep.note = "sampled, not proved";
    rep.exact = true;

    double worst = std::numeric_limits<double>::infinity();
    for (const Point& y : points) {
        MarginEval ev = eval_margin(sp, spec.form, spec.param, base, tbase, self_drop, y,
                                    m.apply(y), base_integral);
        worst = std::min(worst, ev.margin);
        rep.exact = rep.exact && ev.exact;
        double slack = ev.exact ? 0.0 : float_slack(std::max(std::abs(ev.lhs), std::abs(ev.rhs)));
        if (!rep.counterexample && ev.margin < -slack) {
            rep.counterexample = Counterexample{y, std::nullopt, ev.lhs, ev.rhs};
        }
    }
    rep.samples = static_cast<long>(points.size());
    rep.worst_margin = points.empty() ? 0.0 : worst;
    rep.verdict = rep.counterexample ? Verdict::Refuted : Verdict::HoldsOnSamples;

    if (rep.counterexample) {
        // Refutation soundness: the reported point must genuinely violate.
        const Point& y = rep.counterexample->y;
        if (!sp.contains(y) || !(sp.norm(y) > spec.eta)) {
            throw Error("verify_condition: counterexample failed its own re-check");
        }
    }
    return rep;
}

DerivedRatio derive_c1_from_c2(const Mapping& m, double r_prime, const Point& x0,
                               double eta_prime, const Point& x1) {
    if (!(r_prime > 0.0 && r_prime < 1.0)) {
        throw ParamError("derive_c1_from_c2: r' must lie in (0, 1)");
    }
    if (!(eta_prime > 0.0)) throw ParamError("derive_c1_from_c2: eta' must be positive");
    const Space& sp = m.domain();
    if (!sp.contains(x0) || !sp.contains(x1)) {
        throw DomainError("derive_c1_from_c2: base points must lie in the domain");
    }
    double r = (1.0 + r_prime) / 2.0;
    double shift = sp.distance(x1, x0) + sp.distance(m.apply(x1), m.apply(x0));
    double eta = std::max(eta_prime, sp.norm(x1) + shift / (r - r_prime));
    return DerivedRatio{r, eta};
}

double derive_c4_from_c2(double r_prime, const Point& x0, double eta_prime, double lambda) {
    if (!(r_prime > 0.0 && r_prime < 1.0)) {
        throw ParamError("derive_c4_from_c2: r' must lie in (0, 1)");
    }
    if (!(eta_prime > 0.0)) throw ParamError("derive_c4_from_c2: eta' must be positive");
    if (!(lambda > 0.0)) throw ParamError("derive_c4_from_c2: lambda must be positive");
    return std::max(eta_prime, point_norm(x0) + lambda / (1.0 - r_prime));
}

double EtaSchedule::operator()(double lambda) const {
    if (!fn) throw ParamError("EtaSchedule: empty schedule");
    if (!(lambda > 0.0)) throw ParamError("EtaSchedule: lambda must be positive");
    double eta = fn(lambda);
    if (!std::isfinite(eta) || !(eta > 0.0)) {
        throw ParamError("EtaSchedule: schedule produced a non-positive eta");
    }
    return eta;
}

EtaSchedule c4_schedule_from_c2(double r_prime, const Point& x0, double eta_prime) {
    if (!(r_prime > 0.0 && r_prime < 1.0)) {
        throw ParamError("c4_schedule_from_c2: r' must lie in (0, 1)");
    }
    if (!(eta_prime > 0.0)) throw ParamError("c4_schedule_from_c2: eta' must be positive");
    double norm0 = point_norm(x0);
    EtaSchedule sched;
    sched.fn = [r_prime, norm0, eta_prime](double lambda) {
        return std::max(eta_prime, norm0 + lambda / (1.0 - r_prime));
    };
    sched.desc = "max(" + format_double(eta_prime) + ", " + format_double(norm0) +
                 " + lambda/" + format_double(1.0 - r_prime) + ")";
    return sched;
}

double derive_c3_from_c4(const Mapping& m, const Point& x0, const EtaSchedule& schedule,
                         const Point& x1, double lambda) {
    if (!(lambda > 0.0)) throw ParamError("derive_c3_from_c4: lambda must be positive");
    const Space& sp = m.domain();
    if (!sp.contains(x0) || !sp.contains(x1)) {
        throw DomainError("derive_c3_from_c4: base points must lie in the domain");
    }
    double inflated = lambda + sp.distance(x1, x0) + sp.distance(m.apply(x1), m.apply(x0));
    return schedule(inflated);
}

json ProbeResult::to_json() const {
    json j;
    j["d_estimate"] = d_estimate;
    j["best_point"] = best_point.to_json();
    json steps_json = json::array();
    for (const auto& s : steps) {
        steps_json.push_back(json{{"t", s.t},
                                  {"y_norm", s.y_norm},
                                  {"residual", s.residual},
                                  {"identity_gap", s.identity_gap},
                                  {"iterations", s.iterations}});
    }
    j["steps"] = steps_json;
    return j;
}

ProbeResult residual_infimum_probe(const Mapping& m, const Point& x1, double lambda, double eta,
                                   const std::vector<double>& t_schedule) {
    if (t_schedule.empty()) throw ParamError("residual_infimum_probe: empty t schedule");
    for (size_t i = 0; i < t_schedule.size(); ++i) {
        double t = t_schedule[i];
        if (!(t > 0.0 && t < 1.0)) {
            throw ParamError("residual_infimum_probe: t values must lie in (0, 1)");
        }
        if (i > 0 && !(t < t_schedule[i - 1])) {
            throw ParamError("residual_infimum_probe: t schedule must decrease");
        }
    }
    if (!(lambda > 0.0)) throw ParamError("residual_infimum_probe: lambda must be positive");
    if (!(eta > 0.0)) throw ParamError("residual_infimum_probe: eta must be positive");
    const Space& sp = m.domain();
    if (!sp.contains(x1)) throw DomainError("residual_infimum_probe: x1 is outside the domain");

    ProbeResult out;
    out.d_estimate = std::numeric_limits<double>::infinity();
    out.best_point = x1;
    for (double t : t_schedule) {
        auto rr = resolvent(m, x1, t, 1e-10, 500000);
        const Point& y = rr.point;
        double residual = sp.distance(m.apply(y), y);
        double identity_gap = std::abs(residual - t * sp.distance(m.apply(y), x1));
        out.steps.push_back(
            ProbeStep{t, sp.norm(y), residual, identity_gap, rr.trace.iterations()});
        if (residual < out.d_estimate) {
            out.d_estimate = residual;
            out.best_point = y;
        }
    }
    return out;
}

namespace {

CurvePoint band_statistic(const Mapping& m, const Point& base, const Point& tbase, bool ratio,
                          double radius, double band_factor, int samples, std::uint64_t seed) {
    const Space& sp = m.domain();
    auto points = sp.sample_annulus(radius, radius * band_factor, samples, seed);
    double best = -std::numeric_limits<double>::infinity();
    double arg_norm = 0.0;
    int used = 0;
    for (const Point& y : points) {
        double d1 = sp.distance(base, y);
        if (ratio && !(d1 > 0.0)) continue;
        double d2 = sp.distance(tbase, m.apply(y));
        double stat = ratio ? d2 / d1 : d2 - d1;
        ++used;
        if (stat > best) {
            best = stat;
            arg_norm = sp.norm(y);
        }
    }
    if (used == 0) throw SamplerError("curve: no usable samples in one band");
    return CurvePoint{radius, best, used, arg_norm};
}

std::vector<CurvePoint> run_curve(const Mapping& m, const Point& base,
                                  const std::vector<double>& radii, double band_factor,
                                  int samples, std::uint64_t seed, bool ratio) {
    if (radii.empty()) throw ParamError("curve: radii must be non-empty");
    if (!(band_factor > 1.0)) throw ParamError("curve: band_factor must exceed 1");
    if (samples < 1) throw ParamError("curve: samples must be >= 1");
    const Space& sp = m.domain();
    if (!sp.contains(base)) throw DomainError("curve: base is outside the domain");
    double base_norm = sp.norm(base);
    for (size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw ParamError("curve: radii must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1])) {
            throw ParamError("curve: radii must be strictly increasing");
        }
        if (ratio && !(radii[i] >= base_norm)) {
            throw ParamError("curve: ratio statistics need radii at or above the base's norm");
        }
    }
    Point tbase = m.apply(base);
    std::vector<CurvePoint> out;
    out.reserve(radii.size());
    for (double radius : radii) {
        out.push_back(band_statistic(m, base, tbase, ratio, radius, band_factor, samples,
                                     mix_seed(seed, {ratio ? 0x2A7EULL : 0x6A9CULL,
                                                     double_bits(radius)})));
    }
    return out;
}

}  // namespace

std::vector<CurvePoint> ratio_curve(const Mapping& m, const Point& x1,
                                    const std::vector<double>& radii, double band_factor,
                                    int samples, std::uint64_t seed) {
    return run_curve(m, x1, radii, band_factor, samples, seed, true);
}

std::vector<CurvePoint> gap_curve(const Mapping& m, const Point& x0,
                                  const std::vector<double>& radii, double band_factor,
                                  int samples, std::uint64_t seed) {
    return run_curve(m, x0, radii, band_factor, samples, seed, false);
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "radius,statistic,samples\n";
    for (const auto& p : curve) {
        out += format_double(p.radius);
        out += ",";
        out += format_double(p.statistic);
        out += ",";
        out += std::to_string(p.samples);
        out += "\n";
    }
    return out;
}

std::vector<Point> universal_bases(const Mapping& m, int count, std::uint64_t seed) {
    if (count < 0) throw ParamError("universal_bases: count must be >= 0");
    const Space& sp = m.domain();
    std::vector<Point> bases;
    for (const Point& s : m.special_points()) {
        if (sp.contains(s)) bases.push_back(s);
    }
    double lo = 0.5;
    double hi = 12.0;
    if (sp.kind() == SpaceKind::RealInterval) {
        lo = std::max(lo, sp.lower());
        hi = std::max(hi, 4.0 * lo);
        if (sp.upper()) hi = std::min(hi, *sp.upper());
    } else {
        hi = 8.0;
    }
    if (lo < hi) {
        auto drawn = sp.sample_annulus(lo, hi, count, mix_seed(seed, {0xBA5E5ULL}));
        bases.insert(bases.end(), drawn.begin(), drawn.end());
    }
    return bases;
}

}  // namespace fixpoint
