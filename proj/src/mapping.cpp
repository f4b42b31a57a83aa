#include "fixpoint/mappings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "fixpoint/rng.hpp"

namespace fixpoint {

std::string to_string(ConditionId id) {
    switch (id) {
        case ConditionId::C1: return "C1";
        case ConditionId::C2: return "C2";
        case ConditionId::C3: return "C3";
        case ConditionId::C4: return "C4";
        case ConditionId::C5: return "C5";
        case ConditionId::C6: return "C6";
    }
    throw ParamError("to_string: bad ConditionId");
}

ConditionId condition_id_from_string(const std::string& text) {
    if (text.size() == 2 && (text[0] == 'C' || text[0] == 'c') && text[1] >= '1' &&
        text[1] <= '6') {
        return static_cast<ConditionId>(text[1] - '1');
    }
    throw ParamError("unknown condition id '" + text + "' (expected C1..C6)");
}

Mapping::Mapping(std::string name, Space domain, ApplyFn apply, std::string note,
                 WitnessFn witness, std::vector<Point> special_points)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      apply_(std::move(apply)),
      note_(std::move(note)),
      witness_(std::move(witness)),
      special_points_(std::move(special_points)) {
    if (!apply_) throw ParamError("Mapping: apply function is required");
}

Point Mapping::apply(const Point& p) const {
    if (!domain_.matches(p)) {
        throw StructureError("apply: point structure does not fit the domain of " + name_);
    }
    if (!domain_.contains(p)) {
        throw DomainError("apply: " + p.to_compact_string() + " is outside the domain of " +
                          name_);
    }
    Point image = apply_(p);
    if (!domain_.contains(image)) {
        throw DomainError("apply: " + name_ + " left its domain at " + p.to_compact_string());
    }
    return image;
}

std::optional<Point> Mapping::witness(ConditionId id, double eta, double param) const {
    if (!witness_) return std::nullopt;
    return witness_(WitnessRequest{id, eta, param});
}

VerificationReport check_nonexpansive(const Mapping& m, int pairs, std::uint64_t seed,
                                      double radius_max) {
    if (pairs < 1) throw ParamError("check_nonexpansive: pairs must be >= 1");
    if (!(radius_max > 0.0)) throw ParamError("check_nonexpansive: radius_max must be > 0");
    const Space& sp = m.domain();

    // Pool of sample points across all scales; pairs are consecutive pool
    // entries, then every hand-picked point gets paired against the pool.
    double lo = radius_max * 1e-9;
    if (sp.kind() == SpaceKind::RealInterval) lo = std::max(lo, sp.lower());
    std::vector<Point> pool =
        sp.sample_annulus(lo, radius_max, 2 * pairs, mix_seed(seed, {0x70A1ULL}));
    std::vector<std::pair<Point, Point>> checked;
    checked.reserve(pool.size());
    for (int i = 0; i < pairs; ++i) checked.emplace_back(pool[2 * i], pool[2 * i + 1]);
    size_t j = 0;
    for (const Point& s : m.special_points()) {
        if (!sp.contains(s)) continue;
        checked.emplace_back(s, pool[j % pool.size()]);
        ++j;
    }

    VerificationReport rep;
    rep.spec = json{{"check", "nonexpansive"}, {"pairs", pairs}, {"radius_max", radius_max}};
    rep.mapping = m.name();
    rep.seed = seed;
    rep.band_lo = lo;
    rep.band_hi = radius_max;
    rep.note = "sampled, not proved";
    rep.exact = true;

    double worst = std::numeric_limits<double>::infinity();
    long evaluated = 0;
    for (const auto& [x, y] : checked) {
        double dxy = sp.distance(x, y);
        double dtxy = sp.distance(m.apply(x), m.apply(y));
        double margin = dxy - dtxy;
        ++evaluated;
        bool exact = x.is_integral() && y.is_integral();
        rep.exact = rep.exact && exact;
        worst = std::min(worst, margin);
        double slack = exact ? 0.0 : float_slack(std::max(dxy, dtxy));
        if (!rep.counterexample && margin < -slack) {
            rep.counterexample = Counterexample{y, x, dtxy, dxy};
        }
    }
    rep.samples = evaluated;
    rep.worst_margin = worst;
    rep.verdict = rep.counterexample ? Verdict::Refuted : Verdict::HoldsOnSamples;
    return rep;
}

}  // namespace fixpoint
