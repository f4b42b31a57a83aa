#include <cmath>
#include <map>

#include "fixpoint/mappings.hpp"

namespace fixpoint {

namespace {

bool ratio_form(ConditionId id) { return id == ConditionId::C1 || id == ConditionId::C2; }

// Tx = x - log x on [1, inf). Strictly contractive between any two points
// (ratio 1 - 1/xi < 1 by the mean value theorem) yet the ratio tends to 1
// at infinity, so no single r < 1 survives; every fixed additive drop does.
Mapping make_log_retreat() {
    Space dom = Space::real_interval(1.0);
    auto apply = [](const Point& p) {
        double x = p.scalar_value();
        return Point::scalar(x - std::log(x));
    };
    auto witness = [](const WitnessRequest& req) -> std::optional<Point> {
        if (!ratio_form(req.id)) return std::nullopt;
        if (!(req.param < 1.0)) return std::nullopt;
        // Against base 1: d(T1, Ty)/d(1, y) = 1 - log(y)/(y - 1) -> 1, so
        // doubling y soon beats any requested ratio.
        double y = std::max(2.0, 2.0 * std::max(req.eta, 1.0));
        while (y < 1e280) {
            if (1.0 - std::log(y) / (y - 1.0) > req.param && y > req.eta) {
                return Point::scalar(y);
            }
            y *= 2.0;
        }
        return std::nullopt;
    };
    return Mapping("log_retreat", dom, apply,
                   "Tx = x - log x on [1, inf); contraction ratio creeps up to 1 at "
                   "infinity, so ratio bounds fail while every additive drop holds far out",
                   witness, {Point::scalar(1.0), Point::scalar(7.0)});
}

// (Tx)(n) = max(0, x(n) - 2) on the box {x in c0 : 0 <= x(n) <= n}.
// Coordinates shrink towards 0, and the spikes y = n e_n show that drops
// larger than 2 fail at arbitrarily high norms: ||Ty|| = n - 2 while the
// allowed image norm would be n - lambda.
Mapping make_shift_down_2() {
    Space dom = Space::c0_box();
    auto apply = [](const Point& p) {
        Point::Entries out;
        for (const auto& [n, v] : p.entries()) {
            double w = v - 2.0;
            if (w > 0.0) out[n] = w;
        }
        return Point::seq(std::move(out));
    };
    auto witness = [](const WitnessRequest& req) -> std::optional<Point> {
        if (req.id == ConditionId::C6) return std::nullopt;
        // Smallest admissible spike height strictly above the threshold.
        double nd = std::max(std::floor(req.eta) + 1.0, 2.0);
        if (ratio_form(req.id)) {
            if (!(req.param > 0.0 && req.param < 1.0)) return std::nullopt;
            // Need (n - 2)/n > r, i.e. n > 2/(1 - r).
            nd = std::max(nd, std::ceil(2.0 / (1.0 - req.param)) + 1.0);
        }
        if (nd > 1e8) return std::nullopt;
        int n = static_cast<int>(nd);
        return Point::seq({{n, static_cast<double>(n)}});
    };
    return Mapping("shift_down_2", dom, apply,
                   "(Tx)(n) = max(0, x(n) - 2) on the box {0 <= x(n) <= n} in c0; "
                   "drops up to 2 hold everywhere, anything beyond 2 is beaten by "
                   "tall single-coordinate spikes",
                   witness, {Point::zero_seq(), Point::seq({{1, 1.0}, {3, 2.0}})});
}

// Tx = x on [1, inf): every point is fixed. The self-drop condition holds
// with drop 0 at any base, while every fixed positive drop fails everywhere.
Mapping make_identity_ray() {
    Space dom = Space::real_interval(1.0);
    auto apply = [](const Point& p) { return p; };
    auto witness = [](const WitnessRequest& req) -> std::optional<Point> {
        if (req.id == ConditionId::C6) return std::nullopt;
        if (ratio_form(req.id) && !(req.param < 1.0)) return std::nullopt;
        return Point::scalar(std::max(req.eta, 1.0) + 2.0);
    };
    return Mapping("identity_ray", dom, apply,
                   "Tx = x on [1, inf); distances never shrink, so every ratio or "
                   "fixed-drop bound fails, yet each point certifies the self-drop "
                   "condition with drop 0",
                   witness, {Point::scalar(1.0), Point::scalar(3.0), Point::scalar(7.0)});
}

// Tx = x/2 + 1 on [0, inf): a global 1/2-contraction with fixed point 2.
// Satisfies the one-base ratio condition outright, which makes it the
// reference input for the derivation chain between condition forms.
Mapping make_affine_half() {
    Space dom = Space::real_interval(0.0);
    auto apply = [](const Point& p) { return Point::scalar(p.scalar_value() / 2.0 + 1.0); };
    return Mapping("affine_half", dom, apply,
                   "Tx = x/2 + 1 on [0, inf); a global 1/2-contraction, so every "
                   "condition holds and derived thresholds can be checked exactly",
                   nullptr, {Point::scalar(0.0), Point::scalar(2.0), Point::scalar(4.0)});
}

const std::map<std::string, Mapping, std::less<>>& registry() {
    static const std::map<std::string, Mapping, std::less<>> cat = [] {
        std::map<std::string, Mapping, std::less<>> c;
        c.emplace("log_retreat", make_log_retreat());
        c.emplace("shift_down_2", make_shift_down_2());
        c.emplace("identity_ray", make_identity_ray());
        c.emplace("affine_half", make_affine_half());
        return c;
    }();
    return cat;
}

}  // namespace

const Mapping& catalog(std::string_view name) {
    const auto& cat = registry();
    auto it = cat.find(name);
    if (it == cat.end()) {
        throw ParamError("unknown mapping '" + std::string(name) + "'");
    }
    return it->second;
}

std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (const auto& [name, m] : registry()) names.push_back(name);
    return names;
}

}  // namespace fixpoint
