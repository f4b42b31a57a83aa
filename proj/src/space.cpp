#include "fixpoint/spaces.hpp"

#include <algorithm>
#include <cmath>

#include "fixpoint/numfmt.hpp"
#include "fixpoint/rng.hpp"

namespace fixpoint {

Space Space::real_interval(double lower, std::optional<double> upper) {
    if (!std::isfinite(lower)) throw ParamError("real_interval: lower bound must be finite");
    if (upper && !(*upper >= lower)) {
        throw ParamError("real_interval: upper bound must be >= lower bound");
    }
    return Space(SpaceKind::RealInterval, lower, upper);
}

Space Space::c0_box() { return Space(SpaceKind::C0Box, 0.0, std::nullopt); }

double Space::lower() const {
    if (kind_ != SpaceKind::RealInterval) throw StructureError("lower: not an interval space");
    return lower_;
}

std::optional<double> Space::upper() const {
    if (kind_ != SpaceKind::RealInterval) throw StructureError("upper: not an interval space");
    return upper_;
}

bool Space::matches(const Point& p) const {
    return kind_ == SpaceKind::RealInterval ? p.is_scalar() : p.is_seq();
}

double Space::norm(const Point& p) const {
    if (!matches(p)) throw StructureError("norm: point structure does not fit " + describe());
    return point_norm(p);
}

double Space::distance(const Point& x, const Point& y) const {
    if (!matches(x) || !matches(y)) {
        throw StructureError("distance: point structure does not fit " + describe());
    }
    if (kind_ == SpaceKind::RealInterval) return std::abs(x.scalar_value() - y.scalar_value());
    // sup over the union of supports; both maps are sorted by index
    const auto& a = x.entries();
    const auto& b = y.entries();
    double best = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        double diff;
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            diff = ia->second;
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            diff = ib->second;
            ++ib;
        } else {
            diff = ia->second - ib->second;
            ++ia;
            ++ib;
        }
        best = std::max(best, std::abs(diff));
    }
    return best;
}

bool Space::contains(const Point& p) const {
    if (!matches(p)) return false;
    if (kind_ == SpaceKind::RealInterval) {
        double v = p.scalar_value();
        if (v < lower_) return false;
        if (upper_ && v > *upper_) return false;
        return true;
    }
    for (const auto& [n, v] : p.entries()) {
        if (v < 0.0 || v > static_cast<double>(n)) return false;
    }
    return true;
}

std::vector<Point> Space::sample_annulus(double eta, double radius_max, int count,
                                         std::uint64_t seed) const {
    if (count < 0) throw ParamError("sample_annulus: count must be >= 0");
    if (!(eta < radius_max)) throw ParamError("sample_annulus: eta must be below radius_max");
    if (!std::isfinite(eta) || !std::isfinite(radius_max)) {
        throw ParamError("sample_annulus: band edges must be finite");
    }

    // Norms are drawn log-uniformly from (lo, hi], the part of (eta,
    // radius_max] this space can actually reach.
    double lo = eta;
    double hi = radius_max;
    if (kind_ == SpaceKind::RealInterval) {
        lo = std::max(lo, lower_);
        if (upper_) hi = std::min(hi, *upper_);
    }
    if (!(lo < hi)) {
        throw SamplerError("sample_annulus: band (" + format_double(eta) + ", " +
                           format_double(radius_max) + "] is out of reach in " + describe());
    }
    if (!(lo > 0.0)) {
        throw SamplerError("sample_annulus: band must have a positive lower edge");
    }
    if (kind_ == SpaceKind::C0Box && hi > 1.0e9) {
        throw SamplerError("sample_annulus: box indices would overflow, keep radius_max <= 1e9");
    }

    SampleRng rng(mix_seed(seed, {static_cast<std::uint64_t>(kind_), double_bits(eta),
                                  double_bits(radius_max), static_cast<std::uint64_t>(count)}));
    std::vector<Point> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        double r = rng.log_uniform(lo, hi);
        if (kind_ == SpaceKind::RealInterval) {
            out.push_back(Point::scalar(r));
            continue;
        }
        // The norm must be attained exactly: coordinate n_main carries r
        // (always legal since n_main >= ceil(r)), every other coordinate
        // stays strictly below both r and its own box cap.
        int base_idx = std::max(1, static_cast<int>(std::ceil(r)));
        int n_main = base_idx + rng.uniform_int(0, 7);
        int extra = rng.uniform_int(0, 7);
        int idx_span = std::max(2 * n_main, 16);
        Point::Entries entries;
        entries[n_main] = r;
        for (int j = 0; j < extra; ++j) {
            int idx = rng.uniform_int(1, idx_span);
            if (idx == n_main || entries.count(idx)) continue;
            double cap = std::min(static_cast<double>(idx), r);
            double v = rng.uniform(0.0, cap);
            if (v > 0.0) entries[idx] = v;
        }
        out.push_back(Point::seq(std::move(entries)));
    }
    return out;
}

std::string Space::describe() const {
    if (kind_ == SpaceKind::C0Box) return "c0_box";
    std::string s = "[" + format_double(lower_) + ", ";
    s += upper_ ? format_double(*upper_) + "]" : "inf)";
    return s;
}

json Space::to_json() const {
    json j;
    if (kind_ == SpaceKind::RealInterval) {
        j["kind"] = "real_interval";
        j["lower"] = lower_;
        if (upper_) {
            j["upper"] = *upper_;
        } else {
            j["upper"] = nullptr;
        }
    } else {
        j["kind"] = "c0_box";
    }
    return j;
}

Space Space::from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "c0_box") return c0_box();
    if (kind == "real_interval") {
        std::optional<double> upper;
        if (j.contains("upper") && !j.at("upper").is_null()) upper = j.at("upper").get<double>();
        return real_interval(j.at("lower").get<double>(), upper);
    }
    throw ParamError("Space::from_json: unknown kind '" + kind + "'");
}

bool Space::operator==(const Space& other) const {
    return kind_ == other.kind_ && lower_ == other.lower_ && upper_ == other.upper_;
}

}  // namespace fixpoint
