#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixpoint/errors.hpp"

namespace fixpoint {

using json = nlohmann::ordered_json;

/// A point in one of the supported spaces: either a real scalar or a
/// finitely supported sequence (index >= 1 -> value). Sequences are kept
/// canonical: entries with value exactly 0 are never stored, so exact
/// equality of representations coincides with equality of points.
class Point {
public:
    using Entries = std::map<int, double>;

    Point() : scalar_(true), value_(0.0) {}

    static Point scalar(double v);
    /// Builds a sequence point; drops zero entries, rejects indices < 1 and
    /// non-finite values.
    static Point seq(Entries entries);
    static Point zero_seq() { return seq({}); }

    bool is_scalar() const { return scalar_; }
    bool is_seq() const { return !scalar_; }

    double scalar_value() const;
    const Entries& entries() const;
    /// Coordinate n of a sequence point (0 when absent).
    double coord(int n) const;

    /// True when every stored value is an integer; such points move through
    /// the catalog mappings without rounding, so comparisons can be exact.
    bool is_integral() const;

    bool operator==(const Point& other) const;
    bool operator!=(const Point& other) const { return !(*this == other); }

    json to_json() const;
    static Point from_json(const json& j);

    /// Compact text form, "3.5" or "{1:1,4:4}". Used in logs and CLI output.
    std::string to_compact_string() const;
    /// Parses either a decimal scalar or the compact sequence form above.
    static Point parse(const std::string& text);

private:
    bool scalar_;
    double value_;
    Entries entries_;
};

/// a*x + b*y, defined per coordinate. Both points must share a structure.
Point lin_comb(double a, const Point& x, double b, const Point& y);

/// Sup-style norm of a point independent of a space: |v| for scalars, the
/// largest |entry| for sequences (0 for the empty sequence).
double point_norm(const Point& p);

enum class SpaceKind {
    RealInterval,  // closed ray or segment of the real line
    C0Box,         // sequences vanishing at infinity with 0 <= x(n) <= n
};

/// A closed convex subset of a normed space, with a deterministic sampler.
/// Two kinds are supported: real intervals [lower, upper] (upper optional)
/// under |.|, and the box {x in c0 : 0 <= x(n) <= n} under the sup norm.
class Space {
public:
    static Space real_interval(double lower, std::optional<double> upper = std::nullopt);
    static Space c0_box();

    SpaceKind kind() const { return kind_; }
    double lower() const;
    std::optional<double> upper() const;

    /// True when the point's structure (scalar vs sequence) fits this space.
    bool matches(const Point& p) const;

    /// Norm of a point of this space. Throws StructureError on mismatch.
    double norm(const Point& p) const;
    double distance(const Point& x, const Point& y) const;

    /// Membership; a structurally mismatched point is simply not a member.
    bool contains(const Point& p) const;

    /// Draws `count` points of this space with norms in (eta, radius_max],
    /// log-uniform in the norm so all scales of the band are exercised.
    /// Deterministic: the same arguments always produce the same list.
    std::vector<Point> sample_annulus(double eta, double radius_max, int count,
                                      std::uint64_t seed) const;

    std::string describe() const;
    json to_json() const;
    static Space from_json(const json& j);

    bool operator==(const Space& other) const;

private:
    Space(SpaceKind kind, double lower, std::optional<double> upper)
        : kind_(kind), lower_(lower), upper_(upper) {}

    SpaceKind kind_;
    double lower_;
    std::optional<double> upper_;
};

}  // namespace fixpoint
