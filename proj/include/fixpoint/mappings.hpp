#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fixpoint/report.hpp"
#include "fixpoint/spaces.hpp"

namespace fixpoint {

/// The six localized contraction conditions checked by this library, in
/// strength order. C1/C2 bound the distance ratio by r < 1 outside a ball;
/// C3/C4/C5 require a fixed additive drop lambda; C6 requires a drop of
/// size ||T x0 - x0|| for one distinguished base point.
enum class ConditionId { C1, C2, C3, C4, C5, C6 };

std::string to_string(ConditionId id);
ConditionId condition_id_from_string(const std::string& text);

/// Request handed to a mapping's witness generator: produce a point of norm
/// above `eta` that violates condition `id` with the given parameter
/// (r for ratio conditions, lambda for drop conditions).
struct WitnessRequest {
    ConditionId id;
    double eta;
    double param;
};

/// A nonexpansive self-mapping of a space, with optional adversarial
/// knowledge: a witness generator that produces canonical violation points
/// for conditions the mapping is known to break.
class Mapping {
public:
    using ApplyFn = std::function<Point(const Point&)>;
    using WitnessFn = std::function<std::optional<Point>(const WitnessRequest&)>;

    Mapping(std::string name, Space domain, ApplyFn apply, std::string note = {},
            WitnessFn witness = {}, std::vector<Point> special_points = {});

    const std::string& name() const { return name_; }
    const Space& domain() const { return domain_; }
    const std::string& note() const { return note_; }
    /// Hand-picked domain points worth including in any sampled check.
    const std::vector<Point>& special_points() const { return special_points_; }

    /// Applies the mapping. Throws DomainError when p is outside the domain
    /// and StructureError on structural mismatch.
    Point apply(const Point& p) const;

    bool has_witness() const { return static_cast<bool>(witness_); }
    /// Canonical violation point for (id, eta, param), when one is known.
    std::optional<Point> witness(ConditionId id, double eta, double param) const;

private:
    std::string name_;
    Space domain_;
    ApplyFn apply_;
    std::string note_;
    WitnessFn witness_;
    std::vector<Point> special_points_;
};

/// Built-in mappings, by name. Throws ParamError for unknown names.
const Mapping& catalog(std::string_view name);
std::vector<std::string> catalog_names();

/// Samples `pairs` point pairs with norms in (0-ish, radius_max] plus the
/// mapping's special points, and checks d(Tx, Ty) <= d(x, y) on each.
/// The worst margin min(d(x,y) - d(Tx,Ty)) and the first violating pair are
/// reported; a margin below -slack refutes.
VerificationReport check_nonexpansive(const Mapping& m, int pairs, std::uint64_t seed,
                                      double radius_max);

}  // namespace fixpoint
