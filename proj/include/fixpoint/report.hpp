#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "fixpoint/spaces.hpp"

namespace fixpoint {

/// Sampling can refute a universally quantified inequality but never prove
/// it, so the positive verdict is deliberately labelled "holds-on-samples".
enum class Verdict { HoldsOnSamples, Refuted };

std::string to_string(Verdict v);

/// A concrete violation: point(s) where the checked inequality fails.
/// `lhs` and `rhs` are the two sides as evaluated, so lhs > rhs.
struct Counterexample {
    Point y;
    std::optional<Point> x;  // second point of a pair check, when applicable
    double lhs = 0.0;
    double rhs = 0.0;

    json to_json() const;
};

/// Outcome of a sampled check. `worst_margin` is the minimum over all
/// evaluated points of (rhs - lhs); negative beyond float slack refutes.
/// `exact` records that every evaluation stayed on integer-valued points,
/// in which case margins carry no rounding error at all.
struct VerificationReport {
    json spec;  // echo of what was checked, for self-contained output
    std::string mapping;
    Verdict verdict = Verdict::HoldsOnSamples;
    double worst_margin = 0.0;
    std::optional<Counterexample> counterexample;
    long samples = 0;
    std::uint64_t seed = 0;
    double band_lo = 0.0;
    double band_hi = 0.0;
    bool exact = false;
    std::string note;

    bool refuted() const { return verdict == Verdict::Refuted; }
    json to_json() const;
};

/// Comparison slack for float-valued margins: absolute floor plus a term
/// relative to the magnitudes involved. Exact (integer) paths use 0 instead.
inline double float_slack(double magnitude = 1.0) {
    return 1e-12 + 1e-12 * std::max(1.0, std::abs(magnitude));
}

}  // namespace fixpoint
