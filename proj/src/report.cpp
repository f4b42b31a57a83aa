#include "fixpoint/report.hpp"

namespace fixpoint {

std::string to_string(Verdict v) {
    return v == Verdict::Refuted ? "refuted" : "holds-on-samples";
}

json Counterexample::to_json() const {
    json j;
    j["y"] = y.to_json();
    if (x) j["x"] = x->to_json();
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    return j;
}

json VerificationReport::to_json() const {
    json j;
    j["spec"] = spec;
    j["mapping"] = mapping;
    j["verdict"] = to_string(verdict);
    j["worst_margin"] = worst_margin;
    j["counterexample"] = counterexample ? counterexample->to_json() : json(nullptr);
    j["samples"] = samples;
    j["seed"] = seed;
    j["band"] = json{{"lo", band_lo}, {"hi", band_hi}};
    j["exact"] = exact;
    j["note"] = note;
    return j;
}

}  // namespace fixpoint
