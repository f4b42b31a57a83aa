#include "cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "fixpoint/conditions.hpp"
#include "fixpoint/mappings.hpp"
#include "fixpoint/numfmt.hpp"
#include "fixpoint/solver.hpp"
#include "fixpoint/spaces.hpp"

namespace fixpoint::cli {

namespace {

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw Error("short write to '" + path + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::uint64_t default_seed() {
    const char* env = std::getenv("FIXPOINT_SEED");
    if (!env || !*env) return 42;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return static_cast<std::uint64_t>(v);
    return 42;
}

int run_check(const CheckConfig& cfg, std::ostream& payload, std::ostream& diag) {
    try {
        const Mapping& m = catalog(cfg.mapping);
        ConditionId id = condition_id_from_string(cfg.condition);
        Point base = Point::parse(cfg.base);
        ConditionSpec spec;
        switch (form_of(id)) {
            case MarginForm::Ratio:
                if (!cfg.r) throw ParamError(cfg.condition + " needs --r");
                if (cfg.lambda) throw ParamError(cfg.condition + " takes --r, not --lambda");
                spec = ConditionSpec::ratio(id, *cfg.r, base, cfg.eta);
                break;
            case MarginForm::Drop:
                if (!cfg.lambda) throw ParamError(cfg.condition + " needs --lambda");
                if (cfg.r) throw ParamError(cfg.condition + " takes --lambda, not --r");
                spec = ConditionSpec::drop(id, *cfg.lambda, base, cfg.eta);
                break;
            case MarginForm::SelfDrop:
                if (cfg.r || cfg.lambda) {
                    throw ParamError(cfg.condition + " takes neither --r nor --lambda");
                }
                spec = ConditionSpec::self_drop(base, cfg.eta);
                break;
        }
        double radius_max = cfg.radius_max.value_or(100.0 * std::max(cfg.eta, 1.0));
        VerificationReport rep =
            verify_condition(m, spec, Annulus{cfg.eta, radius_max}, cfg.samples, cfg.seed);
        write_text(cfg.out, dump(rep.to_json()), payload);
        diag << cfg.mapping << " " << cfg.condition << ": " << to_string(rep.verdict)
             << " (worst margin " << format_double(rep.worst_margin) << " over " << rep.samples
             << " points)\n";
        return rep.refuted() ? kExitRefuted : kExitOk;
    } catch (const Error& e) {
        diag << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int run_scan(const ScanConfig& cfg, std::ostream& payload, std::ostream& diag) {
    try {
        const Mapping& m = catalog(cfg.mapping);
        Point base = Point::parse(cfg.base);
        std::vector<double> radii = cfg.radii;
        if (radii.empty()) {
            if (!(cfg.rmin > 0.0) || !(cfg.rmax > cfg.rmin)) {
                throw ParamError("scan needs --radii or 0 < --rmin < --rmax");
            }
            if (cfg.per_decade < 1) throw ParamError("--per-decade must be >= 1");
            for (int i = 0;; ++i) {
                double radius =
                    cfg.rmin * std::pow(10.0, static_cast<double>(i) / cfg.per_decade);
                if (radius > cfg.rmax * (1.0 + 1e-12)) break;
                radii.push_back(radius);
            }
        }
        std::vector<CurvePoint> curve;
        if (cfg.kind == "ratio") {
            curve = ratio_curve(m, base, radii, cfg.band_factor, cfg.samples, cfg.seed);
        } else if (cfg.kind == "gap") {
            curve = gap_curve(m, base, radii, cfg.band_factor, cfg.samples, cfg.seed);
        } else {
            throw ParamError("unknown scan kind '" + cfg.kind + "' (ratio or gap)");
        }
        write_text(cfg.out, curve_to_csv(curve), payload);
        diag << cfg.mapping << " " << cfg.kind << " scan over " << curve.size()
             << " rings, statistic " << format_double(curve.front().statistic) << " -> "
             << format_double(curve.back().statistic) << "\n";
        return kExitOk;
    } catch (const Error& e) {
        diag << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int run_solve(const SolveConfig& cfg, std::ostream& payload, std::ostream& diag) {
    try {
        const Mapping& m = catalog(cfg.mapping);
        Point start = Point::parse(cfg.start);
        Method method;
        if (cfg.method == "picard") {
            method = PicardMethod{};
        } else if (cfg.method == "averaged") {
            method = AveragedMethod{cfg.alpha};
        } else if (cfg.method == "resolvent") {
            method = ResolventScheduleMethod{default_resolvent_schedule()};
        } else {
            throw ParamError("unknown method '" + cfg.method +
                             "' (picard, averaged or resolvent)");
        }

        json doc;
        doc["mapping"] = cfg.mapping;

        std::optional<Ball> ball;
        bool orbit_stayed = true;
        if (!cfg.ball_x0.empty() || cfg.ball_eta) {
            if (cfg.ball_x0.empty() || !cfg.ball_eta) {
                throw ParamError("the ball check needs both --ball-x0 and --ball-eta");
            }
            ball = invariant_ball(m, Point::parse(cfg.ball_x0), *cfg.ball_eta);
        }
        IterateObserver observer;
        if (ball) {
            observer = [&](const Point& x) { orbit_stayed = orbit_stayed && ball->contains(x); };
            if (!ball->contains(start)) orbit_stayed = false;
        }

        FixedPointResult result =
            find_fixed_point(m, start, method, cfg.tol, cfg.max_iter, observer);
        doc["result"] = result.to_json();
        if (ball) {
            VerificationReport inv = verify_invariance(m, *ball, cfg.samples, cfg.seed);
            json bj = ball->to_json();
            bj["invariance"] = inv.to_json();
            bj["orbit_stayed_inside"] = orbit_stayed;
            doc["ball"] = bj;
        } else {
            doc["ball"] = nullptr;
        }
        write_text(cfg.out, dump(doc), payload);
        if (!cfg.trace.empty()) write_text(cfg.trace, result.trace.to_csv(), diag);
        diag << cfg.mapping << " " << result.trace.method << ": "
             << (result.converged ? "converged" : "no convergence") << " at residual "
             << format_double(result.residual) << " after " << result.trace.iterations()
             << " iterations\n";
        return result.converged ? kExitOk : kExitNoConvergence;
    } catch (const Error& e) {
        diag << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

namespace {

struct Claim {
    std::string condition;
    std::string expected;
    std::string observed;
    bool match;
    std::vector<std::string> evidence;
};

struct CaseOutput {
    std::string name;
    std::vector<Claim> claims;
};

class BundleWriter {
public:
    explicit BundleWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    std::string save(const std::string& name, const std::string& text) {
        std::ofstream f(dir_ / name, std::ios::binary);
        if (!f) throw Error("cannot write " + (dir_ / name).string());
        f << text;
        return name;
    }

private:
    std::filesystem::path dir_;
};

Claim aggregate(const std::string& condition, const std::string& expected,
                const std::vector<VerificationReport>& reps, std::vector<std::string> evidence) {
    bool any_refuted = false;
    bool all_refuted = true;
    for (const auto& r : reps) {
        any_refuted = any_refuted || r.refuted();
        all_refuted = all_refuted && r.refuted();
    }
    std::string observed;
    if (expected == "refuted") {
        observed = all_refuted ? "refuted" : (any_refuted ? "mixed" : "holds-on-samples");
    } else {
        observed = !any_refuted ? "holds-on-samples" : (all_refuted ? "refuted" : "mixed");
    }
    return Claim{condition, expected, observed, observed == expected, std::move(evidence)};
}

// Case study: ratio bounds die out on log_retreat while every fixed
// additive drop eventually holds; the gap curve diverges to -infinity.
CaseOutput repro_log_retreat(BundleWriter& w, int samples, std::uint64_t seed) {
    const Mapping& m = catalog("log_retreat");
    CaseOutput out{m.name(), {}};

    auto rc = ratio_curve(m, Point::scalar(1.0), {10.0, 100.0, 1e3, 1e4, 1e5}, 10.0, samples,
                          seed);
    std::string rc_name = w.save("log_retreat_ratio_curve.csv", curve_to_csv(rc));

    std::vector<VerificationReport> c1_reps;
    std::vector<std::string> c1_files{rc_name};
    for (double r : {0.9, 0.99, 0.999}) {
        auto rep = verify_condition(m, ConditionSpec::ratio(ConditionId::C1, r,
                                                            Point::scalar(1.0), 1000.0),
                                    Annulus{1000.0, 1e6}, samples, seed);
        c1_files.push_back(
            w.save("log_retreat_c1_r" + format_double(r) + ".json", dump(rep.to_json())));
        c1_reps.push_back(std::move(rep));
    }
    out.claims.push_back(aggregate("C1", "refuted", c1_reps, std::move(c1_files)));

    std::vector<double> gap_radii;
    for (int k = 2; k <= 10; ++k) gap_radii.push_back(std::exp(static_cast<double>(k)));
    auto gc = gap_curve(m, Point::scalar(1.0), gap_radii, std::exp(1.0), samples, seed);
    std::string gc_name = w.save("log_retreat_gap_curve.csv", curve_to_csv(gc));

    std::vector<VerificationReport> c3_reps;
    std::vector<std::string> c3_files{gc_name};
    auto bases = universal_bases(m, 4, seed);
    for (double lambda : {0.5, 2.0, 5.0}) {
        for (size_t i = 0; i < bases.size(); ++i) {
            double eta = m.domain().norm(bases[i]) * std::exp(lambda + 1.0);
            auto rep = verify_condition(
                m, ConditionSpec::drop(ConditionId::C3, lambda, bases[i], eta),
                Annulus{eta, 100.0 * eta}, samples, seed);
            c3_files.push_back(w.save("log_retreat_c3_l" + format_double(lambda) + "_b" +
                                          std::to_string(i) + ".json",
                                      dump(rep.to_json())));
            c3_reps.push_back(std::move(rep));
        }
    }
    out.claims.push_back(aggregate("C3", "holds-on-samples", c3_reps, std::move(c3_files)));
    return out;
}

// Case study: on shift_down_2 drops up to 2 hold at every base, while
// lambda = 3 is refuted at arbitrarily high thresholds by tall spikes.
CaseOutput repro_shift_down_2(BundleWriter& w, int samples, std::uint64_t seed) {
    const Mapping& m = catalog("shift_down_2");
    CaseOutput out{m.name(), {}};

    std::vector<VerificationReport> c5_reps;
    std::vector<std::string> c5_files;
    auto bases = universal_bases(m, 6, seed);
    for (size_t i = 0; i < bases.size(); ++i) {
        // Beyond the last coordinate >= 1 the base cannot mask a spike's
        // descent, and padding 5 clears boundary effects.
        int tall = 0;
        for (const auto& [n, v] : bases[i].entries()) {
            if (v >= 1.0) tall = std::max(tall, n);
        }
        double eta = static_cast<double>(tall + 1) + 5.0;
        auto rep =
            verify_condition(m, ConditionSpec::drop(ConditionId::C5, 1.0, bases[i], eta),
                             Annulus{eta, 100.0 * (eta + 1.0)}, samples, seed);
        c5_files.push_back(
            w.save("shift_down_2_c5_b" + std::to_string(i) + ".json", dump(rep.to_json())));
        c5_reps.push_back(std::move(rep));
    }
    out.claims.push_back(aggregate("C5", "holds-on-samples", c5_reps, std::move(c5_files)));

    std::vector<VerificationReport> c3_reps;
    std::vector<std::string> c3_files;
    for (double eta : {3.0, 10.0, 100.0}) {
        auto rep = verify_condition(m, ConditionSpec::drop(ConditionId::C3, 3.0,
                                                           Point::zero_seq(), eta),
                                    Annulus{eta, std::max(100.0 * eta, eta + 50.0)}, samples,
                                    seed);
        c3_files.push_back(
            w.save("shift_down_2_c3_eta" + format_double(eta) + ".json", dump(rep.to_json())));
        c3_reps.push_back(std::move(rep));
    }
    out.claims.push_back(aggregate("C3", "refuted", c3_reps, std::move(c3_files)));
    return out;
}

// Case study: identity_ray satisfies the self-drop condition exactly (its
// drop is 0) while every fixed positive drop fails at every threshold.
CaseOutput repro_identity_ray(BundleWriter& w, int samples, std::uint64_t seed) {
    const Mapping& m = catalog("identity_ray");
    CaseOutput out{m.name(), {}};

    std::vector<VerificationReport> c6_reps;
    std::vector<std::string> c6_files;
    auto bases = universal_bases(m, 5, seed);
    for (size_t i = 0; i < bases.size(); ++i) {
        auto rep = verify_condition(m, ConditionSpec::self_drop(bases[i], 2.0),
                                    Annulus{2.0, 200.0}, samples, seed);
        c6_files.push_back(
            w.save("identity_ray_c6_b" + std::to_string(i) + ".json", dump(rep.to_json())));
        c6_reps.push_back(std::move(rep));
    }
    out.claims.push_back(aggregate("C6", "holds-on-samples", c6_reps, std::move(c6_files)));

    std::vector<VerificationReport> c5_reps;
    std::vector<std::string> c5_files;
    for (double lambda : {0.1, 1.0, 10.0}) {
        auto rep = verify_condition(m, ConditionSpec::drop(ConditionId::C5, lambda,
                                                           Point::scalar(3.0), 2.0),
                                    Annulus{2.0, 200.0}, samples, seed);
        c5_files.push_back(w.save("identity_ray_c5_l" + format_double(lambda) + ".json",
                                  dump(rep.to_json())));
        c5_reps.push_back(std::move(rep));
    }
    out.claims.push_back(aggregate("C5", "refuted", c5_reps, std::move(c5_files)));
    return out;
}

}  // namespace

int run_repro(const ReproConfig& cfg, std::ostream& diag) {
    try {
        if (cfg.samples < 1) throw ParamError("repro needs --samples >= 1");
        bool all = cfg.example == "all";
        if (!all && cfg.example != "log_retreat" && cfg.example != "shift_down_2" &&
            cfg.example != "identity_ray") {
            throw ParamError("unknown case '" + cfg.example +
                             "' (all, log_retreat, shift_down_2 or identity_ray)");
        }
        BundleWriter writer{std::filesystem::path(cfg.outdir)};
        std::vector<CaseOutput> cases;
        if (all || cfg.example == "log_retreat") {
            cases.push_back(repro_log_retreat(writer, cfg.samples, cfg.seed));
        }
        if (all || cfg.example == "shift_down_2") {
            cases.push_back(repro_shift_down_2(writer, cfg.samples, cfg.seed));
        }
        if (all || cfg.example == "identity_ray") {
            cases.push_back(repro_identity_ray(writer, cfg.samples, cfg.seed));
        }

        bool all_match = true;
        json manifest;
        manifest["command"] = "repro";
        manifest["example"] = cfg.example;
        manifest["samples"] = cfg.samples;
        manifest["seed"] = cfg.seed;
        json case_array = json::array();
        for (const auto& c : cases) {
            json claims = json::array();
            for (const auto& claim : c.claims) {
                all_match = all_match && claim.match;
                claims.push_back(json{{"condition", claim.condition},
                                      {"expected", claim.expected},
                                      {"observed", claim.observed},
                                      {"match", claim.match},
                                      {"evidence", claim.evidence}});
                diag << "[" << c.name << "] " << claim.condition << " expected "
                     << claim.expected << ", observed " << claim.observed << ": "
                     << (claim.match ? "match" : "MISMATCH") << "\n";
            }
            case_array.push_back(json{{"case", c.name}, {"claims", claims}});
        }
        manifest["cases"] = case_array;
        manifest["all_match"] = all_match;
        writer.save("manifest.json", dump(manifest));
        diag << (all_match ? "all claims match" : "CLAIM MISMATCH") << "; bundle in "
             << cfg.outdir << "\n";
        return all_match ? kExitOk : kExitMismatch;
    } catch (const Error& e) {
        diag << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace fixpoint::cli
