#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixpoint/conditions.hpp"
#include "fixpoint/solver.hpp"

using namespace fixpoint;

TEST_CASE("condition forms") {
    CHECK(form_of(ConditionId::C1) == MarginForm::Ratio);
    CHECK(form_of(ConditionId::C2) == MarginForm::Ratio);
    CHECK(form_of(ConditionId::C3) == MarginForm::Drop);
    CHECK(form_of(ConditionId::C4) == MarginForm::Drop);
    CHECK(form_of(ConditionId::C5) == MarginForm::Drop);
    CHECK(form_of(ConditionId::C6) == MarginForm::SelfDrop);
}

TEST_CASE("spec validation") {
    Point one = Point::scalar(1.0);
    CHECK_THROWS_AS(ConditionSpec::ratio(ConditionId::C1, 1.0, one, 1.0), ParamError);
    CHECK_THROWS_AS(ConditionSpec::ratio(ConditionId::C1, 0.0, one, 1.0), ParamError);
    CHECK_THROWS_AS(ConditionSpec::ratio(ConditionId::C3, 0.5, one, 1.0), ParamError);
    CHECK_THROWS_AS(ConditionSpec::drop(ConditionId::C3, 0.0, one, 1.0), ParamError);
    CHECK_THROWS_AS(ConditionSpec::drop(ConditionId::C1, 1.0, one, 1.0), ParamError);
    CHECK_THROWS_AS(ConditionSpec::drop(ConditionId::C4, 1.0, one, -2.0), ParamError);
    CHECK_THROWS_AS(ConditionSpec::self_drop(one, 0.0), ParamError);
    json j = ConditionSpec::drop(ConditionId::C4, 2.0, one, 3.0).to_json();
    CHECK(j["id"] == "C4");
    CHECK(j["form"] == "drop");
    CHECK(j["lambda"] == 2.0);
    CHECK(j["eta"] == 3.0);
}

TEST_CASE("pointwise margins on affine_half") {
    const Mapping& m = catalog("affine_half");
    Point zero = Point::scalar(0.0);
    Point y = Point::scalar(10.0);
    // d(0, 10) = 10, d(T0, T10) = |1 - 6| = 5
    auto ratio = ConditionSpec::ratio(ConditionId::C2, 0.6, zero, 1.0);
    CHECK(pointwise_margin(m, ratio, zero, y) == 1.0);
    auto drop = ConditionSpec::drop(ConditionId::C4, 2.0, zero, 1.0);
    CHECK(pointwise_margin(m, drop, zero, y) == 3.0);
    // self drop at 0 is d(T0, 0) = 1
    auto self = ConditionSpec::self_drop(zero, 1.0);
    CHECK(pointwise_margin(m, self, zero, y) == 4.0);
    CHECK_THROWS_AS(pointwise_margin(m, drop, Point::scalar(-1.0), y), DomainError);
    CHECK_THROWS_AS(pointwise_margin(m, drop, zero, Point::scalar(-2.0)), DomainError);
}

TEST_CASE("spike margins against shift_down_2 are exactly -1") {
    const Mapping& m = catalog("shift_down_2");
    Point zero = Point::zero_seq();
    auto spec = ConditionSpec::drop(ConditionId::C3, 3.0, zero, 4.5);
    CHECK(pointwise_margin(m, spec, zero, Point::seq({{5, 5.0}})) == -1.0);
    CHECK(pointwise_margin(m, spec, zero, Point::seq({{11, 11.0}})) == -1.0);
    CHECK(pointwise_margin(m, spec, zero, Point::seq({{101, 101.0}})) == -1.0);
    // drops within the mapping's real decay of 2 stay safe on spikes
    auto mild = ConditionSpec::drop(ConditionId::C3, 1.5, zero, 4.5);
    CHECK(pointwise_margin(m, mild, zero, Point::seq({{9, 9.0}})) == 0.5);
}

TEST_CASE("identity margins are exact") {
    const Mapping& m = catalog("identity_ray");
    Point base = Point::scalar(3.0);
    auto self = ConditionSpec::self_drop(base, 2.0);
    CHECK(pointwise_margin(m, self, base, Point::scalar(77.7)) == 0.0);
    auto drop = ConditionSpec::drop(ConditionId::C5, 0.25, base, 2.0);
    CHECK(pointwise_margin(m, drop, base, Point::scalar(77.7)) == -0.25);
}

TEST_CASE("verify_condition holds on affine_half at the one-base ratio") {
    const Mapping& m = catalog("affine_half");
    auto spec = ConditionSpec::ratio(ConditionId::C2, 0.5, Point::scalar(0.0), 1.0);
    auto rep = verify_condition(m, spec, Annulus{1.0, 1000.0}, 3000, 42);
    CHECK(rep.verdict == Verdict::HoldsOnSamples);
    CHECK(!rep.counterexample);
    // |Ty - T0| is |y/2 + 1 - 1|; the +1 can shave an ulp off y/2, so the
    // margin hovers within one ulp of 0 and the float slack absorbs it.
    CHECK(rep.worst_margin <= 0.0);
    CHECK(rep.worst_margin >= -1e-12);
    CHECK(rep.samples == 3000);
    json j = rep.to_json();
    CHECK(j["verdict"] == "holds-on-samples");
    CHECK(j["counterexample"].is_null());
    CHECK(j["note"] == "sampled, not proved");
}

TEST_CASE("verify_condition surfaces the canonical witness first") {
    const Mapping& m = catalog("shift_down_2");
    auto spec = ConditionSpec::drop(ConditionId::C3, 3.0, Point::zero_seq(), 10.0);
    auto rep = verify_condition(m, spec, Annulus{10.0, 1000.0}, 2000, 42);
    CHECK(rep.verdict == Verdict::Refuted);
    REQUIRE(rep.counterexample);
    CHECK(rep.counterexample->y == Point::seq({{11, 11.0}}));
    CHECK(rep.counterexample->lhs == 9.0);  // ||T(11 e_11) - T0|| = 9
    CHECK(rep.counterexample->rhs == 8.0);  // allowed: 11 - 3
    CHECK(rep.worst_margin == -1.0);
    CHECK(rep.samples == 2001);  // witness + samples
}

TEST_CASE("verify_condition spots identity drops at exactly -lambda") {
    const Mapping& m = catalog("identity_ray");
    auto spec = ConditionSpec::drop(ConditionId::C5, 1.0, Point::scalar(1.0), 5.0);
    auto rep = verify_condition(m, spec, Annulus{5.0, 500.0}, 1000, 42);
    CHECK(rep.refuted());
    CHECK(rep.worst_margin == -1.0);
    REQUIRE(rep.counterexample);
    CHECK(rep.counterexample->y == Point::scalar(7.0));  // witness: max(eta, 1) + 2
}

TEST_CASE("verify_condition validates its inputs") {
    const Mapping& m = catalog("affine_half");
    auto spec = ConditionSpec::ratio(ConditionId::C2, 0.5, Point::scalar(0.0), 10.0);
    CHECK_THROWS_AS(verify_condition(m, spec, Annulus{5.0, 100.0}, 10, 1), ParamError);
    CHECK_THROWS_AS(verify_condition(m, spec, Annulus{10.0, 10.0}, 10, 1), ParamError);
    auto outside = ConditionSpec::ratio(ConditionId::C2, 0.5, Point::scalar(-3.0), 1.0);
    CHECK_THROWS_AS(verify_condition(m, outside, Annulus{1.0, 10.0}, 10, 1), DomainError);
    ConditionSpec no_base;
    no_base.id = ConditionId::C2;
    no_base.form = MarginForm::Ratio;
    no_base.param = 0.5;
    no_base.eta = 1.0;
    CHECK_THROWS_AS(verify_condition(m, no_base, Annulus{1.0, 10.0}, 10, 1), ParamError);
}

TEST_CASE("one-base ratio transports to any base") {
    const Mapping& m = catalog("affine_half");
    auto d = derive_c1_from_c2(m, 0.5, Point::scalar(0.0), 1.0, Point::scalar(4.0));
    CHECK(d.r == 0.75);
    CHECK(d.eta == 28.0);
    auto spec = ConditionSpec::ratio(ConditionId::C1, d.r, Point::scalar(4.0), d.eta);
    auto rep = verify_condition(m, spec, Annulus{d.eta, 100.0 * d.eta}, 3000, 42);
    CHECK(rep.verdict == Verdict::HoldsOnSamples);
    CHECK_THROWS_AS(derive_c1_from_c2(m, 1.0, Point::scalar(0.0), 1.0, Point::scalar(4.0)),
                    ParamError);
}

TEST_CASE("one-base ratio yields drop thresholds") {
    CHECK(derive_c4_from_c2(0.5, Point::scalar(0.0), 1.0, 3.0) == 6.0);
    CHECK(derive_c4_from_c2(0.5, Point::scalar(2.0), 20.0, 3.0) == 20.0);  // eta' dominates
    CHECK_THROWS_AS(derive_c4_from_c2(0.5, Point::scalar(0.0), 1.0, 0.0), ParamError);

    auto sched = c4_schedule_from_c2(0.5, Point::scalar(0.0), 1.0);
    CHECK(sched(3.0) == 6.0);
    CHECK(sched(0.25) == 1.0);
    CHECK(!sched.desc.empty());
    CHECK_THROWS_AS(sched(-1.0), ParamError);

    const Mapping& m = catalog("affine_half");
    double eta = derive_c3_from_c4(m, Point::scalar(0.0), sched, Point::scalar(4.0), 1.0);
    CHECK(eta == 14.0);
    auto spec = ConditionSpec::drop(ConditionId::C3, 1.0, Point::scalar(4.0), eta);
    auto rep = verify_condition(m, spec, Annulus{eta, 100.0 * eta}, 3000, 42);
    CHECK(rep.verdict == Verdict::HoldsOnSamples);
}

TEST_CASE("schedules reject nonsense") {
    EtaSchedule empty;
    CHECK_THROWS_AS(empty(1.0), ParamError);
    EtaSchedule bad;
    bad.fn = [](double) { return -1.0; };
    CHECK_THROWS_AS(bad(1.0), ParamError);
    CHECK_THROWS_AS(c4_schedule_from_c2(2.0, Point::scalar(0.0), 1.0), ParamError);
}

TEST_CASE("ratio curve is flat at the true ratio for affine_half") {
    const Mapping& m = catalog("affine_half");
    auto curve = ratio_curve(m, Point::scalar(0.0), {1.0, 10.0, 100.0}, 10.0, 500, 42);
    REQUIRE(curve.size() == 3);
    for (const auto& c : curve) {
        CHECK(std::abs(c.statistic - 0.5) < 1e-14);  // ulp noise from the +1 in T
        CHECK(c.samples == 500);
        CHECK(c.arg_norm > c.radius);
        CHECK(c.arg_norm <= 10.0 * c.radius);
    }
}

TEST_CASE("ratio curve climbs towards 1 on log_retreat") {
    const Mapping& m = catalog("log_retreat");
    auto curve = ratio_curve(m, Point::scalar(1.0), {10.0, 100.0, 1000.0}, 10.0, 1500, 42);
    REQUIRE(curve.size() == 3);
    for (size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].statistic > curve[i - 1].statistic);
    for (const auto& c : curve) CHECK(c.statistic < 1.0);
    double oracle = 1.0 - std::log(1e4) / (1e4 - 1.0);  // ratio at the band's far edge
    CHECK(std::abs(curve[2].statistic - oracle) < 2e-3);
}

TEST_CASE("gap curve matches the closed form on log_retreat") {
    const Mapping& m = catalog("log_retreat");
    std::vector<double> radii{std::exp(2.0), std::exp(5.0), std::exp(8.0)};
    auto curve = gap_curve(m, Point::scalar(1.0), radii, std::exp(1.0), 1000, 42);
    REQUIRE(curve.size() == 3);
    for (const auto& c : curve) {
        // statistic = max over the band of -log ||y||, attained at arg_norm
        CHECK(std::abs(c.statistic - (-std::log(c.arg_norm))) < 1e-9);
    }
    CHECK(curve[0].statistic > curve[1].statistic);
    CHECK(curve[1].statistic > curve[2].statistic);
}

TEST_CASE("gap curve is exactly zero on identity_ray") {
    const Mapping& m = catalog("identity_ray");
    auto curve = gap_curve(m, Point::scalar(1.0), {10.0, 100.0}, 10.0, 400, 42);
    for (const auto& c : curve) CHECK(c.statistic == 0.0);
}

TEST_CASE("curves validate their inputs") {
    const Mapping& m = catalog("affine_half");
    Point zero = Point::scalar(0.0);
    CHECK_THROWS_AS(ratio_curve(m, zero, {}, 10.0, 10, 1), ParamError);
    CHECK_THROWS_AS(ratio_curve(m, zero, {10.0, 5.0}, 10.0, 10, 1), ParamError);
    CHECK_THROWS_AS(ratio_curve(m, zero, {10.0}, 1.0, 10, 1), ParamError);
    CHECK_THROWS_AS(ratio_curve(m, zero, {10.0}, 10.0, 0, 1), ParamError);
    CHECK_THROWS_AS(ratio_curve(m, Point::scalar(20.0), {10.0}, 10.0, 10, 1), ParamError);
    CHECK_THROWS_AS(gap_curve(m, Point::scalar(-1.0), {10.0}, 10.0, 10, 1), DomainError);
}

TEST_CASE("curve CSV format is pinned") {
    std::vector<CurvePoint> curve{{10.0, 0.5, 100, 25.0}, {100.0, 0.25, 100, 250.0}};
    CHECK(curve_to_csv(curve) == "radius,statistic,samples\n10,0.5,100\n100,0.25,100\n");
}

TEST_CASE("universal bases mix special and sampled points") {
    const Mapping& m = catalog("shift_down_2");
    auto bases = universal_bases(m, 4, 42);
    REQUIRE(bases.size() == 6);  // 2 special + 4 sampled
    CHECK(bases[0] == Point::zero_seq());
    CHECK(bases[1] == Point::seq({{1, 1.0}, {3, 2.0}}));
    for (const auto& b : bases) CHECK(m.domain().contains(b));
    CHECK(universal_bases(m, 4, 42) == bases);
}

TEST_CASE("residual infimum probe finds an exact fixed point on identity_ray") {
    const Mapping& m = catalog("identity_ray");
    auto probe = residual_infimum_probe(m, Point::scalar(3.0), 1.0, 2.0, {0.5, 0.25});
    CHECK(probe.d_estimate == 0.0);
    CHECK(probe.best_point == Point::scalar(3.0));
    REQUIRE(probe.steps.size() == 2);
    for (const auto& s : probe.steps) {
        CHECK(s.residual == 0.0);
        CHECK(s.identity_gap == 0.0);
    }
}

TEST_CASE("residual infimum probe drives the residual like t on log_retreat") {
    const Mapping& m = catalog("log_retreat");
    std::vector<double> ts{0.5, 0.25, 0.125, 0.0625};
    auto probe = residual_infimum_probe(m, Point::scalar(5.0), 1.0, 1.0, ts);
    REQUIRE(probe.steps.size() == 4);
    for (size_t i = 0; i < probe.steps.size(); ++i) {
        CHECK(probe.steps[i].identity_gap < 1e-8);
        if (i > 0) CHECK(probe.steps[i].residual < probe.steps[i - 1].residual);
    }
    CHECK(probe.d_estimate == probe.steps.back().residual);
    CHECK(probe.d_estimate < 0.3);
    json j = probe.to_json();
    CHECK(j["steps"].size() == 4);
}

TEST_CASE("probe bounds the displacement infimum of a translation") {
    // Tx = x + 1 never comes closer than 1 to any of its inputs, and the
    // probe's residuals converge to that exact displacement.
    Mapping drift("drift_up", Space::real_interval(0.0),
                  [](const Point& p) { return Point::scalar(p.scalar_value() + 1.0); });
    auto probe = residual_infimum_probe(drift, Point::scalar(0.0), 2.0, 1.0, {0.5, 0.25, 0.125});
    CHECK(std::abs(probe.d_estimate - 1.0) < 1e-9);
    for (const auto& s : probe.steps) CHECK(s.identity_gap < 1e-9);
    // d_estimate < lambda means no drop of size 2 can ever hold
    CHECK(probe.d_estimate < 2.0);
}

TEST_CASE("probe propagates resolvent non-convergence") {
    // At tiny t the translation's resolvent point sits ~1/t away and the
    // damped iteration contracts only by 1 - t per step.
    Mapping drift("drift_up", Space::real_interval(0.0),
                  [](const Point& p) { return Point::scalar(p.scalar_value() + 1.0); });
    CHECK_THROWS_AS(residual_infimum_probe(drift, Point::scalar(0.0), 1.0, 1.0, {1e-7}),
                    ConvergenceError);
    const Mapping& m = catalog("log_retreat");
    CHECK_THROWS_AS(residual_infimum_probe(m, Point::scalar(5.0), 1.0, 1.0, {}), ParamError);
    CHECK_THROWS_AS(residual_infimum_probe(m, Point::scalar(5.0), 1.0, 1.0, {0.25, 0.5}),
                    ParamError);
}
