#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fixpoint/solver.hpp"

using namespace fixpoint;

namespace {

// Tx = x + 1 on [0, inf): nonexpansive, fixed-point free, displacement 1.
Mapping drift_up() {
    return Mapping("drift_up", Space::real_interval(0.0),
                   [](const Point& p) { return Point::scalar(p.scalar_value() + 1.0); });
}

// Root of z + log z = 5, the damped equation for log_retreat at t = 1/2.
double log_resolvent_root() {
    double lo = 1.0, hi = 5.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (mid + std::log(mid) < 5.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("invariant ball radius is eta + norm + displacement") {
    const Mapping& lg = catalog("log_retreat");
    Ball b = invariant_ball(lg, Point::scalar(1.0), 5.0);
    CHECK(b.radius == 6.0);  // 5 + ||1|| + 0, T fixes 1
    CHECK(b.center == Point::scalar(1.0));
    CHECK(b.space == lg.domain());

    const Mapping& af = catalog("affine_half");
    Ball ba = invariant_ball(af, Point::scalar(0.0), 2.0);
    CHECK(ba.radius == 3.0);  // 2 + 0 + |T0 - 0| = 2 + 1

    const Mapping& sh = catalog("shift_down_2");
    Ball bs = invariant_ball(sh, Point::zero_seq(), 5.0);
    CHECK(bs.radius == 5.0);

    CHECK_THROWS_AS(invariant_ball(lg, Point::scalar(1.0), 0.0), ParamError);
    CHECK_THROWS_AS(invariant_ball(lg, Point::scalar(0.5), 1.0), DomainError);
}

TEST_CASE("ball membership honours boundary and space") {
    Ball b{Point::scalar(1.0), 6.0, Space::real_interval(1.0)};
    CHECK(b.contains(Point::scalar(7.0)));  // boundary is inside
    CHECK(b.contains(Point::scalar(1.0)));
    CHECK_FALSE(b.contains(Point::scalar(7.0000001)));
    CHECK_FALSE(b.contains(Point::scalar(0.5)));  // outside the ray
    CHECK_FALSE(b.contains(Point::zero_seq()));   // wrong structure, no throw

    json j = b.to_json();
    CHECK(j["radius"] == 6.0);
    CHECK(j.contains("center"));
    CHECK(j.contains("space"));
}

TEST_CASE("log_retreat keeps its invariant ball, worst case on the boundary") {
    const Mapping& m = catalog("log_retreat");
    Ball b = invariant_ball(m, Point::scalar(1.0), 5.0);
    auto rep = verify_invariance(m, b, 300, 42);
    CHECK(rep.verdict == Verdict::HoldsOnSamples);
    CHECK_FALSE(rep.counterexample.has_value());
    CHECK(rep.samples == 303);  // center + two clamps + draws, all inside
    // The margin 6 - d(T y, 1) decreases in y, so y = 7 is the tight spot.
    double expected = 6.0 - m.domain().distance(m.apply(Point::scalar(7.0)), Point::scalar(1.0));
    CHECK(rep.worst_margin == expected);
    CHECK(std::abs(rep.worst_margin - std::log(7.0)) < 1e-12);
    CHECK(rep.spec["check"] == "ball_invariance");
    CHECK(rep.spec["radius"] == 6.0);
}

TEST_CASE("shift_down_2 keeps the ball around the origin") {
    const Mapping& m = catalog("shift_down_2");
    Ball b = invariant_ball(m, Point::zero_seq(), 5.0);
    auto rep = verify_invariance(m, b, 400, 7);
    CHECK(rep.verdict == Verdict::HoldsOnSamples);
    // The spike {5:5} maps to {5:3}; nothing inside does worse.
    CHECK(rep.worst_margin == 2.0);
}

TEST_CASE("a translation escapes every ball") {
    Mapping m = drift_up();
    Ball b{Point::scalar(0.0), 5.0, Space::real_interval(0.0)};
    auto rep = verify_invariance(m, b, 200, 42);
    CHECK(rep.verdict == Verdict::Refuted);
    REQUIRE(rep.counterexample.has_value());
    CHECK(rep.counterexample->y == Point::scalar(5.0));  // boundary clamp found first
    CHECK(rep.counterexample->lhs == 6.0);               // d(T5, 0)
    CHECK(rep.counterexample->rhs == 5.0);               // radius
    CHECK(rep.worst_margin == -1.0);
}

TEST_CASE("invariance checker validates its inputs") {
    const Mapping& m = catalog("log_retreat");
    Ball zero_radius{Point::scalar(1.0), 0.0, m.domain()};
    CHECK_THROWS_AS(verify_invariance(m, zero_radius, 10, 1), ParamError);
    Ball wrong_space{Point::scalar(1.0), 2.0, Space::real_interval(0.0)};
    CHECK_THROWS_AS(verify_invariance(m, wrong_space, 10, 1), StructureError);
    Ball stray_center{Point::scalar(0.5), 2.0, m.domain()};
    CHECK_THROWS_AS(verify_invariance(m, stray_center, 10, 1), DomainError);
    Ball ok{Point::scalar(1.0), 2.0, m.domain()};
    CHECK_THROWS_AS(verify_invariance(m, ok, -1, 1), ParamError);
}

TEST_CASE("resolvent at the identity returns the anchor instantly") {
    const Mapping& m = catalog("identity_ray");
    auto rr = resolvent(m, Point::scalar(3.0), 0.5, 1e-12, 100);
    CHECK(rr.point == Point::scalar(3.0));
    CHECK(rr.equation_residual == 0.0);
    CHECK(rr.trace.converged);
    CHECK(rr.trace.iterations() == 0);
    CHECK(rr.trace.steps.size() == 1);
}

TEST_CASE("resolvent of log_retreat solves z + log z = 5") {
    const Mapping& m = catalog("log_retreat");
    double root = log_resolvent_root();
    auto rr = resolvent(m, Point::scalar(5.0), 0.5, 1e-11, 100000);
    CHECK(rr.trace.converged);
    CHECK(std::abs(rr.point.scalar_value() - root) < 2e-11);
    CHECK(rr.equation_residual < 1e-11);

    // Identity linking residual and anchor distance at the solved point.
    double r1 = m.domain().distance(m.apply(rr.point), rr.point);
    double r2 = 0.5 * m.domain().distance(m.apply(rr.point), Point::scalar(5.0));
    CHECK(std::abs(r1 - r2) < 1e-9);

    // Steps contract at least as fast as 1 - t.
    const auto& steps = rr.trace.steps;
    REQUIRE(steps.size() >= 3);
    for (size_t i = 1; i < steps.size(); ++i) {
        if (steps[i - 1].step > 1e-14) {
            CHECK(steps[i].step <= 0.5 * steps[i - 1].step + 1e-12);
        }
    }

    // The solution does not depend on where the iteration starts.
    auto far = resolvent(m, Point::scalar(5.0), 0.5, 1e-11, 100000, Point::scalar(100.0));
    CHECK(std::abs(far.point.scalar_value() - rr.point.scalar_value()) < 4e-11);
}

TEST_CASE("resolvent rejects bad parameters") {
    const Mapping& m = catalog("log_retreat");
    Point x1 = Point::scalar(5.0);
    CHECK_THROWS_AS(resolvent(m, x1, 0.0, 1e-9, 100), ParamError);
    CHECK_THROWS_AS(resolvent(m, x1, 1.0, 1e-9, 100), ParamError);
    CHECK_THROWS_AS(resolvent(m, x1, -0.5, 1e-9, 100), ParamError);
    CHECK_THROWS_AS(resolvent(m, x1, 0.5, 0.0, 100), ParamError);
    CHECK_THROWS_AS(resolvent(m, x1, 0.5, 1e-9, 0), ParamError);
    CHECK_THROWS_AS(resolvent(m, Point::scalar(0.5), 0.5, 1e-9, 100), DomainError);
    CHECK_THROWS_AS(resolvent(m, x1, 0.5, 1e-9, 100, Point::scalar(0.5)), DomainError);
}

TEST_CASE("resolvent reports non-convergence with its trace") {
    const Mapping& m = catalog("identity_ray");
    // At t = 1e-7 the iteration contracts by 1 - t per step; from a start
    // 97 away it cannot reach the 1e-17 stopping step in 1000 iterations.
    try {
        resolvent(m, Point::scalar(3.0), 1e-7, 1e-10, 1000, Point::scalar(100.0));
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK_FALSE(e.trace().converged);
        CHECK(e.trace().steps.size() == 1001);
    }
}

TEST_CASE("picard iteration drives log_retreat to its fixed point") {
    const Mapping& m = catalog("log_retreat");
    auto res = find_fixed_point(m, Point::scalar(5.0), PicardMethod{}, 1e-10, 200000);
    CHECK(res.converged);
    CHECK(std::abs(res.point.scalar_value() - 1.0) <= 1e-9);
    CHECK(res.residual <= 1e-10);
    REQUIRE(res.certificate.has_value());
    CHECK(res.certificate->x0 == res.point);
    CHECK(res.certificate->eta == 1.0);
    CHECK(res.trace.method == "picard");

    const auto& steps = res.trace.steps;
    REQUIRE(steps.size() >= 3);
    CHECK(steps.front().k == 0);
    CHECK(std::abs(steps.front().residual - std::log(5.0)) < 1e-15);
    for (size_t i = 1; i < steps.size(); ++i) {
        CHECK(steps[i].residual < steps[i - 1].residual);
    }
    CHECK(steps.back().step == 0.0);  // converged row records no move

    json j = res.to_json();
    CHECK(j["converged"] == true);
    CHECK(j["method"] == "picard");
    CHECK(j["certificate"]["eta"] == 1.0);
    CHECK(j["iterations"] == res.trace.iterations());
}

TEST_CASE("picard on shift_down_2 reaches zero in exactly five moves") {
    const Mapping& m = catalog("shift_down_2");
    Point start = Point::seq({{1, 1.0}, {4, 4.0}, {9, 9.0}});
    auto res = find_fixed_point(m, start, PicardMethod{}, 0.0, 100);
    CHECK(res.converged);
    CHECK(res.point == Point::zero_seq());
    CHECK(res.residual == 0.0);
    CHECK(res.trace.iterations() == 5);
    CHECK(res.trace.steps.size() == 6);
    // Tallest spike shrinks by 2 per move: residuals 2,2,2,2,1 then 0.
    CHECK(res.trace.steps[0].residual == 2.0);
    CHECK(res.trace.steps[4].residual == 1.0);
    CHECK(res.trace.steps[5].residual == 0.0);
}

TEST_CASE("picard reports a stalled orbit without throwing") {
    Mapping m = drift_up();
    auto res = find_fixed_point(m, Point::scalar(0.0), PicardMethod{}, 1e-9, 50);
    CHECK_FALSE(res.converged);
    CHECK(res.residual == 1.0);
    CHECK_FALSE(res.certificate.has_value());
    CHECK(res.trace.iterations() == 50);
    CHECK(res.to_json()["certificate"].is_null());
}

TEST_CASE("averaged iteration converges and is labelled with its weight") {
    const Mapping& id = catalog("identity_ray");
    auto still = find_fixed_point(id, Point::scalar(3.0), AveragedMethod{0.5}, 1e-12, 100);
    CHECK(still.converged);
    CHECK(still.point == Point::scalar(3.0));
    CHECK(still.trace.iterations() == 0);

    const Mapping& af = catalog("affine_half");
    auto res = find_fixed_point(af, Point::scalar(0.0), AveragedMethod{0.5}, 1e-10, 10000);
    CHECK(res.converged);
    CHECK(std::abs(res.point.scalar_value() - 2.0) <= 1e-9);
    CHECK(res.trace.method == "averaged(alpha=0.5)");

    CHECK_THROWS_AS(find_fixed_point(af, Point::scalar(0.0), AveragedMethod{0.0}, 1e-9, 10),
                    ParamError);
    CHECK_THROWS_AS(find_fixed_point(af, Point::scalar(0.0), AveragedMethod{1.5}, 1e-9, 10),
                    ParamError);
}

TEST_CASE("resolvent schedule walks the damping levels down") {
    const Mapping& id = catalog("identity_ray");
    Method sched = ResolventScheduleMethod{default_resolvent_schedule()};
    auto still = find_fixed_point(id, Point::scalar(3.0), sched, 1e-12, 1000);
    CHECK(still.converged);
    CHECK(still.point == Point::scalar(3.0));
    CHECK(still.trace.method == "resolvent_schedule(levels=20)");
    CHECK(still.trace.steps.size() == 1);  // start already at tolerance

    const Mapping& lg = catalog("log_retreat");
    auto res = find_fixed_point(lg, Point::scalar(5.0), sched, 5e-4, 200000);
    CHECK(res.converged);
    CHECK(res.residual <= 5e-4);
    CHECK(std::abs(res.point.scalar_value() - 1.0) < 5e-3);
    const auto& steps = res.trace.steps;
    REQUIRE(steps.size() >= 3);
    for (size_t i = 1; i < steps.size(); ++i) {
        CHECK(steps[i].residual <= steps[i - 1].residual + 1e-12);
    }
}

TEST_CASE("resolvent schedule treats max_iter as a total budget") {
    const Mapping& lg = catalog("log_retreat");
    Method sched = ResolventScheduleMethod{default_resolvent_schedule()};
    auto res = find_fixed_point(lg, Point::scalar(5.0), sched, 1e-30, 60);
    CHECK_FALSE(res.converged);
    CHECK_FALSE(res.certificate.has_value());
    CHECK(res.residual > 0.01);
    CHECK(res.trace.steps.size() >= 2);  // at least one level completed
}

TEST_CASE("fixed-point driver validates inputs") {
    const Mapping& m = catalog("log_retreat");
    Point s = Point::scalar(5.0);
    CHECK_THROWS_AS(find_fixed_point(m, s, PicardMethod{}, -1.0, 100), ParamError);
    CHECK_THROWS_AS(find_fixed_point(m, s, PicardMethod{}, 1e-9, 0), ParamError);
    CHECK_THROWS_AS(find_fixed_point(m, Point::scalar(0.5), PicardMethod{}, 1e-9, 100),
                    DomainError);
    CHECK_THROWS_AS(find_fixed_point(m, s, ResolventScheduleMethod{{}}, 1e-9, 100), ParamError);
    CHECK_THROWS_AS(find_fixed_point(m, s, ResolventScheduleMethod{{0.5, 0.5}}, 1e-9, 100),
                    ParamError);
    CHECK_THROWS_AS(find_fixed_point(m, s, ResolventScheduleMethod{{0.5, 0.7}}, 1e-9, 100),
                    ParamError);
    CHECK_THROWS_AS(find_fixed_point(m, s, ResolventScheduleMethod{{1.5}}, 1e-9, 100),
                    ParamError);
}

TEST_CASE("observer sees every iterate and the orbit stays in the ball") {
    const Mapping& m = catalog("log_retreat");
    Ball b = invariant_ball(m, Point::scalar(1.0), 5.0);
    std::vector<Point> seen;
    auto res = find_fixed_point(m, Point::scalar(5.0), PicardMethod{}, 1e-10, 200000,
                                [&](const Point& p) { seen.push_back(p); });
    CHECK(res.converged);
    CHECK(static_cast<int>(seen.size()) == res.trace.iterations());
    REQUIRE(!seen.empty());
    for (const Point& p : seen) CHECK(b.contains(p));
}

TEST_CASE("a fixed point certifies the self-drop condition") {
    const Mapping& sh = catalog("shift_down_2");
    auto rep = certify_c6_from_fixed_point(sh, Point::zero_seq(), 500, 42);
    CHECK(rep.verdict == Verdict::HoldsOnSamples);
    CHECK(rep.worst_margin > 1.0 - 1e-9);  // norms above 1 all drop fully
    CHECK(rep.spec["allowance"] == 0.0);
    CHECK(rep.samples == 500);

    const Mapping& id = catalog("identity_ray");
    auto rid = certify_c6_from_fixed_point(id, Point::scalar(3.0), 400, 7);
    CHECK(rid.verdict == Verdict::HoldsOnSamples);
    CHECK(rid.worst_margin == 0.0);  // zero displacement, zero drop demanded

    const Mapping& af = catalog("affine_half");
    auto raf = certify_c6_from_fixed_point(af, Point::scalar(2.0), 400, 7);
    CHECK(raf.verdict == Verdict::HoldsOnSamples);
    CHECK(raf.worst_margin >= 0.0);
}

TEST_CASE("certification tolerates only small residuals") {
    const Mapping& af = catalog("affine_half");
    CHECK_THROWS_AS(certify_c6_from_fixed_point(af, Point::scalar(10.0), 100, 1), ParamError);

    // A near-fixed point passes: misses are covered by its own residual.
    auto rep = certify_c6_from_fixed_point(af, Point::scalar(2.0 + 1e-8), 400, 11);
    CHECK(rep.verdict == Verdict::HoldsOnSamples);
    CHECK(rep.spec["allowance"].get<double>() > 0.0);
    CHECK(rep.spec["allowance"].get<double>() <= 1e-6);

    const Mapping& lg = catalog("log_retreat");
    CHECK_THROWS_AS(certify_c6_from_fixed_point(lg, Point::scalar(0.5), 100, 1), DomainError);
    CHECK_THROWS_AS(certify_c6_from_fixed_point(lg, Point::scalar(1.0), -1, 1), ParamError);
}

TEST_CASE("solver traces print as csv") {
    SolverTrace tr;
    tr.method = "demo";
    tr.steps = {TraceStep{0, 1.5, 0.5}, TraceStep{1, 0.75, 0.25}};
    CHECK(tr.to_csv() == "k,residual,step\n0,1.5,0.5\n1,0.75,0.25\n");
    CHECK(tr.iterations() == 1);
    CHECK(SolverTrace{}.iterations() == 0);
}
