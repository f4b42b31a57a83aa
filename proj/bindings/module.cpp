#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fixpoint/conditions.hpp"
#include "fixpoint/mappings.hpp"
#include "fixpoint/solver.hpp"
#include "fixpoint/spaces.hpp"

namespace py = pybind11;
using namespace fixpoint;

namespace {

Method method_from_args(const std::string& method, double alpha,
                        const std::optional<std::vector<double>>& ts) {
    if (method == "picard") return PicardMethod{};
    if (method == "averaged") return AveragedMethod{alpha};
    if (method == "resolvent") {
        return ResolventScheduleMethod{ts ? *ts : default_resolvent_schedule()};
    }
    throw ParamError("unknown method '" + method + "' (picard, averaged or resolvent)");
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "sampled condition checks, scale scans and fixed-point drivers for "
                "nonexpansive mappings";

    auto err = py::register_exception<Error>(mod, "Error");
    py::register_exception<StructureError>(mod, "StructureError", err);
    py::register_exception<DomainError>(mod, "DomainError", err);
    py::register_exception<SamplerError>(mod, "SamplerError", err);
    py::register_exception<ParamError>(mod, "ParamError", err);
    py::register_exception<ConvergenceError>(mod, "ConvergenceError", err);

    py::class_<Point>(mod, "Point")
        .def_static("scalar", &Point::scalar, py::arg("value"))
        .def_static("seq", &Point::seq, py::arg("entries"))
        .def_static("zero_seq", &Point::zero_seq)
        .def_static("parse", &Point::parse, py::arg("text"))
        .def_property_readonly("is_scalar", &Point::is_scalar)
        .def_property_readonly("is_seq", &Point::is_seq)
        .def("scalar_value", &Point::scalar_value)
        .def("entries", &Point::entries)
        .def("coord", &Point::coord, py::arg("n"))
        .def("is_integral", &Point::is_integral)
        .def("to_json", [](const Point& p) { return p.to_json().dump(); })
        .def("__eq__", [](const Point& a, const Point& b) { return a == b; })
        .def("__repr__", [](const Point& p) { return "Point(" + p.to_compact_string() + ")"; })
        .def("__str__", &Point::to_compact_string);

    mod.def("lin_comb", &lin_comb, py::arg("a"), py::arg("x"), py::arg("b"), py::arg("y"));
    mod.def("point_norm", &point_norm, py::arg("p"));

    py::class_<Space>(mod, "Space")
        .def_static("real_interval", &Space::real_interval, py::arg("lower"),
                    py::arg("upper") = std::nullopt)
        .def_static("c0_box", &Space::c0_box)
        .def("norm", &Space::norm, py::arg("p"))
        .def("distance", &Space::distance, py::arg("x"), py::arg("y"))
        .def("contains", &Space::contains, py::arg("p"))
        .def("sample_annulus", &Space::sample_annulus, py::arg("eta"), py::arg("radius_max"),
             py::arg("count"), py::arg("seed"))
        .def("describe", &Space::describe)
        .def("__eq__", [](const Space& a, const Space& b) { return a == b; })
        .def("__repr__", [](const Space& s) { return "Space(" + s.describe() + ")"; });

    py::class_<Mapping>(mod, "Mapping")
        .def_property_readonly("name", &Mapping::name)
        .def_property_readonly("domain", &Mapping::domain)
        .def_property_readonly("note", &Mapping::note)
        .def_property_readonly("special_points", &Mapping::special_points)
        .def("apply", &Mapping::apply, py::arg("p"))
        .def("witness",
             [](const Mapping& m, const std::string& id, double eta, double param) {
                 return m.witness(condition_id_from_string(id), eta, param);
             },
             py::arg("condition"), py::arg("eta"), py::arg("param") = 0.0)
        .def("__repr__", [](const Mapping& m) { return "Mapping(" + m.name() + ")"; });

    mod.def("catalog", &catalog, py::arg("name"), py::return_value_policy::reference);
    mod.def("catalog_names", &catalog_names);
    mod.def("check_nonexpansive", &check_nonexpansive, py::arg("m"), py::arg("pairs"),
            py::arg("seed"), py::arg("radius_max"));

    py::class_<Counterexample>(mod, "Counterexample")
        .def_readonly("y", &Counterexample::y)
        .def_readonly("x", &Counterexample::x)
        .def_readonly("lhs", &Counterexample::lhs)
        .def_readonly("rhs", &Counterexample::rhs)
        .def("__repr__", [](const Counterexample& c) {
            return "Counterexample(y=" + c.y.to_compact_string() + ")";
        });

    py::class_<VerificationReport>(mod, "VerificationReport")
        .def_property_readonly("verdict",
                               [](const VerificationReport& r) { return to_string(r.verdict); })
        .def_readonly("mapping", &VerificationReport::mapping)
        .def_readonly("worst_margin", &VerificationReport::worst_margin)
        .def_readonly("counterexample", &VerificationReport::counterexample)
        .def_readonly("samples", &VerificationReport::samples)
        .def_readonly("seed", &VerificationReport::seed)
        .def_readonly("exact", &VerificationReport::exact)
        .def_readonly("note", &VerificationReport::note)
        .def("refuted", &VerificationReport::refuted)
        .def("to_json", [](const VerificationReport& r) { return r.to_json().dump(2); })
        .def("__repr__", [](const VerificationReport& r) {
            return "VerificationReport(" + to_string(r.verdict) + ")";
        });

    py::class_<ConditionSpec>(mod, "ConditionSpec")
        .def_static(
            "ratio",
            [](const std::string& id, double r, const Point& base, double eta) {
                return ConditionSpec::ratio(condition_id_from_string(id), r, base, eta);
            },
            py::arg("id"), py::arg("r"), py::arg("base"), py::arg("eta"))
        .def_static(
            "drop",
            [](const std::string& id, double lambda, const Point& base, double eta) {
                return ConditionSpec::drop(condition_id_from_string(id), lambda, base, eta);
            },
            py::arg("id"), py::arg("lambda_"), py::arg("base"), py::arg("eta"))
        .def_static("self_drop", &ConditionSpec::self_drop, py::arg("base"), py::arg("eta"))
        .def_property_readonly("id", [](const ConditionSpec& s) { return to_string(s.id); })
        .def_readonly("param", &ConditionSpec::param)
        .def_readonly("base", &ConditionSpec::base)
        .def_readonly("eta", &ConditionSpec::eta)
        .def("to_json", [](const ConditionSpec& s) { return s.to_json().dump(); });

    py::class_<Annulus>(mod, "Annulus")
        .def(py::init([](double eta, double radius_max) {
                 return Annulus{eta, radius_max};
             }),
             py::arg("eta"), py::arg("radius_max"))
        .def_readonly("eta", &Annulus::eta)
        .def_readonly("radius_max", &Annulus::radius_max);

    mod.def("pointwise_margin", &pointwise_margin, py::arg("m"), py::arg("spec"),
            py::arg("base"), py::arg("y"));
    mod.def("verify_condition", &verify_condition, py::arg("m"), py::arg("spec"),
            py::arg("annulus"), py::arg("samples"), py::arg("seed"));

    mod.def(
        "derive_c1_from_c2",
        [](const Mapping& m, double r_prime, const Point& x0, double eta_prime,
           const Point& x1) {
            DerivedRatio d = derive_c1_from_c2(m, r_prime, x0, eta_prime, x1);
            return py::make_tuple(d.r, d.eta);
        },
        py::arg("m"), py::arg("r_prime"), py::arg("x0"), py::arg("eta_prime"), py::arg("x1"));
    mod.def("derive_c4_from_c2", &derive_c4_from_c2, py::arg("r_prime"), py::arg("x0"),
            py::arg("eta_prime"), py::arg("lambda_"));

    py::class_<EtaSchedule>(mod, "EtaSchedule")
        .def(py::init([](std::function<double(double)> fn, const std::string& desc) {
                 EtaSchedule s;
                 s.fn = std::move(fn);
                 s.desc = desc;
                 return s;
             }),
             py::arg("fn"), py::arg("desc") = "")
        .def_readonly("desc", &EtaSchedule::desc)
        .def("__call__", &EtaSchedule::operator(), py::arg("lambda_"));

    mod.def("c4_schedule_from_c2", &c4_schedule_from_c2, py::arg("r_prime"), py::arg("x0"),
            py::arg("eta_prime"));
    mod.def("derive_c3_from_c4", &derive_c3_from_c4, py::arg("m"), py::arg("x0"),
            py::arg("schedule"), py::arg("x1"), py::arg("lambda_"));

    py::class_<ProbeStep>(mod, "ProbeStep")
        .def_readonly("t", &ProbeStep::t)
        .def_readonly("y_norm", &ProbeStep::y_norm)
        .def_readonly("residual", &ProbeStep::residual)
        .def_readonly("identity_gap", &ProbeStep::identity_gap)
        .def_readonly("iterations", &ProbeStep::iterations);

    py::class_<ProbeResult>(mod, "ProbeResult")
        .def_readonly("d_estimate", &ProbeResult::d_estimate)
        .def_readonly("best_point", &ProbeResult::best_point)
        .def_readonly("steps", &ProbeResult::steps)
        .def("to_json", [](const ProbeResult& p) { return p.to_json().dump(2); });

    mod.def("residual_infimum_probe", &residual_infimum_probe, py::arg("m"), py::arg("x1"),
            py::arg("lambda_"), py::arg("eta"), py::arg("t_schedule"));

    py::class_<CurvePoint>(mod, "CurvePoint")
        .def_readonly("radius", &CurvePoint::radius)
        .def_readonly("statistic", &CurvePoint::statistic)
        .def_readonly("samples", &CurvePoint::samples)
        .def_readonly("arg_norm", &CurvePoint::arg_norm)
        .def("__repr__", [](const CurvePoint& c) {
            return "CurvePoint(radius=" + std::to_string(c.radius) +
                   ", statistic=" + std::to_string(c.statistic) + ")";
        });

    mod.def("ratio_curve", &ratio_curve, py::arg("m"), py::arg("x1"), py::arg("radii"),
            py::arg("band_factor"), py::arg("samples"), py::arg("seed"));
    mod.def("gap_curve", &gap_curve, py::arg("m"), py::arg("x0"), py::arg("radii"),
            py::arg("band_factor"), py::arg("samples"), py::arg("seed"));
    mod.def("curve_to_csv", &curve_to_csv, py::arg("curve"));
    mod.def("universal_bases", &universal_bases, py::arg("m"), py::arg("count"),
            py::arg("seed"));

    py::class_<Ball>(mod, "Ball")
        .def_readonly("center", &Ball::center)
        .def_readonly("radius", &Ball::radius)
        .def("contains", &Ball::contains, py::arg("y"))
        .def("to_json", [](const Ball& b) { return b.to_json().dump(); })
        .def("__repr__", [](const Ball& b) {
            return "Ball(center=" + b.center.to_compact_string() +
                   ", radius=" + std::to_string(b.radius) + ")";
        });

    py::class_<TraceStep>(mod, "TraceStep")
        .def_readonly("k", &TraceStep::k)
        .def_readonly("residual", &TraceStep::residual)
        .def_readonly("step", &TraceStep::step);

    py::class_<SolverTrace>(mod, "SolverTrace")
        .def_readonly("method", &SolverTrace::method)
        .def_readonly("steps", &SolverTrace::steps)
        .def_readonly("converged", &SolverTrace::converged)
        .def("iterations", &SolverTrace::iterations)
        .def("to_csv", &SolverTrace::to_csv);

    mod.def("invariant_ball", &invariant_ball, py::arg("m"), py::arg("x0"), py::arg("eta"));
    mod.def("verify_invariance", &verify_invariance, py::arg("m"), py::arg("ball"),
            py::arg("samples"), py::arg("seed"));

    py::class_<ResolventResult>(mod, "ResolventResult")
        .def_readonly("point", &ResolventResult::point)
        .def_readonly("trace", &ResolventResult::trace)
        .def_readonly("equation_residual", &ResolventResult::equation_residual);

    mod.def("resolvent", &resolvent, py::arg("m"), py::arg("x1"), py::arg("t"), py::arg("tol"),
            py::arg("max_iter"), py::arg("start") = std::nullopt);

    py::class_<Certificate>(mod, "Certificate")
        .def_readonly("x0", &Certificate::x0)
        .def_readonly("eta", &Certificate::eta);

    py::class_<FixedPointResult>(mod, "FixedPointResult")
        .def_readonly("point", &FixedPointResult::point)
        .def_readonly("residual", &FixedPointResult::residual)
        .def_readonly("trace", &FixedPointResult::trace)
        .def_readonly("converged", &FixedPointResult::converged)
        .def_readonly("certificate", &FixedPointResult::certificate)
        .def("to_json", [](const FixedPointResult& r) { return r.to_json().dump(2); })
        .def("__repr__", [](const FixedPointResult& r) {
            return std::string("FixedPointResult(converged=") +
                   (r.converged ? "True" : "False") + ")";
        });

    mod.def(
        "find_fixed_point",
        [](const Mapping& m, const Point& start, const std::string& method, double tol,
           int max_iter, double alpha, const std::optional<std::vector<double>>& ts,
           const std::optional<IterateObserver>& observer) {
            return find_fixed_point(m, start, method_from_args(method, alpha, ts), tol,
                                    max_iter, observer ? *observer : IterateObserver{});
        },
        py::arg("m"), py::arg("start"), py::arg("method") = "picard", py::arg("tol") = 1e-9,
        py::arg("max_iter") = 200000, py::arg("alpha") = 0.5, py::arg("ts") = std::nullopt,
        py::arg("observer") = std::nullopt);

    mod.def("default_resolvent_schedule", &default_resolvent_schedule);
    mod.def("certify_c6_from_fixed_point", &certify_c6_from_fixed_point, py::arg("m"),
            py::arg("p"), py::arg("samples"), py::arg("seed"), py::arg("tol") = 1e-6);
}
