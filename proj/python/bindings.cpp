#include <pybind11/chrono.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "minabro/baseline.hpp"
#include "minabro/calibration.hpp"
#include "minabro/explain.hpp"
#include "minabro/greedy.hpp"
#include "minabro/model_io.hpp"
#include "minabro/oracle.hpp"
#include "minabro/rejection.hpp"

namespace py = pybind11;
using namespace minabro;

namespace {

std::vector<FeatureDomain> to_domains(const std::vector<std::pair<double, double>>& bounds) {
    std::vector<FeatureDomain> out;
    out.reserve(bounds.size());
    for (auto [lo, hi] : bounds) out.push_back({lo, hi});
    return out;
}

std::string repr(const Explanation& e) {
    std::string s = "Explanation(kind=" + std::string(to_string(e.kind)) + ", indices=[";
    for (std::size_t i = 0; i < e.indices.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(e.indices[i]);
    }
    return s + "], certified_minimum=" + (e.certified_minimum ? "True" : "False") + ")";
}

}  // namespace

PYBIND11_MODULE(_minabro, m) {
    m.doc() = "Minimum-size abductive explanations for linear classifiers with a reject option";
    m.attr("DEFAULT_EPSILON") = kDefaultEpsilon;

    py::enum_<Label>(m, "Label")
        .value("NEGATIVE", Label::Negative)
        .value("REJECT", Label::Reject)
        .value("POSITIVE", Label::Positive);

    py::enum_<ExplanationKind>(m, "ExplanationKind")
        .value("POSITIVE", ExplanationKind::Positive)
        .value("NEGATIVE", ExplanationKind::Negative)
        .value("REJECTION", ExplanationKind::Rejection);

    py::class_<LinearModel>(m, "LinearModel")
        .def(py::init([](std::vector<double> w, double b, const std::vector<std::pair<double, double>>& domains) {
                 return LinearModel(std::move(w), b, to_domains(domains));
             }),
             py::arg("weights"), py::arg("bias"), py::arg("domains"))
        .def_property_readonly("num_features", &LinearModel::num_features)
        .def_property_readonly("weights",
                               [](const LinearModel& lm) {
                                   auto w = lm.weights();
                                   return std::vector<double>(w.begin(), w.end());
                               })
        .def_property_readonly("bias", &LinearModel::bias)
        .def_property_readonly("domains", [](const LinearModel& lm) {
            std::vector<std::pair<double, double>> out;
            for (const auto& d : lm.domains()) out.emplace_back(d.lower, d.upper);
            return out;
        });

    py::class_<Instance>(m, "Instance")
        .def(py::init<const LinearModel&, std::vector<double>>(), py::arg("model"), py::arg("values"))
        .def_property_readonly("values", [](const Instance& x) {
            auto v = x.values();
            return std::vector<double>(v.begin(), v.end());
        });

    py::class_<RejectClassifier>(m, "RejectClassifier")
        .def(py::init<LinearModel, double, double, double>(), py::arg("model"), py::arg("t_minus"),
             py::arg("t_plus"), py::arg("epsilon") = kDefaultEpsilon)
        .def_property_readonly("model", &RejectClassifier::model, py::return_value_policy::reference_internal)
        .def_property_readonly("t_minus", &RejectClassifier::t_minus)
        .def_property_readonly("t_plus", &RejectClassifier::t_plus)
        .def_property_readonly("epsilon", &RejectClassifier::epsilon)
        .def_property_readonly("num_features", &RejectClassifier::num_features);

    py::class_<Prediction>(m, "Prediction")
        .def_readonly("label", &Prediction::label)
        .def_readonly("score", &Prediction::score);

    py::class_<Explanation>(m, "Explanation")
        .def_readonly("indices", &Explanation::indices)
        .def_readonly("kind", &Explanation::kind)
        .def_readonly("certified_minimum", &Explanation::certified_minimum)
        .def("__len__", &Explanation::size)
        .def("__repr__", &repr);

    py::class_<SolverLimits>(m, "SolverLimits")
        .def(py::init<>())
        .def_readwrite("node_limit", &SolverLimits::node_limit)
        .def_readwrite("time_limit", &SolverLimits::time_limit);

    py::class_<IlpSolution>(m, "IlpSolution")
        .def_readonly("selected", &IlpSolution::selected)
        .def_readonly("objective", &IlpSolution::objective)
        .def_readonly("optimal", &IlpSolution::optimal)
        .def_readonly("nodes_explored", &IlpSolution::nodes_explored);

    py::class_<ExplainOutcome>(m, "ExplainOutcome")
        .def_readonly("prediction", &ExplainOutcome::prediction)
        .def_readonly("explanation", &ExplainOutcome::explanation)
        .def_readonly("nodes", &ExplainOutcome::nodes);

    py::class_<RiskReport>(m, "RiskReport")
        .def_readonly("error_ratio", &RiskReport::error_ratio)
        .def_readonly("rejection_ratio", &RiskReport::rejection_ratio)
        .def_readonly("empirical_risk", &RiskReport::empirical_risk)
        .def_readonly("t_minus", &RiskReport::t_minus)
        .def_readonly("t_plus", &RiskReport::t_plus);

    m.def("score", &score, py::arg("model"), py::arg("instance"));
    m.def("predict", &predict, py::arg("classifier"), py::arg("instance"));
    m.def("explain", &explain, py::arg("classifier"), py::arg("instance"), py::arg("limits") = SolverLimits{},
          "Minimum-size explanation of the prediction: greedy when accepted, branch-and-bound when rejected.");
    m.def("explain_positive", [](const RejectClassifier& c, const Instance& x) {
        return explain_positive(c, x).explanation;
    });
    m.def("explain_negative", [](const RejectClassifier& c, const Instance& x) {
        return explain_negative(c, x).explanation;
    });
    m.def(
        "explain_rejection",
        [](const RejectClassifier& c, const Instance& x, const SolverLimits& limits) {
            auto r = explain_rejection(c, x, limits);
            return py::make_tuple(r.explanation, r.solution);
        },
        py::arg("classifier"), py::arg("instance"), py::arg("limits") = SolverLimits{});
    m.def("subset_minimal_explanation", &subset_minimal_explanation, py::arg("classifier"), py::arg("instance"));
    m.def("brute_force_minimum", &brute_force_minimum, py::arg("classifier"), py::arg("instance"));
    m.def(
        "is_valid_explanation",
        [](const RejectClassifier& c, const Instance& x, const std::vector<std::size_t>& fixed, ExplanationKind k) {
            return is_valid_explanation(c, x, fixed, k);
        },
        py::arg("classifier"), py::arg("instance"), py::arg("fixed"), py::arg("kind"));
    m.def(
        "sampled_sufficiency_check",
        [](const RejectClassifier& c, const Instance& x, const std::vector<std::size_t>& fixed, ExplanationKind k,
           std::size_t trials, std::uint64_t seed) { return sampled_sufficiency_check(c, x, fixed, k, trials, seed); },
        py::arg("classifier"), py::arg("instance"), py::arg("fixed"), py::arg("kind"), py::arg("trials") = 1000,
        py::arg("seed") = 0);
    m.def(
        "evaluate_risk",
        [](const std::vector<double>& s, const std::vector<int>& y, double t_minus, double t_plus, double wr) {
            return evaluate_risk(s, y, t_minus, t_plus, RiskConfig(wr));
        },
        py::arg("scores"), py::arg("labels"), py::arg("t_minus"), py::arg("t_plus"), py::arg("rejection_cost"));
    m.def(
        "calibrate_thresholds",
        [](const std::vector<double>& s, const std::vector<int>& y, double wr) {
            return calibrate_thresholds(s, y, RiskConfig(wr));
        },
        py::arg("scores"), py::arg("labels"), py::arg("rejection_cost"));
    m.def(
        "load_classifier",
        [](const std::string& path, double eps) { return load_model(path).classifier(eps); }, py::arg("path"),
        py::arg("epsilon") = kDefaultEpsilon);
}
