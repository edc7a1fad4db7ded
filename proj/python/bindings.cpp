#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <string>
#include <vector>

#include "cframe/annotations.hpp"
#include "cframe/errors.hpp"
#include "cframe/evaluation.hpp"
#include "cframe/factor_graph.hpp"
#include "cframe/frame_model.hpp"
#include "cframe/types.hpp"
#include "cframe/version.hpp"

namespace py = pybind11;
using namespace cframe;

namespace {

using Labels = std::map<std::string, std::string>;  // aspect name -> polarity token

std::vector<Polarity> parse_all(const std::vector<std::string>& tokens) {
    std::vector<Polarity> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(parse_polarity(t));
    return out;
}

std::map<std::string, Distribution> as_dict(const MarginalSet& m) {
    std::map<std::string, Distribution> out;
    for (std::size_t i = 0; i < m.ids.size(); ++i) out[m.ids[i]] = m.marginals[i];
    return out;
}

AspectEvidence evidence_of(const Labels& labels) {
    std::map<AspectId, Polarity> parsed;
    for (const auto& [a, p] : labels) parsed[parse_aspect(a)] = parse_polarity(p);
    return evidence_from_labels(parsed);
}

py::dict frame_dict(const ConnotationFrame& f) {
    Labels labels;
    std::map<std::string, double> scores;
    for (const auto& [a, p] : f.labels) labels[std::string(aspect_name(a))] = std::string(to_string(p));
    for (const auto& [a, s] : f.scores) scores[std::string(aspect_name(a))] = s;
    py::dict d;
    d["verb"] = f.verb;
    d["labels"] = labels;
    d["scores"] = scores;
    return d;
}

}  // namespace

PYBIND11_MODULE(_cframe, m) {
    m.doc() = "Connotation frame lexicon induction: factor graphs, piecewise training, metrics.";
    m.attr("__version__") = std::string(kVersion);

    static py::exception<Error> error(m, "CframeError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    std::vector<std::string> aspects;
    for (AspectId a : kAspects) aspects.emplace_back(aspect_name(a));
    m.attr("ASPECTS") = aspects;

    m.def("polarity_from_score", [](double s) { return std::string(to_string(polarity_from_score(s))); },
          py::arg("mean_score"));

    py::class_<FactorGraph>(m, "FactorGraph")
        .def(py::init<>())
        .def("add_variable", &FactorGraph::add_variable, py::arg("id"))
        .def(
            "add_factor",
            [](FactorGraph& g, std::string id, const std::vector<std::string>& scope, std::vector<double> table) {
                return g.add_factor(std::move(id), scope, std::move(table));
            },
            py::arg("id"), py::arg("scope"), py::arg("log_potential"))
        .def_property_readonly("num_variables", &FactorGraph::num_variables)
        .def_property_readonly("num_factors", &FactorGraph::num_factors)
        .def("is_acyclic", &FactorGraph::is_acyclic);

    m.def("sum_product_tree", [](const FactorGraph& g) { return as_dict(sum_product_tree(g)); });
    m.def(
        "loopy_sum_product",
        [](const FactorGraph& g, int max_iters, double damping, double tol) {
            const auto r = loopy_sum_product(g, {max_iters, damping, tol});
            return py::make_tuple(as_dict(r), r.converged, r.iterations);
        },
        py::arg("graph"), py::arg("max_iters") = 100, py::arg("damping") = 0.1, py::arg("tol") = 1e-6);
    m.def("enumerate_marginals", [](const FactorGraph& g) { return as_dict(enumerate_marginals(g)); });

    py::class_<FrameWeights>(m, "FrameWeights")
        .def(py::init<>())
        .def_static("agreement", &agreement_weights, py::arg("interaction"), py::arg("evidence"))
        .def_static("load", &load_weights, py::arg("path"))
        .def("save", [](const FrameWeights& w, const std::filesystem::path& p) { save_weights(w, p); })
        .def("table", [](const FrameWeights& w, const std::string& name) {
            for (Interaction i : kInteractions)
                if (interaction_name(i) == name) {
                    auto t = w.table(i);
                    return std::vector<double>(t.begin(), t.end());
                }
            const auto& e = w.emb[index_of(parse_aspect(name))];
            return std::vector<double>(e.begin(), e.end());
        });

    m.def(
        "frame_graph",
        [](const Labels& preds, const FrameWeights& w) { return build_frame_graph(evidence_of(preds), w); },
        py::arg("aspect_preds"), py::arg("weights"));
    m.def(
        "decode_frame",
        [](const std::string& verb, const Labels& preds, const FrameWeights& w) {
            return frame_dict(decode_frame(verb, evidence_of(preds), w));
        },
        py::arg("verb"), py::arg("aspect_preds"), py::arg("weights"));

    m.def(
        "synthetic",
        [](const FrameWeights& w, std::size_t n, std::uint64_t seed, double noise) {
            py::list out;
            for (const auto& ex : generate_synthetic(w, n, seed, {noise, "syn"})) {
                Labels preds;
                for (AspectId a : kAspects)
                    preds[std::string(aspect_name(a))] = std::string(to_string(ex.evidence.labels[index_of(a)]));
                py::dict d = frame_dict(ex.gold);
                d["preds"] = preds;
                out.append(d);
            }
            return out;
        },
        py::arg("weights"), py::arg("n"), py::arg("seed"), py::arg("noise") = 0.2);

    m.def(
        "train_piecewise",
        [](const py::list& examples, double lr, int epochs, double l2, std::uint64_t seed) {
            std::vector<FrameExample> train;
            for (const auto& item : examples) {
                const auto d = item.cast<py::dict>();
                FrameExample ex;
                ex.gold.verb = d["verb"].cast<std::string>();
                for (const auto& [a, p] : d["labels"].cast<Labels>())
                    ex.gold.labels[parse_aspect(a)] = parse_polarity(p);
                ex.evidence = evidence_of(d["preds"].cast<Labels>());
                train.push_back(std::move(ex));
            }
            SgdConfig cfg;
            cfg.learning_rate = lr;
            cfg.epochs = epochs;
            cfg.l2 = l2;
            cfg.seed = seed;
            py::gil_scoped_release release;
            return train_piecewise(train, cfg);
        },
        py::arg("examples"), py::arg("lr") = 0.1, py::arg("epochs") = 50, py::arg("l2") = 0.01, py::arg("seed") = 1);

    m.def(
        "accuracy",
        [](const std::vector<std::string>& g, const std::vector<std::string>& p) {
            return accuracy(parse_all(g), parse_all(p));
        },
        py::arg("gold"), py::arg("pred"));
    m.def(
        "macro_f1",
        [](const std::vector<std::string>& g, const std::vector<std::string>& p) {
            return macro_f1(parse_all(g), parse_all(p));
        },
        py::arg("gold"), py::arg("pred"));
    m.def("krippendorff_alpha", &krippendorff_alpha_nominal, py::arg("units"),
          "Nominal alpha over coded units (lists of class indices).");
}
