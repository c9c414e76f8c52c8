#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "monoscore/embedtrain.hpp"
#include "monoscore/phrasetable.hpp"
#include "monoscore/scoring.hpp"
#include "monoscore/synth.hpp"
#include "monoscore/vecspace.hpp"
#include "monoscore/xmap.hpp"

namespace py = pybind11;
using namespace mono;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Monolingual phrase-table rescoring core";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

    py::class_<VectorSpace>(m, "VectorSpace")
        .def(py::init<int>(), py::arg("dim"))
        .def_property_readonly("dim", &VectorSpace::dim)
        .def("__len__", &VectorSpace::size)
        .def("insert", &VectorSpace::insert)
        .def("__contains__", &VectorSpace::contains)
        .def("lookup", [](const VectorSpace& s, const std::string& token) -> py::object {
            const Vec* v = s.lookup(token);
            return v ? py::cast(*v) : py::none();
        })
        .def("tokens", [](const VectorSpace& s) {
            std::vector<std::string> tokens;
            for (const auto& [t, _] : s.entries()) tokens.push_back(t);
            return tokens;
        });

    m.def("load_vectors",
          [](const std::string& path, std::optional<int> expected_dim, bool case_fold) {
              auto loaded = load_vectors(path, expected_dim, case_fold);
              return py::make_tuple(std::move(loaded.space), loaded.duplicates);
          },
          py::arg("path"), py::arg("expected_dim") = py::none(), py::arg("case_fold") = false);
    m.def("save_vectors", &save_vectors);
    m.def("cosine", [](const Vec& a, const Vec& b) { return cosine(a, b); });
    m.def("average_phrase_vector",
          [](const VectorSpace& words, const std::vector<std::string>& phrase) -> py::object {
              auto v = PhraseVectorizer(words).vectorize(phrase);
              return v ? py::cast(*v) : py::none();
          });

    py::enum_<WordModelKind>(m, "WordModelKind")
        .value("SKIPGRAM", WordModelKind::Skipgram)
        .value("CBOW", WordModelKind::Cbow);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("dim", &TrainConfig::dim)
        .def_readwrite("window", &TrainConfig::window)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("negative_samples", &TrainConfig::negative_samples)
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("min_count", &TrainConfig::min_count)
        .def_readwrite("model", &TrainConfig::model);

    m.def("train_word_vectors", &train_word_vectors, py::arg("corpus"), py::arg("config"));

    py::class_<TrainingReport>(m, "TrainingReport")
        .def_readonly("pairs_used", &TrainingReport::pairs_used)
        .def_readonly("pairs_dropped", &TrainingReport::pairs_dropped)
        .def_readonly("final_loss", &TrainingReport::final_loss)
        .def_readonly("solver", &TrainingReport::solver);

    py::class_<ProjectionMatrix>(m, "ProjectionMatrix")
        .def_property_readonly("d_src", &ProjectionMatrix::d_src)
        .def_property_readonly("d_tgt", &ProjectionMatrix::d_tgt)
        .def_readonly("report", &ProjectionMatrix::report);

    m.def("train_projection_closed_form",
          [](const std::vector<std::pair<std::string, std::string>>& pairs,
             const VectorSpace& src, const VectorSpace& tgt, double ridge) {
              SeedPairs seeds{pairs, "dictionary"};
              return train_projection_closed_form(seeds, PhraseVectorizer(src),
                                                  PhraseVectorizer(tgt), ridge);
          },
          py::arg("pairs"), py::arg("src"), py::arg("tgt"), py::arg("ridge") = 1e-3);
    m.def("train_projection_sgd",
          [](const std::vector<std::pair<std::string, std::string>>& pairs,
             const VectorSpace& src, const VectorSpace& tgt, int epochs, double learning_rate,
             std::uint64_t seed) {
              SeedPairs seeds{pairs, "dictionary"};
              return train_projection_sgd(seeds, PhraseVectorizer(src), PhraseVectorizer(tgt),
                                          SgdConfig{epochs, learning_rate, seed});
          },
          py::arg("pairs"), py::arg("src"), py::arg("tgt"), py::arg("epochs") = 100,
          py::arg("learning_rate") = 0.01, py::arg("seed") = 1);
    m.def("project", [](const ProjectionMatrix& pm, const Vec& x) { return project(pm, x); });
    m.def("induce_translations", &induce_translations, py::arg("matrix"), py::arg("src"),
          py::arg("tgt"), py::arg("token"), py::arg("k") = 5);
    m.def("save_matrix", &save_matrix);
    m.def("load_matrix", &load_matrix);

    py::class_<PhrasePair>(m, "PhrasePair")
        .def(py::init<>())
        .def_readwrite("src", &PhrasePair::src)
        .def_readwrite("tgt", &PhrasePair::tgt)
        .def_readwrite("scores", &PhrasePair::scores)
        .def_readwrite("alignment", &PhrasePair::alignment)
        .def_readwrite("raw_extras", &PhrasePair::raw_extras);

    m.def("parse_phrase_table_line",
          [](const std::string& line, int max_phrase_length) {
              return parse_phrase_table_line(line, ParseLimits{max_phrase_length});
          },
          py::arg("line"), py::arg("max_phrase_length") = 6);
    m.def("emit_phrase_table_line", &emit_phrase_table_line);
    m.def("parse_lexicon", [](const std::string& path) {
        std::vector<py::tuple> rows;
        for (const auto& e : parse_lexicon(path)) rows.push_back(py::make_tuple(e.f, e.e, e.p));
        return rows;
    });

    py::class_<SyntheticConfig>(m, "SyntheticConfig")
        .def(py::init<>())
        .def_readwrite("dim", &SyntheticConfig::dim)
        .def_readwrite("vocab", &SyntheticConfig::vocab)
        .def_readwrite("noise_sigma", &SyntheticConfig::noise_sigma)
        .def_readwrite("seed", &SyntheticConfig::seed)
        .def_readwrite("phrase_pairs", &SyntheticConfig::phrase_pairs)
        .def_readwrite("seed_sentences", &SyntheticConfig::seed_sentences)
        .def_readwrite("out_dir", &SyntheticConfig::out_dir);

    m.def("make_synthetic", [](const SyntheticConfig& cfg) {
        auto files = make_synthetic(cfg);
        py::dict d;
        d["src_vectors"] = files.src_vectors;
        d["tgt_vectors"] = files.tgt_vectors;
        d["gold_dict"] = files.gold_dict;
        d["seed_phrases"] = files.seed_phrases;
        d["phrase_table"] = files.phrase_table;
        d["lexicon"] = files.lexicon;
        return d;
    });
}
