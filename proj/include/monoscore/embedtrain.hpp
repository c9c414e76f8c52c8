#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "monoscore/vecspace.hpp"

namespace mono {

enum class WordModelKind { Skipgram, Cbow };

struct TrainConfig {
    int dim = 200;
    int window = 5;              // context half-width n
    int epochs = 30;
    int negative_samples = 5;
    double learning_rate = 0.025;
    std::uint64_t seed = 1;
    int min_count = 1;
    WordModelKind model = WordModelKind::Skipgram;
};

using Corpus = std::vector<std::vector<std::string>>;

/// Shallow word-embedding model: input (projection) vectors and
/// negative-sampling output vectors, one row per vocabulary entry.
struct WordModel {
    int dim = 0;
    std::vector<std::string> vocab;                 // id -> token
    std::unordered_map<std::string, int> index;     // token -> id
    std::vector<std::int64_t> counts;               // id -> corpus frequency
    Eigen::MatrixXd in;                             // vocab x dim
    Eigen::MatrixXd out;                            // vocab x dim
    std::vector<double> epoch_losses;               // per-epoch average loss

    int id_of(const std::string& token) const {
        auto it = index.find(token);
        return it == index.end() ? -1 : it->second;
    }
};

/// One prediction event with its negatives pinned, so the loss is a pure
/// function of the model parameters.
struct Example {
    std::vector<int> context;   // input-side word ids, averaged
    int target = -1;            // output-side word id (label 1)
    std::vector<int> negatives; // output-side word ids (label 0)
};

struct Gradients {
    Eigen::MatrixXd in;
    Eigen::MatrixXd out;
};

/// Summed negative-sampling loss over the minibatch; when `grad` is non-null
/// the dense gradients (same shapes as model.in / model.out) are written.
double loss_and_gradient(const WordModel& model, const std::vector<Example>& batch,
                         Gradients* grad);

WordModel train_word_model(const Corpus& corpus, const TrainConfig& cfg);

VectorSpace to_vector_space(const WordModel& model);

/// Convenience: train and expose the input vectors as a VectorSpace.
VectorSpace train_word_vectors(const Corpus& corpus, const TrainConfig& cfg);

void save_word_model(const WordModel& model, const std::string& path);
WordModel load_word_model(const std::string& path);

struct PVConfig {
    int steps = 50;
    double learning_rate = 0.05;   // decayed linearly over steps
    int negative_samples = 5;
    int window = 5;
    std::uint64_t seed = 1;
};

/// Frozen word model plus inference schedule. Inference fits only the
/// paragraph vector; the word parameters are never touched.
struct PVModel {
    WordModel words;
    PVConfig cfg;
};

/// Fits a paragraph vector to `text` by gradient steps against the frozen
/// word model. Deterministic under cfg.seed. Throws DataError when every
/// token is out of vocabulary.
Vec infer_paragraph(const PVModel& pv, const std::vector<std::string>& text);

}  // namespace mono
