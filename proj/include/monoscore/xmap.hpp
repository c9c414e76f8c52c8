#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "monoscore/vecspace.hpp"

namespace mono {

enum class Direction { SrcToTgt, TgtToSrc };
enum class Level { Word, Phrase };

std::string to_string(Direction d);
std::string to_string(Level l);

struct TrainingReport {
    std::size_t pairs_used = 0;
    std::size_t pairs_dropped = 0;  // unresolvable seed pairs
    double final_loss = 0.0;        // sum of squared residuals over used pairs
    std::string solver;             // "closed-form(ridge=...)" or "sgd(...)"
};

/// Linear map from a source embedding space into a target one.
/// Stored as d_src x d_tgt; projecting x computes w^T x.
struct ProjectionMatrix {
    Eigen::MatrixXd w;
    Direction direction = Direction::SrcToTgt;
    Level level = Level::Word;
    TrainingReport report;

    int d_src() const { return static_cast<int>(w.rows()); }
    int d_tgt() const { return static_cast<int>(w.cols()); }
};

struct SeedPairs {
    std::vector<std::pair<std::string, std::string>> pairs;  // (source, target), deduped
    std::string provenance;  // "dictionary" or "parallel-short-sentences"
};

/// One pair per line, source<TAB>target; sides may be multi-token phrases.
/// Duplicate pairs collapse to one.
SeedPairs load_seed_pairs(const std::string& path);

/// Exact ridge least-squares solve of the seed regression. Pairs whose
/// either side cannot be vectorized are dropped and counted. Throws
/// DataError on singular normal equations (ridge 0, deficient data) or
/// when no pair resolves.
ProjectionMatrix train_projection_closed_form(const SeedPairs& pairs,
                                              const PhraseVectorizer& src,
                                              const PhraseVectorizer& tgt,
                                              double ridge,
                                              Direction direction = Direction::SrcToTgt,
                                              Level level = Level::Word);

struct SgdConfig {
    int epochs = 100;
    double learning_rate = 0.01;  // decayed linearly to lr/100
    std::uint64_t seed = 1;
};

/// Per-pair stochastic gradient descent on the same squared loss,
/// zero-matrix initialization, deterministic under the seed.
ProjectionMatrix train_projection_sgd(const SeedPairs& pairs,
                                      const PhraseVectorizer& src,
                                      const PhraseVectorizer& tgt,
                                      const SgdConfig& cfg,
                                      Direction direction = Direction::SrcToTgt,
                                      Level level = Level::Word);

/// w^T x. Throws DataError on dimension mismatch.
Vec project(const ProjectionMatrix& m, std::span<const double> x);

/// Top-k target tokens by cosine against the projected source vector,
/// descending, ties broken lexicographically. k is clamped to the target
/// vocabulary size. Throws DataError when `token` is not in `src`.
std::vector<std::pair<std::string, double>> induce_translations(
    const ProjectionMatrix& m, const VectorSpace& src, const VectorSpace& tgt,
    const std::string& token, std::size_t k);

/// Text persistence: "<d_src> <d_tgt> <direction> <level>" then d_src rows
/// of d_tgt numbers.
void save_matrix(const ProjectionMatrix& m, const std::string& path);
ProjectionMatrix load_matrix(const std::string& path);

}  // namespace mono
