#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "monoscore/phrasetable.hpp"
#include "monoscore/vecspace.hpp"
#include "monoscore/xmap.hpp"

namespace mono {

enum class Orientation { Direct, Inverse };
enum class RescoreMode { Replace, Append };
enum class OovPolicy { Floor, DropPair };

/// Fixed order of the monolingual features in output tables.
enum Feature : int {
    kMonoPhraseDirect = 0,
    kMonoLexDirect = 1,
    kMonoPhraseInverse = 2,
    kMonoLexInverse = 3,
};
inline constexpr int kFeatureCount = 4;
const char* feature_name(int f);
std::optional<int> feature_from_name(const std::string& name);

struct ScoreConfig {
    double cosine_floor = 1e-4;        // in (0, 1)
    double null_align_constant = 1e-3; // in (0, 1]
    RescoreMode mode = RescoreMode::Append;
    std::array<bool, kFeatureCount> enabled{true, true, true, true};  // replace-mode subset
    OovPolicy oov_policy = OovPolicy::Floor;
};

/// Word-pair cosine scores precomputed over a lexicon. Keys are
/// (source word, target word) for both orientations; the orientation
/// records which projection matrix produced the scores.
struct WordSimTable {
    Orientation direction = Orientation::Direct;
    std::map<std::pair<std::string, std::string>, double> scores;  // in [floor, 1]
};

/// Projected cosine between one word pair, clamped from below by
/// cfg.cosine_floor. Direct orientation projects the source word with `m`
/// (a src->tgt matrix); Inverse projects the target word (m is tgt->src).
/// OOV on either side: cosine_floor under the floor policy, nullopt
/// (unscorable) under drop-pair.
std::optional<double> word_similarity(const std::string& f, const std::string& e,
                                      const ProjectionMatrix& m,
                                      const VectorSpace& src, const VectorSpace& tgt,
                                      const ScoreConfig& cfg,
                                      Orientation orientation = Orientation::Direct);

/// One score per distinct non-NULL (f, e) pair of the lexicon. NULL rows are
/// skipped: null alignment is handled by the constant, not by similarity.
WordSimTable build_wordsim_table(const std::vector<LexiconEntry>& lexicon,
                                 const ProjectionMatrix& m,
                                 const VectorSpace& src, const VectorSpace& tgt,
                                 const ScoreConfig& cfg,
                                 Orientation orientation);

/// Alignment-weighted product of word similarities. The Inverse orientation
/// enumerates source words, averaging the similarities of their linked
/// target words; Direct enumerates target words with the links transposed.
/// An unaligned word contributes cfg.null_align_constant. A word pair
/// missing from `sim` scores cosine_floor under the floor policy and makes
/// the pair unscorable (nullopt) under drop-pair.
std::optional<double> lexical_weight(const PhrasePair& p, const WordSimTable& sim,
                                     const ScoreConfig& cfg, Orientation orientation,
                                     std::size_t* floor_uses = nullptr);

/// Projected cosine between phrase vectors, clamped to [cosine_floor, 1].
/// Direct projects the source phrase with `m`; Inverse projects the target
/// phrase. A phrase that cannot be vectorized scores cosine_floor (floor
/// policy) or nullopt (drop-pair).
std::optional<double> phrase_similarity(const PhrasePair& p,
                                        const PhraseVectorizer& vz_src,
                                        const PhraseVectorizer& vz_tgt,
                                        const ProjectionMatrix& m,
                                        const ScoreConfig& cfg,
                                        Orientation orientation = Orientation::Direct);

/// Everything rescoring needs, owned elsewhere.
struct ScoringModels {
    const ProjectionMatrix* phrase_direct = nullptr;   // src -> tgt, phrase level
    const ProjectionMatrix* phrase_inverse = nullptr;  // tgt -> src, phrase level
    const WordSimTable* sim_direct = nullptr;
    const WordSimTable* sim_inverse = nullptr;
    const PhraseVectorizer* vz_src = nullptr;
    const PhraseVectorizer* vz_tgt = nullptr;
};

/// Rewrites the pair's scores. Replace mode: the enabled subset of the four
/// monolingual features, in fixed order. Append mode: original scores
/// followed by all four. Returns nullopt when the pair is unscorable under
/// the drop policy. floor_hits, when given, counts floor clamps per feature.
std::optional<PhrasePair> rescore_pair(const PhrasePair& p, const ScoringModels& models,
                                       const ScoreConfig& cfg,
                                       std::array<std::size_t, kFeatureCount>* floor_hits = nullptr);

struct RescoreReport {
    std::size_t pairs_in = 0;
    std::size_t pairs_out = 0;
    std::size_t dropped = 0;
    std::size_t parse_errors = 0;
    std::array<std::size_t, kFeatureCount> floor_hits{};
    double wall_seconds = 0.0;
};

/// Streaming, order-preserving table rewrite; memory is constant in the
/// table size. pairs_in = pairs_out + dropped.
RescoreReport rescore_table(const std::string& input_path, const std::string& output_path,
                            const ScoringModels& models, const ScoreConfig& cfg,
                            std::size_t error_cap = 100, const ParseLimits& limits = {});

}  // namespace mono
