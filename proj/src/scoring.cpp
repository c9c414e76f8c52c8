#include "monoscore/scoring.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

namespace mono {

const char* feature_name(int f) {
    switch (f) {
        case kMonoPhraseDirect: return "mono-phrase-direct";
        case kMonoLexDirect: return "mono-lex-direct";
        case kMonoPhraseInverse: return "mono-phrase-inverse";
        case kMonoLexInverse: return "mono-lex-inverse";
    }
    return "?";
}

std::optional<int> feature_from_name(const std::string& name) {
    for (int f = 0; f < kFeatureCount; ++f)
        if (name == feature_name(f)) return f;
    return std::nullopt;
}

namespace {

void check_config(const ScoreConfig& cfg) {
    if (cfg.cosine_floor <= 0.0 || cfg.cosine_floor >= 1.0)
        throw UsageError("cosine_floor must lie in (0, 1)");
    if (cfg.null_align_constant <= 0.0 || cfg.null_align_constant > 1.0)
        throw UsageError("null_align_constant must lie in (0, 1]");
}

double clamp_floor(double cos, const ScoreConfig& cfg) {
    return std::max(cos, cfg.cosine_floor);
}

}  // namespace

std::optional<double> word_similarity(const std::string& f, const std::string& e,
                                      const ProjectionMatrix& m, const VectorSpace& src,
                                      const VectorSpace& tgt, const ScoreConfig& cfg,
                                      Orientation orientation) {
    check_config(cfg);
    const Vec* x = src.lookup(f);
    const Vec* z = tgt.lookup(e);
    if (!x || !z) {
        if (cfg.oov_policy == OovPolicy::DropPair) return std::nullopt;
        return cfg.cosine_floor;
    }
    double cos = orientation == Orientation::Direct ? cosine(project(m, *x), *z)
                                                    : cosine(project(m, *z), *x);
    return clamp_floor(cos, cfg);
}

WordSimTable build_wordsim_table(const std::vector<LexiconEntry>& lexicon,
                                 const ProjectionMatrix& m, const VectorSpace& src,
                                 const VectorSpace& tgt, const ScoreConfig& cfg,
                                 Orientation orientation) {
    if (lexicon.empty()) throw DataError("build_wordsim_table: empty lexicon");
    WordSimTable table;
    table.direction = orientation;
    for (const auto& entry : lexicon) {
        if (entry.f == kNullToken || entry.e == kNullToken) continue;
        auto key = std::make_pair(entry.f, entry.e);
        if (table.scores.count(key)) continue;
        auto s = word_similarity(entry.f, entry.e, m, src, tgt, cfg, orientation);
        // Drop policy: unscorable lexicon rows are simply absent from the
        // table; the lookup miss surfaces later in lexical_weight.
        if (s) table.scores.emplace(key, *s);
    }
    return table;
}

std::optional<double> lexical_weight(const PhrasePair& p, const WordSimTable& sim,
                                     const ScoreConfig& cfg, Orientation orientation,
                                     std::size_t* floor_uses) {
    check_config(cfg);
    const bool enumerate_source = orientation == Orientation::Inverse;
    const std::size_t positions = enumerate_source ? p.src.size() : p.tgt.size();

    for (const auto& [i, j] : p.alignment)
        if (i < 0 || i >= static_cast<int>(p.src.size()) || j < 0 ||
            j >= static_cast<int>(p.tgt.size()))
            throw DataError("lexical_weight: alignment index out of range");

    double product = 1.0;
    for (std::size_t pos = 0; pos < positions; ++pos) {
        double sum = 0.0;
        int links = 0;
        for (const auto& [i, j] : p.alignment) {
            std::size_t own = enumerate_source ? static_cast<std::size_t>(i)
                                               : static_cast<std::size_t>(j);
            if (own != pos) continue;
            const std::string& f = p.src[static_cast<std::size_t>(i)];
            const std::string& e = p.tgt[static_cast<std::size_t>(j)];
            auto it = sim.scores.find(std::make_pair(f, e));
            double s;
            if (it != sim.scores.end()) {
                s = it->second;
            } else if (cfg.oov_policy == OovPolicy::DropPair) {
                return std::nullopt;
            } else {
                s = cfg.cosine_floor;
                if (floor_uses) ++(*floor_uses);
            }
            sum += s;
            ++links;
        }
        product *= links > 0 ? sum / links : cfg.null_align_constant;
    }
    return product;
}

std::optional<double> phrase_similarity(const PhrasePair& p, const PhraseVectorizer& vz_src,
                                        const PhraseVectorizer& vz_tgt,
                                        const ProjectionMatrix& m, const ScoreConfig& cfg,
                                        Orientation orientation) {
    check_config(cfg);
    auto sv = vz_src.vectorize(p.src);
    auto tv = vz_tgt.vectorize(p.tgt);
    if (!sv || !tv) {
        if (cfg.oov_policy == OovPolicy::DropPair) return std::nullopt;
        return cfg.cosine_floor;
    }
    double cos = orientation == Orientation::Direct ? cosine(project(m, *sv), *tv)
                                                    : cosine(project(m, *tv), *sv);
    return clamp_floor(cos, cfg);
}

std::optional<PhrasePair> rescore_pair(const PhrasePair& p, const ScoringModels& models,
                                       const ScoreConfig& cfg,
                                       std::array<std::size_t, kFeatureCount>* floor_hits) {
    check_config(cfg);
    std::array<std::optional<double>, kFeatureCount> features;
    std::array<bool, kFeatureCount> needed = cfg.mode == RescoreMode::Append
                                                 ? std::array<bool, kFeatureCount>{true, true, true, true}
                                                 : cfg.enabled;

    if (needed[kMonoPhraseDirect])
        features[kMonoPhraseDirect] = phrase_similarity(p, *models.vz_src, *models.vz_tgt,
                                                        *models.phrase_direct, cfg,
                                                        Orientation::Direct);
    std::size_t lex_floor_direct = 0, lex_floor_inverse = 0;
    if (needed[kMonoLexDirect])
        features[kMonoLexDirect] = lexical_weight(p, *models.sim_direct, cfg, Orientation::Direct,
                                                  &lex_floor_direct);
    if (needed[kMonoPhraseInverse])
        features[kMonoPhraseInverse] = phrase_similarity(p, *models.vz_src, *models.vz_tgt,
                                                         *models.phrase_inverse, cfg,
                                                         Orientation::Inverse);
    if (needed[kMonoLexInverse])
        features[kMonoLexInverse] = lexical_weight(p, *models.sim_inverse, cfg, Orientation::Inverse,
                                                   &lex_floor_inverse);

    for (int f = 0; f < kFeatureCount; ++f)
        if (needed[f] && !features[f]) return std::nullopt;  // unscorable under drop policy

    if (floor_hits) {
        if (needed[kMonoPhraseDirect] && *features[kMonoPhraseDirect] <= cfg.cosine_floor)
            ++(*floor_hits)[kMonoPhraseDirect];
        if (needed[kMonoPhraseInverse] && *features[kMonoPhraseInverse] <= cfg.cosine_floor)
            ++(*floor_hits)[kMonoPhraseInverse];
        if (lex_floor_direct) ++(*floor_hits)[kMonoLexDirect];
        if (lex_floor_inverse) ++(*floor_hits)[kMonoLexInverse];
    }

    PhrasePair out = p;
    if (cfg.mode == RescoreMode::Replace) out.scores.clear();
    for (int f = 0; f < kFeatureCount; ++f)
        if (needed[f]) out.scores.push_back(*features[f]);
    return out;
}

RescoreReport rescore_table(const std::string& input_path, const std::string& output_path,
                            const ScoringModels& models, const ScoreConfig& cfg,
                            std::size_t error_cap, const ParseLimits& limits) {
    auto t0 = std::chrono::steady_clock::now();
    std::ofstream out(output_path);
    if (!out) throw DataError("cannot write output table: " + output_path);

    RescoreReport report;
    StreamSummary summary = stream_table(
        input_path,
        [&](PhrasePair&& p, std::size_t) {
            ++report.pairs_in;
            auto rescored = rescore_pair(p, models, cfg, &report.floor_hits);
            if (!rescored) {
                ++report.dropped;
                return;
            }
            out << emit_phrase_table_line(*rescored) << '\n';
            ++report.pairs_out;
        },
        error_cap, limits);

    if (!out) throw DataError("write failed: " + output_path);
    report.parse_errors = summary.errors.size();
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace mono
