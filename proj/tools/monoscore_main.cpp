#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <utility>

#include "monoscore/embedtrain.hpp"
#include "monoscore/phrasetable.hpp"
#include "monoscore/scoring.hpp"
#include "monoscore/synth.hpp"
#include "monoscore/vecspace.hpp"
#include "monoscore/xmap.hpp"

namespace {

using namespace mono;

// Exit codes are a stable scripting contract.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

void print_resolved_config(CLI::App* sub) {
    std::cout << "# resolved-config (rerun with --config on a file holding these lines)\n";
    std::cout << '[' << sub->get_name() << "]\n";
    std::istringstream ss(sub->config_to_str(true, false));
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) std::cout << line << '\n';
}

Corpus read_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus: " + path);
    Corpus corpus;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string t;
        while (ls >> t) tokens.push_back(t);
        if (!tokens.empty()) corpus.push_back(std::move(tokens));
    }
    return corpus;
}

void print_training_report(const ProjectionMatrix& m) {
    std::cout << "pairs_used=" << m.report.pairs_used << '\n'
              << "pairs_dropped=" << m.report.pairs_dropped << '\n'
              << "final_loss=" << fmt_sig6(m.report.final_loss) << '\n'
              << "solver=" << m.report.solver << '\n';
}

struct TrainEmbeddingsArgs {
    std::string corpus, output, model_out;
    TrainConfig cfg;
    std::string model = "skipgram";
};

struct TrainProjectionArgs {
    std::string seeds, src_vectors, tgt_vectors, output;
    std::string solver = "closed";
    std::string direction = "direct";
    std::string level = "word";
    double ridge = 1e-3;
    SgdConfig sgd;
};

struct BuildWordsimArgs {
    std::string lexicon, matrix, src_vectors, tgt_vectors, output;
    std::string direction = "direct";
    double cosine_floor = 1e-4;
};

struct RescoreArgs {
    std::string table, output, lexicon;
    std::string m_word_direct, m_word_inverse, m_phrase_direct, m_phrase_inverse;
    std::string src_vectors, tgt_vectors;
    std::string pv_src_model, pv_tgt_model;
    std::string mode = "append";
    std::vector<std::string> features;
    std::string oov_policy = "floor";
    double cosine_floor = 1e-4;
    double null_constant = 1e-3;
    int max_phrase_length = 6;
    std::size_t error_cap = 100;
    bool report_kv = false;
};

struct InduceDictArgs {
    std::string matrix, src_vectors, tgt_vectors, queries, eval_gold, output;
    std::size_t k = 5;
};

int run_train_embeddings(const TrainEmbeddingsArgs& a, CLI::App* sub) {
    TrainConfig cfg = a.cfg;
    if (a.model == "cbow")
        cfg.model = WordModelKind::Cbow;
    else if (a.model == "skipgram")
        cfg.model = WordModelKind::Skipgram;
    else
        throw UsageError("unknown model '" + a.model + "' (skipgram|cbow)");

    WordModel model = train_word_model(read_corpus(a.corpus), cfg);
    save_vectors(to_vector_space(model), a.output);
    if (!a.model_out.empty()) save_word_model(model, a.model_out);

    std::cout << "vocab=" << model.vocab.size() << '\n'
              << "first_epoch_loss=" << fmt_sig6(model.epoch_losses.front()) << '\n'
              << "final_epoch_loss=" << fmt_sig6(model.epoch_losses.back()) << '\n';
    print_resolved_config(sub);
    return kExitOk;
}

int run_train_projection(const TrainProjectionArgs& a, CLI::App* sub) {
    VectorSpace src = load_vectors(a.src_vectors).space;
    VectorSpace tgt = load_vectors(a.tgt_vectors).space;
    SeedPairs pairs = load_seed_pairs(a.seeds);

    Direction direction;
    if (a.direction == "direct") {
        direction = Direction::SrcToTgt;
    } else if (a.direction == "inverse") {
        direction = Direction::TgtToSrc;
        // Inverse matrices map the target space back onto the source one:
        // swap the pair sides and the spaces.
        for (auto& pr : pairs.pairs) std::swap(pr.first, pr.second);
        std::swap(src, tgt);
    } else {
        throw UsageError("unknown direction '" + a.direction + "' (direct|inverse)");
    }
    Level level = a.level == "phrase" ? Level::Phrase
                  : a.level == "word" ? Level::Word
                                      : throw UsageError("unknown level '" + a.level + "'");

    PhraseVectorizer vz_src(src), vz_tgt(tgt);
    ProjectionMatrix m;
    if (a.solver == "closed")
        m = train_projection_closed_form(pairs, vz_src, vz_tgt, a.ridge, direction, level);
    else if (a.solver == "sgd")
        m = train_projection_sgd(pairs, vz_src, vz_tgt, a.sgd, direction, level);
    else
        throw UsageError("unknown solver '" + a.solver + "' (closed|sgd)");

    save_matrix(m, a.output);
    print_training_report(m);
    print_resolved_config(sub);
    return kExitOk;
}

int run_build_wordsim(const BuildWordsimArgs& a, CLI::App* sub) {
    VectorSpace src = load_vectors(a.src_vectors).space;
    VectorSpace tgt = load_vectors(a.tgt_vectors).space;
    ProjectionMatrix m = load_matrix(a.matrix);
    auto lexicon = parse_lexicon(a.lexicon);

    ScoreConfig cfg;
    cfg.cosine_floor = a.cosine_floor;
    Orientation orientation =
        a.direction == "inverse" ? Orientation::Inverse : Orientation::Direct;
    WordSimTable table = build_wordsim_table(lexicon, m, src, tgt, cfg, orientation);

    std::ofstream out(a.output);
    if (!out) throw DataError("cannot write " + a.output);
    for (const auto& [key, score] : table.scores)
        out << key.first << ' ' << key.second << ' ' << fmt_sig6(score) << '\n';
    std::cout << "pairs_scored=" << table.scores.size() << '\n';
    print_resolved_config(sub);
    return kExitOk;
}

ScoreConfig rescore_config(const RescoreArgs& a) {
    ScoreConfig cfg;
    cfg.cosine_floor = a.cosine_floor;
    cfg.null_align_constant = a.null_constant;
    if (a.mode == "replace")
        cfg.mode = RescoreMode::Replace;
    else if (a.mode == "append")
        cfg.mode = RescoreMode::Append;
    else
        throw UsageError("unknown mode '" + a.mode + "' (replace|append)");
    if (a.oov_policy == "drop")
        cfg.oov_policy = OovPolicy::DropPair;
    else if (a.oov_policy != "floor")
        throw UsageError("unknown oov policy '" + a.oov_policy + "' (floor|drop)");
    if (!a.features.empty()) {
        cfg.enabled.fill(false);
        for (const auto& name : a.features) {
            auto f = feature_from_name(name);
            if (!f) throw UsageError("unknown feature '" + name + "'");
            cfg.enabled[*f] = true;
        }
    }
    return cfg;
}

int run_rescore(const RescoreArgs& a, CLI::App* sub) {
    ScoreConfig cfg = rescore_config(a);

    VectorSpace src = load_vectors(a.src_vectors).space;
    VectorSpace tgt = load_vectors(a.tgt_vectors).space;
    ProjectionMatrix word_direct = load_matrix(a.m_word_direct);
    ProjectionMatrix word_inverse = load_matrix(a.m_word_inverse);
    ProjectionMatrix phrase_direct = load_matrix(a.m_phrase_direct);
    ProjectionMatrix phrase_inverse = load_matrix(a.m_phrase_inverse);
    auto lexicon = parse_lexicon(a.lexicon);

    // Paragraph-vector phrase vectorization when models are supplied,
    // average-of-word-vectors otherwise.
    std::optional<PVModel> pv_src, pv_tgt;
    if (!a.pv_src_model.empty()) pv_src.emplace(PVModel{load_word_model(a.pv_src_model), {}});
    if (!a.pv_tgt_model.empty()) pv_tgt.emplace(PVModel{load_word_model(a.pv_tgt_model), {}});
    PhraseVectorizer vz_src = pv_src ? PhraseVectorizer(src, *pv_src) : PhraseVectorizer(src);
    PhraseVectorizer vz_tgt = pv_tgt ? PhraseVectorizer(tgt, *pv_tgt) : PhraseVectorizer(tgt);

    WordSimTable sim_direct =
        build_wordsim_table(lexicon, word_direct, src, tgt, cfg, Orientation::Direct);
    WordSimTable sim_inverse =
        build_wordsim_table(lexicon, word_inverse, src, tgt, cfg, Orientation::Inverse);

    ScoringModels models{&phrase_direct, &phrase_inverse, &sim_direct, &sim_inverse,
                         &vz_src, &vz_tgt};
    ParseLimits limits{a.max_phrase_length};
    RescoreReport report = rescore_table(a.table, a.output, models, cfg, a.error_cap, limits);

    std::cout << "rescored " << report.pairs_out << " of " << report.pairs_in << " pairs ("
              << report.dropped << " dropped, " << report.parse_errors << " parse errors) in "
              << fmt_sig6(report.wall_seconds) << "s\n";
    if (a.report_kv) {
        std::cout << "pairs_in=" << report.pairs_in << '\n'
                  << "pairs_out=" << report.pairs_out << '\n'
                  << "dropped=" << report.dropped << '\n'
                  << "parse_errors=" << report.parse_errors << '\n';
        for (int f = 0; f < kFeatureCount; ++f)
            std::cout << "floor_hits_" << feature_name(f) << '=' << report.floor_hits[f] << '\n';
        std::cout << "wall_seconds=" << fmt_sig6(report.wall_seconds) << '\n';
    }
    print_resolved_config(sub);
    return kExitOk;
}

int run_induce_dict(const InduceDictArgs& a, CLI::App* sub) {
    VectorSpace src = load_vectors(a.src_vectors).space;
    VectorSpace tgt = load_vectors(a.tgt_vectors).space;
    ProjectionMatrix m = load_matrix(a.matrix);

    std::ifstream qin(a.queries);
    if (!qin) throw DataError("cannot open query list: " + a.queries);
    std::vector<std::string> queries;
    std::string line;
    while (std::getline(qin, line))
        if (!line.empty()) queries.push_back(line);
    if (queries.empty()) throw DataError(a.queries + ": no queries");

    std::map<std::string, std::string> gold;
    if (!a.eval_gold.empty())
        for (const auto& [s, t] : load_seed_pairs(a.eval_gold).pairs) gold.emplace(s, t);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!a.output.empty()) {
        file.open(a.output);
        if (!file) throw DataError("cannot write " + a.output);
        out = &file;
    }

    std::size_t failed = 0, eval_total = 0, eval_correct = 0;
    for (const auto& q : queries) {
        try {
            auto ranked = induce_translations(m, src, tgt, q, a.k);
            for (std::size_t r = 0; r < ranked.size(); ++r)
                *out << q << '\t' << (r + 1) << '\t' << ranked[r].first << '\t'
                     << fmt_sig6(ranked[r].second) << '\n';
            auto g = gold.find(q);
            if (g != gold.end()) {
                ++eval_total;
                if (!ranked.empty() && ranked.front().first == g->second) ++eval_correct;
            }
        } catch (const DataError& e) {
            ++failed;
            std::cerr << "query '" << q << "': " << e.what() << '\n';
        }
    }
    if (eval_total)
        std::cout << "precision_at_1=" << fmt_sig6(static_cast<double>(eval_correct) / eval_total)
                  << " (" << eval_correct << "/" << eval_total << ")\n";
    print_resolved_config(sub);
    return failed == queries.size() ? kExitData : kExitOk;
}

void add_common_seed(CLI::App* sub, std::uint64_t& seed) {
    sub->add_option("--seed", seed, "RNG seed; all randomness flows from it");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monolingual phrase-table rescoring toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a config file (section per subcommand)");
    app.option_defaults()->always_capture_default();

    TrainEmbeddingsArgs te;
    auto* s_te = app.add_subcommand("train-embeddings", "Train word embeddings on a corpus");
    s_te->fallthrough();
    s_te->add_option("--corpus", te.corpus, "Corpus: one sentence per line")->required();
    s_te->add_option("--output", te.output, "Output vector file")->required();
    s_te->add_option("--model-out", te.model_out, "Also save the full model (for PV inference)");
    s_te->add_option("--dim", te.cfg.dim, "Vector dimension");
    s_te->add_option("--window", te.cfg.window, "Context half-width");
    s_te->add_option("--epochs", te.cfg.epochs, "Training epochs");
    s_te->add_option("--negative", te.cfg.negative_samples, "Negative samples per example");
    s_te->add_option("--lr", te.cfg.learning_rate, "Initial learning rate");
    s_te->add_option("--min-count", te.cfg.min_count, "Minimum token frequency");
    s_te->add_option("--model", te.model, "skipgram|cbow");
    add_common_seed(s_te, te.cfg.seed);

    TrainProjectionArgs tp;
    auto* s_tp = app.add_subcommand("train-projection", "Fit a projection matrix from seed pairs");
    s_tp->fallthrough();
    s_tp->add_option("--seeds", tp.seeds, "Seed pairs, source<TAB>target")->required();
    s_tp->add_option("--src-vectors", tp.src_vectors, "Source-language vector file")->required();
    s_tp->add_option("--tgt-vectors", tp.tgt_vectors, "Target-language vector file")->required();
    s_tp->add_option("--output", tp.output, "Output matrix file")->required();
    s_tp->add_option("--solver", tp.solver, "closed|sgd");
    s_tp->add_option("--ridge", tp.ridge, "Ridge strength for the closed-form solver");
    s_tp->add_option("--sgd-epochs", tp.sgd.epochs, "SGD epochs");
    s_tp->add_option("--sgd-lr", tp.sgd.learning_rate, "SGD learning rate");
    s_tp->add_option("--direction", tp.direction, "direct|inverse");
    s_tp->add_option("--level", tp.level, "word|phrase");
    add_common_seed(s_tp, tp.sgd.seed);

    BuildWordsimArgs bw;
    auto* s_bw = app.add_subcommand("build-wordsim", "Score every lexicon word pair");
    s_bw->fallthrough();
    s_bw->add_option("--lexicon", bw.lexicon, "Lexical table, 'f e p' lines")->required();
    s_bw->add_option("--matrix", bw.matrix, "Projection matrix file")->required();
    s_bw->add_option("--src-vectors", bw.src_vectors)->required();
    s_bw->add_option("--tgt-vectors", bw.tgt_vectors)->required();
    s_bw->add_option("--output", bw.output, "Output 'f e score' file")->required();
    s_bw->add_option("--direction", bw.direction, "direct|inverse");
    s_bw->add_option("--cosine-floor", bw.cosine_floor, "Similarity lower clamp");

    RescoreArgs rs;
    auto* s_rs = app.add_subcommand("rescore", "Rewrite a phrase table with monolingual scores");
    s_rs->fallthrough();
    s_rs->add_option("--table", rs.table, "Input phrase table")->required();
    s_rs->add_option("--output", rs.output, "Output phrase table")->required();
    s_rs->add_option("--lexicon", rs.lexicon, "Lexical table")->required();
    s_rs->add_option("--matrix-word-direct", rs.m_word_direct)->required();
    s_rs->add_option("--matrix-word-inverse", rs.m_word_inverse)->required();
    s_rs->add_option("--matrix-phrase-direct", rs.m_phrase_direct)->required();
    s_rs->add_option("--matrix-phrase-inverse", rs.m_phrase_inverse)->required();
    s_rs->add_option("--src-vectors", rs.src_vectors)->required();
    s_rs->add_option("--tgt-vectors", rs.tgt_vectors)->required();
    s_rs->add_option("--pv-src-model", rs.pv_src_model, "Word model for source PV inference");
    s_rs->add_option("--pv-tgt-model", rs.pv_tgt_model, "Word model for target PV inference");
    s_rs->add_option("--mode", rs.mode, "replace|append");
    s_rs->add_option("--features", rs.features, "Replace-mode feature subset")->delimiter(',');
    s_rs->add_option("--oov-policy", rs.oov_policy, "floor|drop");
    s_rs->add_option("--cosine-floor", rs.cosine_floor);
    s_rs->add_option("--null-constant", rs.null_constant);
    s_rs->add_option("--max-phrase-length", rs.max_phrase_length);
    s_rs->add_option("--error-cap", rs.error_cap, "Tolerated malformed input lines");
    s_rs->add_flag("--report-kv", rs.report_kv, "Emit machine-readable key=value report");

    InduceDictArgs id;
    auto* s_id = app.add_subcommand("induce-dict", "Nearest-neighbor translation retrieval");
    s_id->fallthrough();
    s_id->add_option("--matrix", id.matrix)->required();
    s_id->add_option("--src-vectors", id.src_vectors)->required();
    s_id->add_option("--tgt-vectors", id.tgt_vectors)->required();
    s_id->add_option("--queries", id.queries, "One source token per line")->required();
    s_id->add_option("--k", id.k, "Candidates per query");
    s_id->add_option("--eval", id.eval_gold, "Gold dictionary for precision@1");
    s_id->add_option("--output", id.output, "Output TSV (default stdout)");

    SyntheticConfig sy;
    auto* s_sy = app.add_subcommand("make-synthetic", "Generate a seeded validation world");
    s_sy->fallthrough();
    s_sy->add_option("--out", sy.out_dir, "Output directory")->required();
    s_sy->add_option("--dim", sy.dim);
    s_sy->add_option("--vocab", sy.vocab);
    s_sy->add_option("--sigma", sy.noise_sigma, "Target-side noise");
    s_sy->add_option("--phrase-pairs", sy.phrase_pairs);
    s_sy->add_option("--seed-sentences", sy.seed_sentences);
    add_common_seed(s_sy, sy.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (s_te->parsed()) return run_train_embeddings(te, s_te);
        if (s_tp->parsed()) return run_train_projection(tp, s_tp);
        if (s_bw->parsed()) return run_build_wordsim(bw, s_bw);
        if (s_rs->parsed()) return run_rescore(rs, s_rs);
        if (s_id->parsed()) return run_induce_dict(id, s_id);
        if (s_sy->parsed()) {
            auto files = mono::make_synthetic(sy);
            std::cout << "src_vectors=" << files.src_vectors << '\n'
                      << "tgt_vectors=" << files.tgt_vectors << '\n'
                      << "gold_dict=" << files.gold_dict << '\n'
                      << "seed_phrases=" << files.seed_phrases << '\n'
                      << "phrase_table=" << files.phrase_table << '\n'
                      << "lexicon=" << files.lexicon << '\n';
            print_resolved_config(s_sy);
            return kExitOk;
        }
        return kExitUsage;
    } catch (const mono::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const mono::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
