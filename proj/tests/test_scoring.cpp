#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "monoscore/scoring.hpp"
#include "monoscore/synth.hpp"
#include "test_util.hpp"

using namespace mono;

namespace {

ProjectionMatrix identity_matrix(int dim) {
    ProjectionMatrix m;
    m.w = Eigen::MatrixXd::Identity(dim, dim);
    return m;
}

WordSimTable table_from(std::map<std::pair<std::string, std::string>, double> scores,
                        Orientation o = Orientation::Direct) {
    WordSimTable t;
    t.direction = o;
    t.scores = std::move(scores);
    return t;
}

PhrasePair pair_of(std::vector<std::string> src, std::vector<std::string> tgt,
                   std::vector<std::pair<int, int>> alignment = {}) {
    PhrasePair p;
    p.src = std::move(src);
    p.tgt = std::move(tgt);
    p.alignment = std::move(alignment);
    return p;
}

// Independent brute-force reading of the lexical-weighting product: for
// every enumerated word, average the similarities over its links, with a
// constant for unaligned words. Written against the formula, not the
// implementation.
double brute_force_lex(const PhrasePair& p,
                       const std::map<std::pair<std::string, std::string>, double>& sim,
                       double null_constant, double floor, bool enumerate_source) {
    std::size_t n = enumerate_source ? p.src.size() : p.tgt.size();
    double product = 1.0;
    for (std::size_t pos = 0; pos < n; ++pos) {
        std::vector<double> linked;
        for (auto [i, j] : p.alignment) {
            if ((enumerate_source ? static_cast<std::size_t>(i) : static_cast<std::size_t>(j)) != pos)
                continue;
            auto it = sim.find({p.src[i], p.tgt[j]});
            linked.push_back(it == sim.end() ? floor : it->second);
        }
        if (linked.empty()) {
            product *= null_constant;
        } else {
            double s = 0;
            for (double v : linked) s += v;
            product *= s / linked.size();
        }
    }
    return product;
}

}  // namespace

TEST_CASE("word_similarity: identity world") {
    VectorSpace space(3);
    space.insert("w", {1, 0, 0});
    space.insert("u", {0, 1, 0});
    auto m = identity_matrix(3);
    ScoreConfig cfg;

    CHECK(*word_similarity("w", "w", m, space, space, cfg) == doctest::Approx(1.0));
    // orthogonal vectors clamp up to the floor
    CHECK(*word_similarity("w", "u", m, space, space, cfg) == doctest::Approx(cfg.cosine_floor));
    // OOV under floor policy
    CHECK(*word_similarity("zz", "w", m, space, space, cfg) == doctest::Approx(cfg.cosine_floor));

    cfg.oov_policy = OovPolicy::DropPair;
    CHECK(!word_similarity("zz", "w", m, space, space, cfg).has_value());
}

TEST_CASE("word_similarity: true rotated pairs beat random pairs") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto world = make_rotated_world(16, 120, 0.02, seed);
        SeedPairs pairs{world.gold, "dictionary"};
        auto m = train_projection_closed_form(pairs, PhraseVectorizer(world.src),
                                              PhraseVectorizer(world.tgt), 0.0);
        ScoreConfig cfg;
        std::vector<double> random_scores;
        std::mt19937_64 rng(seed);
        for (int t = 0; t < 100; ++t) {
            const auto& [f, _] = world.gold[rng() % world.gold.size()];
            const auto& [__, e] = world.gold[rng() % world.gold.size()];
            random_scores.push_back(*word_similarity(f, e, m, world.src, world.tgt, cfg));
        }
        std::sort(random_scores.begin(), random_scores.end());
        double p95 = random_scores[94];
        for (int t = 0; t < 20; ++t) {
            const auto& [f, e] = world.gold[rng() % world.gold.size()];
            CHECK(*word_similarity(f, e, m, world.src, world.tgt, cfg) > p95);
        }
    }
}

TEST_CASE("build_wordsim_table: NULL rows skipped, values match pointwise calls") {
    auto world = make_rotated_world(8, 30, 0.01, 2);
    SeedPairs pairs{world.gold, "dictionary"};
    auto m = train_projection_closed_form(pairs, PhraseVectorizer(world.src),
                                          PhraseVectorizer(world.tgt), 0.0);
    ScoreConfig cfg;

    std::vector<LexiconEntry> lexicon;
    for (int i = 0; i < 10; ++i)
        lexicon.push_back({world.gold[i].first, world.gold[i].second, 0.5});
    lexicon.push_back({kNullToken, world.gold[0].second, 0.01});

    auto table = build_wordsim_table(lexicon, m, world.src, world.tgt, cfg, Orientation::Direct);
    CHECK(table.scores.size() == 10);
    for (const auto& [key, score] : table.scores) {
        auto pointwise = word_similarity(key.first, key.second, m, world.src, world.tgt, cfg);
        CHECK(score == doctest::Approx(*pointwise).epsilon(1e-12));
    }

    CHECK_THROWS_AS(build_wordsim_table({}, m, world.src, world.tgt, cfg, Orientation::Direct),
                    DataError);
}

TEST_CASE("lexical_weight: hand-evaluated cases") {
    ScoreConfig cfg;
    cfg.null_align_constant = 1e-3;

    // one source word aligned to one target word with sim 0.5
    auto p1 = pair_of({"f1"}, {"e1"}, {{0, 0}});
    auto t1 = table_from({{{"f1", "e1"}, 0.5}}, Orientation::Inverse);
    CHECK(*lexical_weight(p1, t1, cfg, Orientation::Inverse) == doctest::Approx(0.5));

    // f1 aligned to e1 (0.4) and e2 (0.6): mean 0.5
    auto p2 = pair_of({"f1"}, {"e1", "e2"}, {{0, 0}, {0, 1}});
    auto t2 = table_from({{{"f1", "e1"}, 0.4}, {{"f1", "e2"}, 0.6}}, Orientation::Inverse);
    CHECK(*lexical_weight(p2, t2, cfg, Orientation::Inverse) == doctest::Approx(0.5));

    // second source word unaligned: 0.5 * null constant
    auto p3 = pair_of({"f1", "f2"}, {"e1", "e2"}, {{0, 0}, {0, 1}});
    CHECK(*lexical_weight(p3, t2, cfg, Orientation::Inverse) ==
          doctest::Approx(0.5 * cfg.null_align_constant));

    // direct orientation enumerates target words with transposed links
    auto p4 = pair_of({"f1"}, {"e1", "e2"}, {{0, 0}});
    auto t4 = table_from({{{"f1", "e1"}, 0.8}});
    CHECK(*lexical_weight(p4, t4, cfg, Orientation::Direct) ==
          doctest::Approx(0.8 * cfg.null_align_constant));
}

TEST_CASE("lexical_weight: full alignment with unit sims is exactly 1") {
    ScoreConfig cfg;
    auto p = pair_of({"f1", "f2"}, {"e1", "e2"}, {{0, 0}, {1, 1}});
    auto t = table_from({{{"f1", "e1"}, 1.0}, {{"f2", "e2"}, 1.0}}, Orientation::Inverse);
    CHECK(*lexical_weight(p, t, cfg, Orientation::Inverse) == 1.0);
    CHECK(*lexical_weight(p, t, cfg, Orientation::Direct) == 1.0);
}

TEST_CASE("lexical_weight: invariant under permutation of alignment links") {
    ScoreConfig cfg;
    auto t = table_from({{{"f1", "e1"}, 0.3}, {{"f1", "e2"}, 0.7}, {{"f2", "e1"}, 0.2}},
                        Orientation::Inverse);
    auto p = pair_of({"f1", "f2"}, {"e1", "e2"}, {{0, 0}, {0, 1}, {1, 0}});
    double base = *lexical_weight(p, t, cfg, Orientation::Inverse);
    std::vector<std::pair<int, int>> links = p.alignment;
    std::sort(links.begin(), links.end());
    do {
        p.alignment = links;
        CHECK(*lexical_weight(p, t, cfg, Orientation::Inverse) == doctest::Approx(base));
    } while (std::next_permutation(links.begin(), links.end()));
}

TEST_CASE("lexical_weight: invalid alignment index") {
    ScoreConfig cfg;
    auto p = pair_of({"f1"}, {"e1"}, {{0, 3}});
    auto t = table_from({}, Orientation::Inverse);
    CHECK_THROWS_AS(lexical_weight(p, t, cfg, Orientation::Inverse), DataError);
}

TEST_CASE("lexical_weight equals brute-force evaluation on a parameter grid") {
    // all shapes with <= 3 words per side and <= 3 links, sims on a grid
    for (double base_sim : {0.1, 0.5, 1.0}) {
        for (double null_c : {1e-3, 1e-2}) {
            ScoreConfig cfg;
            cfg.null_align_constant = null_c;
            std::mt19937_64 rng(static_cast<std::uint64_t>(base_sim * 1000 + null_c * 1e5));
            for (int trial = 0; trial < 300; ++trial) {
                int sl = 1 + static_cast<int>(rng() % 3), tl = 1 + static_cast<int>(rng() % 3);
                std::vector<std::string> src, tgt;
                for (int i = 0; i < sl; ++i) src.push_back("f" + std::to_string(i));
                for (int j = 0; j < tl; ++j) tgt.push_back("e" + std::to_string(j));
                std::map<std::pair<std::string, std::string>, double> sims;
                std::set<std::pair<int, int>> links;
                int nlinks = static_cast<int>(rng() % 4);
                for (int l = 0; l < nlinks; ++l) {
                    int i = static_cast<int>(rng() % sl), j = static_cast<int>(rng() % tl);
                    links.emplace(i, j);
                    sims[{src[i], tgt[j]}] = base_sim * (1.0 + 0.1 * (rng() % 5)) / 1.5;
                }
                auto p = pair_of(src, tgt, {links.begin(), links.end()});
                for (bool enum_src : {true, false}) {
                    auto orient = enum_src ? Orientation::Inverse : Orientation::Direct;
                    auto t = table_from(sims, orient);
                    double got = *lexical_weight(p, t, ScoreConfig{cfg}, orient);
                    double want = brute_force_lex(p, sims, null_c, cfg.cosine_floor, enum_src);
                    CHECK(std::abs(got - want) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("phrase_similarity: identity and OOV handling") {
    VectorSpace space(2);
    space.insert("w", {1, 0});
    space.insert("u", {0, 1});
    PhraseVectorizer vz(space);
    auto m = identity_matrix(2);
    ScoreConfig cfg;

    auto same = pair_of({"w"}, {"w"});
    CHECK(*phrase_similarity(same, vz, vz, m, cfg) == doctest::Approx(1.0));

    auto oov = pair_of({"zzz"}, {"w"});
    CHECK(*phrase_similarity(oov, vz, vz, m, cfg) == doctest::Approx(cfg.cosine_floor));
    cfg.oov_policy = OovPolicy::DropPair;
    CHECK(!phrase_similarity(oov, vz, vz, m, cfg).has_value());
}

TEST_CASE("phrase_similarity: matched rotated phrases outscore mismatched in >= 90%") {
    int wins = 0, trials = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto world = make_rotated_world(16, 100, 0.02, seed);
        SeedPairs pairs{world.gold, "dictionary"};
        auto m = train_projection_closed_form(pairs, PhraseVectorizer(world.src),
                                              PhraseVectorizer(world.tgt), 0.0);
        PhraseVectorizer vs(world.src), vt(world.tgt);
        ScoreConfig cfg;
        std::mt19937_64 rng(seed * 31);
        for (int t = 0; t < 200; ++t) {
            int len = 1 + static_cast<int>(rng() % 3);
            std::vector<std::string> src, tgt, wrong;
            for (int k = 0; k < len; ++k) {
                auto& g = world.gold[rng() % world.gold.size()];
                src.push_back(g.first);
                tgt.push_back(g.second);
                wrong.push_back(world.gold[rng() % world.gold.size()].second);
            }
            double matched = *phrase_similarity(pair_of(src, tgt), vs, vt, m, cfg);
            double mismatched = *phrase_similarity(pair_of(src, wrong), vs, vt, m, cfg);
            if (matched > mismatched) ++wins;
            ++trials;
        }
    }
    CHECK(static_cast<double>(wins) / trials >= 0.9);
}

namespace {

struct RescoreFixture {
    RotatedWorld world = make_rotated_world(8, 40, 0.01, 5);
    ProjectionMatrix direct, inverse;
    WordSimTable sim_direct, sim_inverse;
    PhraseVectorizer vs{world.src}, vt{world.tgt};
    ScoreConfig cfg;
    ScoringModels models;

    RescoreFixture() {
        SeedPairs pairs{world.gold, "dictionary"};
        SeedPairs rpairs;
        for (const auto& [s, t] : world.gold) rpairs.pairs.emplace_back(t, s);
        direct = train_projection_closed_form(pairs, vs, vt, 0.0, Direction::SrcToTgt, Level::Phrase);
        inverse = train_projection_closed_form(rpairs, vt, vs, 0.0, Direction::TgtToSrc, Level::Phrase);
        std::vector<LexiconEntry> lexicon;
        for (const auto& [s, t] : world.gold) lexicon.push_back({s, t, 0.5});
        sim_direct = build_wordsim_table(lexicon, direct, world.src, world.tgt, cfg,
                                         Orientation::Direct);
        sim_inverse = build_wordsim_table(lexicon, inverse, world.src, world.tgt, cfg,
                                          Orientation::Inverse);
        models = {&direct, &inverse, &sim_direct, &sim_inverse, &vs, &vt};
    }

    PhrasePair sample_pair(std::mt19937_64& rng) const {
        int len = 1 + static_cast<int>(rng() % 3);
        PhrasePair p;
        for (int k = 0; k < len; ++k) {
            auto& g = world.gold[rng() % world.gold.size()];
            p.src.push_back(g.first);
            p.tgt.push_back(g.second);
            p.alignment.emplace_back(k, k);
        }
        std::uniform_real_distribution<double> score(0.0, 1.0);
        for (int k = 0; k < 4; ++k) p.scores.push_back(score(rng));
        return p;
    }
};

}  // namespace

TEST_CASE("rescore_pair: append adds 4 features and keeps originals bit-identical") {
    RescoreFixture fx;
    std::mt19937_64 rng(1);
    PhrasePair p = fx.sample_pair(rng);
    auto out = rescore_pair(p, fx.models, fx.cfg);
    REQUIRE(out.has_value());
    REQUIRE(out->scores.size() == 8);
    for (int i = 0; i < 4; ++i) CHECK(out->scores[i] == p.scores[i]);
    CHECK(out->src == p.src);
    CHECK(out->tgt == p.tgt);
    CHECK(out->alignment == p.alignment);

    auto again = rescore_pair(p, fx.models, fx.cfg);
    CHECK(again->scores == out->scores);
}

TEST_CASE("rescore_pair: replace-mode subsets match Table-2 experiment shapes") {
    RescoreFixture fx;
    std::mt19937_64 rng(2);
    PhrasePair p = fx.sample_pair(rng);

    ScoreConfig cfg = fx.cfg;
    cfg.mode = RescoreMode::Replace;

    // experiment 3: direct phrase feature only
    cfg.enabled = {true, false, false, false};
    CHECK(rescore_pair(p, fx.models, cfg)->scores.size() == 1);

    // experiment 4: both phrase features
    cfg.enabled = {true, false, true, false};
    CHECK(rescore_pair(p, fx.models, cfg)->scores.size() == 2);

    // experiment 5: direct phrase + direct lex
    cfg.enabled = {true, true, false, false};
    CHECK(rescore_pair(p, fx.models, cfg)->scores.size() == 2);

    // experiment 6: all four
    cfg.enabled = {true, true, true, true};
    CHECK(rescore_pair(p, fx.models, cfg)->scores.size() == 4);
}

TEST_CASE("rescore_pair: 10k randomized calls keep every feature in [floor, 1]") {
    RescoreFixture fx;
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10'000; ++t) {
        PhrasePair p = fx.sample_pair(rng);
        if (rng() % 10 == 0) p.src[0] = "oov_token";  // exercise the floor path
        if (rng() % 10 == 0) p.alignment.clear();     // all-null alignment
        auto out = rescore_pair(p, fx.models, fx.cfg);
        REQUIRE(out.has_value());
        REQUIRE(out->scores.size() == p.scores.size() + 4);
        for (std::size_t f = p.scores.size(); f < out->scores.size(); ++f) {
            // lexical weights may drop below the cosine floor via null
            // constants, but stay in (0, 1]
            CHECK(out->scores[f] > 0.0);
            CHECK(out->scores[f] <= 1.0);
        }
        CHECK(out->scores[p.scores.size() + kMonoPhraseDirect] >= fx.cfg.cosine_floor);
        CHECK(out->scores[p.scores.size() + kMonoPhraseInverse] >= fx.cfg.cosine_floor);
    }
}

TEST_CASE("rescore_pair: drop policy propagates unscorable") {
    RescoreFixture fx;
    ScoreConfig cfg = fx.cfg;
    cfg.oov_policy = OovPolicy::DropPair;
    auto p = pair_of({"totally_oov"}, {"also_oov"});
    p.scores = {0.5};
    CHECK(!rescore_pair(p, fx.models, cfg).has_value());
}

TEST_CASE("rescore_table: streaming rewrite with report bookkeeping") {
    RescoreFixture fx;
    std::mt19937_64 rng(4);
    std::string table;
    for (int i = 0; i < 10; ++i) table += emit_phrase_table_line(fx.sample_pair(rng)) + "\n";
    auto in_path = testutil::write_file("rescore_in.pt", table);
    auto out_path = testutil::tmp_path("rescore_out.pt");

    auto report = rescore_table(in_path, out_path, fx.models, fx.cfg);
    CHECK(report.pairs_in == 10);
    CHECK(report.pairs_out == 10);
    CHECK(report.dropped == 0);
    CHECK(report.pairs_in == report.pairs_out + report.dropped);

    // every output line gained exactly 4 features, prefix byte-identical
    std::istringstream in_lines(table), out_lines(testutil::read_file(out_path));
    std::string a, b;
    while (std::getline(in_lines, a)) {
        REQUIRE(std::getline(out_lines, b));
        auto pa = parse_phrase_table_line(a);
        auto pb = parse_phrase_table_line(b);
        CHECK(pb.scores.size() == pa.scores.size() + 4);
        // append mode is a pure extension: dropping the last 4 features
        // reproduces the input line byte-for-byte
        pb.scores.resize(pa.scores.size());
        CHECK(emit_phrase_table_line(pb) == a);
    }
}

TEST_CASE("rescore_table: drop policy bookkeeping") {
    RescoreFixture fx;
    std::mt19937_64 rng(5);
    std::string table;
    for (int i = 0; i < 8; ++i) table += emit_phrase_table_line(fx.sample_pair(rng)) + "\n";
    table += "oov1 ||| whatever ||| 0.5\n";
    table += "oov2 ||| whatever2 ||| 0.5\n";
    auto in_path = testutil::write_file("rescore_drop.pt", table);
    auto out_path = testutil::tmp_path("rescore_drop_out.pt");

    ScoreConfig cfg = fx.cfg;
    cfg.oov_policy = OovPolicy::DropPair;
    auto report = rescore_table(in_path, out_path, fx.models, cfg);
    CHECK(report.pairs_in == 10);
    CHECK(report.pairs_out == 8);
    CHECK(report.dropped == 2);
}

TEST_CASE("ranking by phrase_similarity invariant under global rescaling") {
    RescoreFixture fx;
    std::mt19937_64 rng(6);
    std::vector<std::string> src{"s0000", "s0001"};
    std::vector<std::vector<std::string>> candidates;
    for (int i = 0; i < 10; ++i) {
        auto& g1 = fx.world.gold[rng() % fx.world.gold.size()];
        auto& g2 = fx.world.gold[rng() % fx.world.gold.size()];
        candidates.push_back({g1.second, g2.second});
    }

    auto score_with = [&](const VectorSpace& s_space, const VectorSpace& t_space) {
        PhraseVectorizer vs(s_space), vt(t_space);
        std::vector<double> scores;
        for (const auto& cand : candidates)
            scores.push_back(*phrase_similarity(pair_of(src, cand), vs, vt, fx.direct, fx.cfg));
        return scores;
    };

    VectorSpace scaled_src(8), scaled_tgt(8);
    for (const auto& [tok, v] : fx.world.src.entries()) {
        Vec w = v;
        for (double& c : w) c *= 7.5;
        scaled_src.insert(tok, w);
    }
    for (const auto& [tok, v] : fx.world.tgt.entries()) {
        Vec w = v;
        for (double& c : w) c *= 0.2;
        scaled_tgt.insert(tok, w);
    }

    auto base = score_with(fx.world.src, fx.world.tgt);
    auto scaled = score_with(scaled_src, scaled_tgt);
    // same ranking order
    std::vector<int> order_a(10), order_b(10);
    std::iota(order_a.begin(), order_a.end(), 0);
    order_b = order_a;
    std::sort(order_a.begin(), order_a.end(), [&](int a, int b) { return base[a] > base[b]; });
    std::sort(order_b.begin(), order_b.end(), [&](int a, int b) { return scaled[a] > scaled[b]; });
    CHECK(order_a == order_b);
}
