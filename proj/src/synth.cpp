#include "monoscore/synth.hpp"

#include <Eigen/Dense>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "monoscore/phrasetable.hpp"

namespace mono {

namespace {

std::string src_token(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "s%04d", i);
    return buf;
}

std::string tgt_token(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "t%04d", i);
    return buf;
}

// Haar-ish random rotation: QR of a Gaussian matrix with the R diagonal
// signs folded in so the result is deterministic across Eigen versions.
Eigen::MatrixXd random_rotation(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

}  // namespace

RotatedWorld make_rotated_world(int dim, int vocab, double noise_sigma, std::uint64_t seed) {
    if (dim < 1) throw UsageError("make_rotated_world: dim must be positive");
    if (vocab < 1) throw UsageError("make_rotated_world: vocab must be positive");
    if (noise_sigma < 0.0) throw UsageError("make_rotated_world: noise sigma must be >= 0");

    std::mt19937_64 rng(seed);
    Eigen::MatrixXd rotation = random_rotation(dim, rng);
    std::normal_distribution<double> gauss(0.0, 1.0);

    RotatedWorld world{VectorSpace(dim), VectorSpace(dim), {}};
    for (int i = 0; i < vocab; ++i) {
        Eigen::VectorXd x(dim);
        for (int d = 0; d < dim; ++d) x[d] = gauss(rng);
        x.normalize();
        Eigen::VectorXd z = rotation * x;
        for (int d = 0; d < dim; ++d) z[d] += noise_sigma * gauss(rng);

        std::string s = src_token(i), t = tgt_token(i);
        world.src.insert(s, Vec(x.data(), x.data() + dim));
        world.tgt.insert(t, Vec(z.data(), z.data() + dim));
        world.gold.emplace_back(std::move(s), std::move(t));
    }
    return world;
}

SyntheticWorldFiles make_synthetic(const SyntheticConfig& cfg) {
    if (cfg.out_dir.empty()) throw UsageError("make_synthetic: output directory required");
    RotatedWorld world = make_rotated_world(cfg.dim, cfg.vocab, cfg.noise_sigma, cfg.seed);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    auto path = [&](const char* name) { return (fs::path(cfg.out_dir) / name).string(); };

    SyntheticWorldFiles files{path("src.vec"), path("tgt.vec"), path("gold.tsv"),
                              path("seed_phrases.tsv"), path("table.pt"), path("lexicon.txt")};

    save_vectors(world.src, files.src_vectors);
    save_vectors(world.tgt, files.tgt_vectors);

    {
        std::ofstream out(files.gold_dict);
        if (!out) throw DataError("cannot write " + files.gold_dict);
        for (const auto& [s, t] : world.gold) out << s << '\t' << t << '\n';
    }

    // Tail of the RNG stream is independent of the world draw above.
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<int> pick(0, cfg.vocab - 1);

    {
        std::ofstream out(files.seed_phrases);
        if (!out) throw DataError("cannot write " + files.seed_phrases);
        std::uniform_int_distribution<int> len(1, 8);
        for (int n = 0; n < cfg.seed_sentences; ++n) {
            int l = len(rng);
            std::string s, t;
            for (int k = 0; k < l; ++k) {
                int w = pick(rng);
                if (k) { s += ' '; t += ' '; }
                s += src_token(w);
                t += tgt_token(w);
            }
            out << s << '\t' << t << '\n';
        }
    }

    {
        std::ofstream out(files.phrase_table);
        if (!out) throw DataError("cannot write " + files.phrase_table);
        std::uniform_int_distribution<int> len(1, 3);
        std::uniform_real_distribution<double> score(0.05, 1.0);
        for (int n = 0; n < cfg.phrase_pairs; ++n) {
            int l = len(rng);
            PhrasePair p;
            for (int k = 0; k < l; ++k) {
                int w = pick(rng);
                p.src.push_back(src_token(w));
                p.tgt.push_back(tgt_token(w));
                p.alignment.emplace_back(k, k);
            }
            for (int k = 0; k < 4; ++k) p.scores.push_back(score(rng));
            out << emit_phrase_table_line(p) << '\n';
        }
    }

    {
        std::ofstream out(files.lexicon);
        if (!out) throw DataError("cannot write " + files.lexicon);
        for (const auto& [s, t] : world.gold) out << s << ' ' << t << ' ' << "0.9" << '\n';
        out << kNullToken << ' ' << tgt_token(0) << ' ' << "0.01" << '\n';
    }

    return files;
}

}  // namespace mono
