#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "monoscore/vecspace.hpp"

namespace mono {

/// A seeded validation world: target vectors are a random rotation of the
/// source vectors plus optional Gaussian noise, with the gold mapping kept.
struct RotatedWorld {
    VectorSpace src;
    VectorSpace tgt;
    std::vector<std::pair<std::string, std::string>> gold;  // src token -> tgt token
};

struct SyntheticConfig {
    int dim = 32;
    int vocab = 200;
    double noise_sigma = 0.05;
    std::uint64_t seed = 1;
    int phrase_pairs = 100;       // rows of the toy phrase table
    int seed_sentences = 200;     // phrase-level seed pairs, 1..8 tokens per side
    std::string out_dir;
};

RotatedWorld make_rotated_world(int dim, int vocab, double noise_sigma, std::uint64_t seed);

struct SyntheticWorldFiles {
    std::string src_vectors;    // src.vec
    std::string tgt_vectors;    // tgt.vec
    std::string gold_dict;      // gold.tsv (also the word-level seed file)
    std::string seed_phrases;   // seed_phrases.tsv
    std::string phrase_table;   // table.pt
    std::string lexicon;        // lexicon.txt
};

/// Writes the full world to cfg.out_dir; byte-identical under a fixed seed.
/// Throws UsageError on invalid dim/vocab/sigma.
SyntheticWorldFiles make_synthetic(const SyntheticConfig& cfg);

}  // namespace mono
