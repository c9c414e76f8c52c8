#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monoscore/common.hpp"

namespace mono {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// Cosine similarity, clamped to [-1, 1]. Throws DataError on dimension
/// mismatch or zero-norm input.
double cosine(std::span<const double> a, std::span<const double> b);

enum class SpaceKind { Word, Phrase };

/// Immutable token -> dense vector map with a fixed dimension.
/// Entries are kept sorted so serialization is deterministic.
class VectorSpace {
public:
    explicit VectorSpace(int dim, SpaceKind kind = SpaceKind::Word);

    int dim() const { return dim_; }
    SpaceKind kind() const { return kind_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// Adds an entry. Returns false (and keeps the existing vector) if the
    /// token is already present. Throws DataError on invalid token, wrong
    /// dimension, or non-finite component.
    bool insert(const std::string& token, Vec v);

    const Vec* lookup(const std::string& token) const;
    bool contains(const std::string& token) const { return lookup(token) != nullptr; }

    const std::map<std::string, Vec>& entries() const { return entries_; }

    /// Tokens may not be empty, contain whitespace, or contain the "|||"
    /// field separator of the table formats.
    static bool valid_token(std::string_view token);

private:
    int dim_;
    SpaceKind kind_;
    std::map<std::string, Vec> entries_;
};

struct LoadedSpace {
    VectorSpace space;
    std::size_t duplicates = 0;  // dropped duplicate tokens, first occurrence kept
};

/// Reads the text vector format: header "<count> <dim>", then one
/// "<token> <c1> ... <cd>" row per line.
LoadedSpace load_vectors(const std::string& path,
                         std::optional<int> expected_dim = std::nullopt,
                         bool case_fold = false,
                         SpaceKind kind = SpaceKind::Word);

/// Writes the format accepted by load_vectors: lexicographic token order,
/// 6 significant digits per component. Throws DataError on an empty space.
void save_vectors(const VectorSpace& space, const std::string& path);

struct PVModel;  // embedtrain.hpp

enum class PhraseStrategy { AverageWords, ParagraphVector };

/// Turns a multi-word phrase into a vector in the word space's dimension.
class PhraseVectorizer {
public:
    explicit PhraseVectorizer(const VectorSpace& words);
    PhraseVectorizer(const VectorSpace& words, const PVModel& pv);

    PhraseStrategy strategy() const { return strategy_; }
    const VectorSpace& word_space() const { return *words_; }
    int dim() const;

    /// Average strategy: component-wise mean over in-vocabulary tokens,
    /// absent when every token is OOV. PV strategy: paragraph-vector
    /// inference, absent when inference is impossible (all tokens OOV).
    /// Throws UsageError on an empty phrase.
    std::optional<Vec> vectorize(std::span<const std::string> phrase) const;

private:
    PhraseStrategy strategy_;
    const VectorSpace* words_;
    const PVModel* pv_ = nullptr;
};

}  // namespace mono
