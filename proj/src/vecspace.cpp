#include "monoscore/vecspace.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "monoscore/embedtrain.hpp"

namespace mono {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DataError("cosine: dimension mismatch (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
    double na = norm(a);
    double nb = norm(b);
    if (na == 0.0 || nb == 0.0) throw DataError("cosine: zero-norm input");
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

VectorSpace::VectorSpace(int dim, SpaceKind kind) : dim_(dim), kind_(kind) {
    if (dim <= 0) throw DataError("VectorSpace: dimension must be positive");
}

bool VectorSpace::valid_token(std::string_view token) {
    if (token.empty()) return false;
    for (char c : token)
        if (std::isspace(static_cast<unsigned char>(c))) return false;
    return token.find("|||") == std::string_view::npos;
}

bool VectorSpace::insert(const std::string& token, Vec v) {
    if (!valid_token(token))
        throw DataError("invalid token '" + token + "': empty, whitespace, or contains '|||'");
    if (static_cast<int>(v.size()) != dim_)
        throw DataError("vector for '" + token + "' has " + std::to_string(v.size()) +
                        " components, space dimension is " + std::to_string(dim_));
    for (double c : v)
        if (!std::isfinite(c)) throw DataError("non-finite component in vector for '" + token + "'");
    return entries_.emplace(token, std::move(v)).second;
}

const Vec* VectorSpace::lookup(const std::string& token) const {
    auto it = entries_.find(token);
    return it == entries_.end() ? nullptr : &it->second;
}

namespace {

std::string fold_case(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

LoadedSpace load_vectors(const std::string& path, std::optional<int> expected_dim,
                         bool case_fold, SpaceKind kind) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open vector file: " + path);

    std::string header;
    if (!std::getline(in, header) || header.empty())
        throw DataError(path + ": empty vector file");

    std::istringstream hs(header);
    long long count = -1;
    int dim = -1;
    if (!(hs >> count >> dim) || count < 0 || dim <= 0)
        throw DataError(path + ": malformed header '" + header + "'");
    if (expected_dim && dim != *expected_dim)
        throw DataError(path + ": dimension " + std::to_string(dim) +
                        " conflicts with expected " + std::to_string(*expected_dim));

    LoadedSpace result{VectorSpace(dim, kind), 0};
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string token;
        ls >> token;
        if (case_fold) token = fold_case(token);
        Vec v;
        v.reserve(dim);
        std::string field;
        while (ls >> field) {
            std::size_t pos = 0;
            double c;
            try {
                c = std::stod(field, &pos);
            } catch (const std::exception&) {
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": non-numeric component '" + field + "'");
            }
            if (pos != field.size())
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": non-numeric component '" + field + "'");
            v.push_back(c);
        }
        if (static_cast<int>(v.size()) != dim)
            throw DataError(path + ":" + std::to_string(line_no) + ": row has " +
                            std::to_string(v.size()) + " components, header says " +
                            std::to_string(dim));
        if (!result.space.insert(token, std::move(v))) ++result.duplicates;
    }
    if (result.space.empty()) throw DataError(path + ": no vector rows");
    return result;
}

void save_vectors(const VectorSpace& space, const std::string& path) {
    if (space.empty()) throw DataError("save_vectors: empty space");
    std::ofstream out(path);
    if (!out) throw DataError("cannot write vector file: " + path);
    out << space.size() << ' ' << space.dim() << '\n';
    for (const auto& [token, v] : space.entries()) {
        out << token;
        for (double c : v) out << ' ' << fmt_sig6(c);
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

PhraseVectorizer::PhraseVectorizer(const VectorSpace& words)
    : strategy_(PhraseStrategy::AverageWords), words_(&words) {}

PhraseVectorizer::PhraseVectorizer(const VectorSpace& words, const PVModel& pv)
    : strategy_(PhraseStrategy::ParagraphVector), words_(&words), pv_(&pv) {}

int PhraseVectorizer::dim() const { return words_->dim(); }

std::optional<Vec> PhraseVectorizer::vectorize(std::span<const std::string> phrase) const {
    if (phrase.empty()) throw UsageError("vectorize: empty phrase");
    if (strategy_ == PhraseStrategy::ParagraphVector) {
        std::vector<std::string> text(phrase.begin(), phrase.end());
        bool any = false;
        for (const auto& t : text)
            if (pv_->words.id_of(t) >= 0) { any = true; break; }
        if (!any) return std::nullopt;
        return infer_paragraph(*pv_, text);
    }
    Vec sum(words_->dim(), 0.0);
    int found = 0;
    for (const auto& token : phrase) {
        const Vec* v = words_->lookup(token);
        if (!v) continue;
        for (int i = 0; i < words_->dim(); ++i) sum[i] += (*v)[i];
        ++found;
    }
    if (found == 0) return std::nullopt;
    for (double& c : sum) c /= found;
    return sum;
}

}  // namespace mono
