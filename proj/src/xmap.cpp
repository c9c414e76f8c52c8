#include "monoscore/xmap.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace mono {

std::string to_string(Direction d) { return d == Direction::SrcToTgt ? "src2tgt" : "tgt2src"; }
std::string to_string(Level l) { return l == Level::Word ? "word" : "phrase"; }

namespace {

Direction direction_from(const std::string& s) {
    if (s == "src2tgt") return Direction::SrcToTgt;
    if (s == "tgt2src") return Direction::TgtToSrc;
    throw DataError("unknown direction tag '" + s + "'");
}

Level level_from(const std::string& s) {
    if (s == "word") return Level::Word;
    if (s == "phrase") return Level::Phrase;
    throw DataError("unknown level tag '" + s + "'");
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

// Seed pairs resolved to row-stacked design matrices: X (n x d_src) and
// Z (n x d_tgt). Unresolvable pairs are counted, not fatal.
struct Resolved {
    Eigen::MatrixXd x, z;
    std::size_t dropped = 0;
};

Resolved resolve(const SeedPairs& pairs, const PhraseVectorizer& src,
                 const PhraseVectorizer& tgt) {
    std::vector<std::pair<Vec, Vec>> rows;
    Resolved r;
    for (const auto& [s, t] : pairs.pairs) {
        auto sv = src.vectorize(split_ws(s));
        auto tv = tgt.vectorize(split_ws(t));
        if (!sv || !tv) {
            ++r.dropped;
            continue;
        }
        rows.emplace_back(std::move(*sv), std::move(*tv));
    }
    if (rows.empty()) throw DataError("no seed pair resolves to vectors in both spaces");
    r.x.resize(static_cast<int>(rows.size()), src.dim());
    r.z.resize(static_cast<int>(rows.size()), tgt.dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int d = 0; d < src.dim(); ++d) r.x(static_cast<int>(i), d) = rows[i].first[d];
        for (int d = 0; d < tgt.dim(); ++d) r.z(static_cast<int>(i), d) = rows[i].second[d];
    }
    return r;
}

double residual_loss(const Eigen::MatrixXd& w, const Eigen::MatrixXd& x, const Eigen::MatrixXd& z) {
    return (x * w - z).squaredNorm();
}

}  // namespace

SeedPairs load_seed_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open seed pair file: " + path);
    SeedPairs pairs;
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected 'source<TAB>target'");
        auto pair = std::make_pair(line.substr(0, tab), line.substr(tab + 1));
        if (seen.insert(pair).second) pairs.pairs.push_back(std::move(pair));
    }
    if (pairs.pairs.empty()) throw DataError(path + ": no seed pairs");
    return pairs;
}

ProjectionMatrix train_projection_closed_form(const SeedPairs& pairs,
                                              const PhraseVectorizer& src,
                                              const PhraseVectorizer& tgt, double ridge,
                                              Direction direction, Level level) {
    if (ridge < 0.0) throw UsageError("ridge must be non-negative");
    Resolved r = resolve(pairs, src, tgt);

    Eigen::MatrixXd gram = r.x.transpose() * r.x;
    gram.diagonal().array() += ridge;

    ProjectionMatrix m;
    if (ridge == 0.0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
        if (!lu.isInvertible())
            throw DataError("singular normal equations: " + std::to_string(r.x.rows()) +
                            " resolvable pairs do not span " + std::to_string(src.dim()) +
                            " dimensions (use ridge > 0)");
        m.w = lu.solve(r.x.transpose() * r.z);
    } else {
        m.w = gram.ldlt().solve(r.x.transpose() * r.z);
    }

    m.direction = direction;
    m.level = level;
    m.report.pairs_used = static_cast<std::size_t>(r.x.rows());
    m.report.pairs_dropped = r.dropped;
    m.report.final_loss = residual_loss(m.w, r.x, r.z);
    m.report.solver = "closed-form(ridge=" + fmt_sig6(ridge) + ")";
    return m;
}

ProjectionMatrix train_projection_sgd(const SeedPairs& pairs, const PhraseVectorizer& src,
                                      const PhraseVectorizer& tgt, const SgdConfig& cfg,
                                      Direction direction, Level level) {
    if (cfg.epochs < 0 || cfg.learning_rate <= 0.0)
        throw UsageError("sgd: epochs must be >= 0 and learning_rate positive");
    Resolved r = resolve(pairs, src, tgt);

    const int n = static_cast<int>(r.x.rows());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(src.dim(), tgt.dim());
    std::mt19937_64 rng(cfg.seed);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    const std::int64_t total_steps = static_cast<std::int64_t>(cfg.epochs) * n;
    std::int64_t step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (int idx : order) {
            double lr = cfg.learning_rate *
                        std::max(0.01, 1.0 - static_cast<double>(step) / total_steps);
            Eigen::VectorXd x = r.x.row(idx).transpose();
            Eigen::VectorXd e = w.transpose() * x - r.z.row(idx).transpose();
            w.noalias() -= 2.0 * lr * x * e.transpose();
            ++step;
        }
    }

    ProjectionMatrix m;
    m.w = std::move(w);
    m.direction = direction;
    m.level = level;
    m.report.pairs_used = static_cast<std::size_t>(n);
    m.report.pairs_dropped = r.dropped;
    m.report.final_loss = residual_loss(m.w, r.x, r.z);
    m.report.solver = "sgd(epochs=" + std::to_string(cfg.epochs) +
                      ",lr=" + fmt_sig6(cfg.learning_rate) + ",seed=" + std::to_string(cfg.seed) + ")";
    return m;
}

Vec project(const ProjectionMatrix& m, std::span<const double> x) {
    if (static_cast<int>(x.size()) != m.d_src())
        throw DataError("project: vector dimension " + std::to_string(x.size()) +
                        " does not match matrix d_src " + std::to_string(m.d_src()));
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<int>(x.size()));
    Eigen::VectorXd y = m.w.transpose() * xv;
    return Vec(y.data(), y.data() + y.size());
}

std::vector<std::pair<std::string, double>> induce_translations(const ProjectionMatrix& m,
                                                                const VectorSpace& src,
                                                                const VectorSpace& tgt,
                                                                const std::string& token,
                                                                std::size_t k) {
    const Vec* x = src.lookup(token);
    if (!x) throw DataError("induce_translations: token '" + token + "' not in source space");
    Vec projected = project(m, *x);

    std::vector<std::pair<std::string, double>> scored;
    scored.reserve(tgt.size());
    for (const auto& [t, z] : tgt.entries()) scored.emplace_back(t, cosine(projected, z));
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

void save_matrix(const ProjectionMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write matrix file: " + path);
    out << m.d_src() << ' ' << m.d_tgt() << ' ' << to_string(m.direction) << ' '
        << to_string(m.level) << '\n';
    for (int i = 0; i < m.d_src(); ++i) {
        for (int j = 0; j < m.d_tgt(); ++j) {
            if (j) out << ' ';
            out << fmt_full(m.w(i, j));
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

ProjectionMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open matrix file: " + path);
    int d_src, d_tgt;
    std::string direction, level;
    if (!(in >> d_src >> d_tgt >> direction >> level) || d_src <= 0 || d_tgt <= 0)
        throw DataError(path + ": malformed matrix header");
    ProjectionMatrix m;
    m.direction = direction_from(direction);
    m.level = level_from(level);
    m.w.resize(d_src, d_tgt);
    for (int i = 0; i < d_src; ++i)
        for (int j = 0; j < d_tgt; ++j)
            if (!(in >> m.w(i, j))) throw DataError(path + ": truncated matrix data");
    m.report.solver = "loaded";
    return m;
}

}  // namespace mono
