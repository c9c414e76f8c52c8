#include "monoscore/embedtrain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace mono {

namespace {

double sigmoid(double x) {
    if (x > 30.0) return 1.0;
    if (x < -30.0) return 0.0;
    return 1.0 / (1.0 + std::exp(-x));
}

constexpr double kLogEps = 1e-12;

// Cumulative unigram^0.75 table for negative sampling.
struct NegativeSampler {
    std::vector<double> cumulative;

    explicit NegativeSampler(const std::vector<std::int64_t>& counts) {
        cumulative.resize(counts.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            acc += std::pow(static_cast<double>(counts[i]), 0.75);
            cumulative[i] = acc;
        }
    }

    int draw(std::mt19937_64& rng, int exclude) const {
        std::uniform_real_distribution<double> u(0.0, cumulative.back());
        for (int attempt = 0; attempt < 16; ++attempt) {
            double r = u(rng);
            auto it = std::lower_bound(cumulative.begin(), cumulative.end(), r);
            int id = static_cast<int>(it - cumulative.begin());
            if (id >= static_cast<int>(cumulative.size())) id = static_cast<int>(cumulative.size()) - 1;
            if (id != exclude) return id;
        }
        return -1;  // degenerate vocabulary; caller skips
    }
};

// Shared forward/backward for one example. h is the mean of the context
// input rows. Returns the loss; when apply_lr > 0 performs the in-place SGD
// update, when grad != nullptr accumulates dense gradients instead.
double example_pass(const WordModel& model, const Example& ex, double apply_lr,
                    Eigen::MatrixXd* in, Eigen::MatrixXd* out, Gradients* grad) {
    const int dim = model.dim;
    Eigen::VectorXd h = Eigen::VectorXd::Zero(dim);
    for (int c : ex.context) h += model.in.row(c).transpose();
    h /= static_cast<double>(ex.context.size());

    Eigen::VectorXd grad_h = Eigen::VectorXd::Zero(dim);
    double loss = 0.0;

    auto visit = [&](int o, double label) {
        double s = model.out.row(o).dot(h.transpose());
        double p = sigmoid(s);
        loss += -(label > 0.5 ? std::log(p + kLogEps) : std::log(1.0 - p + kLogEps));
        double gs = p - label;  // d loss / d s
        grad_h += gs * model.out.row(o).transpose();
        if (apply_lr > 0.0)
            out->row(o) -= apply_lr * gs * h.transpose();
        else if (grad)
            grad->out.row(o) += gs * h.transpose();
    };

    visit(ex.target, 1.0);
    for (int n : ex.negatives) visit(n, 0.0);

    double scale = 1.0 / static_cast<double>(ex.context.size());
    for (int c : ex.context) {
        if (apply_lr > 0.0)
            in->row(c) -= apply_lr * scale * grad_h.transpose();
        else if (grad)
            grad->in.row(c) += scale * grad_h.transpose();
    }
    return loss;
}

}  // namespace

double loss_and_gradient(const WordModel& model, const std::vector<Example>& batch,
                         Gradients* grad) {
    if (grad) {
        grad->in = Eigen::MatrixXd::Zero(model.in.rows(), model.in.cols());
        grad->out = Eigen::MatrixXd::Zero(model.out.rows(), model.out.cols());
    }
    double loss = 0.0;
    for (const auto& ex : batch) loss += example_pass(model, ex, 0.0, nullptr, nullptr, grad);
    return loss;
}

WordModel train_word_model(const Corpus& corpus, const TrainConfig& cfg) {
    if (cfg.dim < 1 || cfg.window < 1 || cfg.epochs < 1)
        throw UsageError("train: dim, window, and epochs must be >= 1");

    // Frequency count; vocabulary ordered by count desc, then token, for a
    // stable id assignment.
    std::map<std::string, std::int64_t> freq;
    for (const auto& sentence : corpus)
        for (const auto& token : sentence) ++freq[token];
    if (freq.empty()) throw DataError("train: empty corpus");

    std::vector<std::pair<std::string, std::int64_t>> kept;
    for (const auto& [token, n] : freq)
        if (n >= cfg.min_count && VectorSpace::valid_token(token)) kept.emplace_back(token, n);
    if (kept.empty()) throw DataError("train: no token reaches min_count");
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    WordModel model;
    model.dim = cfg.dim;
    for (const auto& [token, n] : kept) {
        model.index.emplace(token, static_cast<int>(model.vocab.size()));
        model.vocab.push_back(token);
        model.counts.push_back(n);
    }

    const int vocab = static_cast<int>(model.vocab.size());
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> init(-0.5 / cfg.dim, 0.5 / cfg.dim);
    model.in.resize(vocab, cfg.dim);
    for (int i = 0; i < vocab; ++i)
        for (int d = 0; d < cfg.dim; ++d) model.in(i, d) = init(rng);
    model.out = Eigen::MatrixXd::Zero(vocab, cfg.dim);

    NegativeSampler sampler(model.counts);

    // Sentences mapped to ids once; OOV / below-min-count tokens dropped.
    std::vector<std::vector<int>> sentences;
    sentences.reserve(corpus.size());
    for (const auto& sentence : corpus) {
        std::vector<int> ids;
        for (const auto& token : sentence) {
            int id = model.id_of(token);
            if (id >= 0) ids.push_back(id);
        }
        if (!ids.empty()) sentences.push_back(std::move(ids));
    }

    Example ex;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double lr = cfg.learning_rate *
                    std::max(0.01, 1.0 - static_cast<double>(epoch) / cfg.epochs);
        double epoch_loss = 0.0;
        std::size_t examples = 0;
        for (const auto& ids : sentences) {
            const int len = static_cast<int>(ids.size());
            for (int t = 0; t < len; ++t) {
                int lo = std::max(0, t - cfg.window);
                int hi = std::min(len - 1, t + cfg.window);
                if (cfg.model == WordModelKind::Skipgram) {
                    for (int c = lo; c <= hi; ++c) {
                        if (c == t) continue;
                        ex.context.assign(1, ids[t]);
                        ex.target = ids[c];
                        ex.negatives.clear();
                        for (int k = 0; k < cfg.negative_samples; ++k) {
                            int n = sampler.draw(rng, ex.target);
                            if (n >= 0) ex.negatives.push_back(n);
                        }
                        epoch_loss += example_pass(model, ex, lr, &model.in, &model.out, nullptr);
                        ++examples;
                    }
                } else {
                    ex.context.clear();
                    for (int c = lo; c <= hi; ++c)
                        if (c != t) ex.context.push_back(ids[c]);
                    if (ex.context.empty()) continue;
                    ex.target = ids[t];
                    ex.negatives.clear();
                    for (int k = 0; k < cfg.negative_samples; ++k) {
                        int n = sampler.draw(rng, ex.target);
                        if (n >= 0) ex.negatives.push_back(n);
                    }
                    epoch_loss += example_pass(model, ex, lr, &model.in, &model.out, nullptr);
                    ++examples;
                }
            }
        }
        model.epoch_losses.push_back(examples ? epoch_loss / examples : 0.0);
    }
    return model;
}

VectorSpace to_vector_space(const WordModel& model) {
    VectorSpace space(model.dim, SpaceKind::Word);
    for (std::size_t i = 0; i < model.vocab.size(); ++i) {
        Vec v(model.dim);
        for (int d = 0; d < model.dim; ++d) v[d] = model.in(static_cast<int>(i), d);
        space.insert(model.vocab[i], std::move(v));
    }
    return space;
}

VectorSpace train_word_vectors(const Corpus& corpus, const TrainConfig& cfg) {
    return to_vector_space(train_word_model(corpus, cfg));
}

void save_word_model(const WordModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path);
    out << model.vocab.size() << ' ' << model.dim << '\n';
    for (std::size_t i = 0; i < model.vocab.size(); ++i) {
        out << model.vocab[i] << ' ' << model.counts[i];
        for (int d = 0; d < model.dim; ++d) out << ' ' << fmt_full(model.in(static_cast<int>(i), d));
        for (int d = 0; d < model.dim; ++d) out << ' ' << fmt_full(model.out(static_cast<int>(i), d));
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

WordModel load_word_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    std::size_t vocab;
    int dim;
    if (!(in >> vocab >> dim) || dim <= 0) throw DataError(path + ": malformed model header");
    WordModel model;
    model.dim = dim;
    model.in.resize(static_cast<int>(vocab), dim);
    model.out.resize(static_cast<int>(vocab), dim);
    for (std::size_t i = 0; i < vocab; ++i) {
        std::string token;
        std::int64_t count;
        if (!(in >> token >> count)) throw DataError(path + ": truncated model row");
        model.index.emplace(token, static_cast<int>(i));
        model.vocab.push_back(token);
        model.counts.push_back(count);
        for (int d = 0; d < dim; ++d)
            if (!(in >> model.in(static_cast<int>(i), d))) throw DataError(path + ": truncated model row");
        for (int d = 0; d < dim; ++d)
            if (!(in >> model.out(static_cast<int>(i), d))) throw DataError(path + ": truncated model row");
    }
    return model;
}

Vec infer_paragraph(const PVModel& pv, const std::vector<std::string>& text) {
    const WordModel& m = pv.words;
    const int dim = m.dim;

    std::vector<int> ids;
    for (const auto& token : text) ids.push_back(m.id_of(token));
    bool any = std::any_of(ids.begin(), ids.end(), [](int id) { return id >= 0; });
    if (!any) throw DataError("infer_paragraph: all tokens out of vocabulary");

    std::mt19937_64 rng(pv.cfg.seed);
    std::uniform_real_distribution<double> init(-0.5 / dim, 0.5 / dim);
    Eigen::VectorXd para(dim);
    for (int d = 0; d < dim; ++d) para[d] = init(rng);

    NegativeSampler sampler(m.counts);
    const int len = static_cast<int>(ids.size());

    for (int step = 0; step < pv.cfg.steps; ++step) {
        double lr = pv.cfg.learning_rate *
                    std::max(0.01, 1.0 - static_cast<double>(step) / pv.cfg.steps);
        for (int t = 0; t < len; ++t) {
            if (ids[t] < 0) continue;  // cannot predict an OOV center
            int lo = std::max(0, t - pv.cfg.window);
            int hi = std::min(len - 1, t + pv.cfg.window);
            // Context = paragraph vector averaged with the frozen input
            // vectors of the surrounding in-vocabulary words.
            Eigen::VectorXd h = para;
            int n = 1;
            for (int c = lo; c <= hi; ++c) {
                if (c == t || ids[c] < 0) continue;
                h += m.in.row(ids[c]).transpose();
                ++n;
            }
            h /= static_cast<double>(n);

            Eigen::VectorXd grad_h = Eigen::VectorXd::Zero(dim);
            auto visit = [&](int o, double label) {
                double s = m.out.row(o).dot(h.transpose());
                double gs = sigmoid(s) - label;
                grad_h += gs * m.out.row(o).transpose();
            };
            visit(ids[t], 1.0);
            for (int k = 0; k < pv.cfg.negative_samples; ++k) {
                int neg = sampler.draw(rng, ids[t]);
                if (neg >= 0) visit(neg, 0.0);
            }
            para -= lr / n * grad_h;
        }
    }

    Vec result(dim);
    for (int d = 0; d < dim; ++d) result[d] = para[d];
    return result;
}

}  // namespace mono
