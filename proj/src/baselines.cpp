#include "medrank/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "medrank/rng.hpp"

namespace medrank::baselines {

std::string_view to_string(BaselineKind k) {
    switch (k) {
        case BaselineKind::NaiveBayes: return "naive_bayes";
        case BaselineKind::Logistic: return "logistic";
        case BaselineKind::Mlp: return "mlp";
    }
    return "?";
}

BaselineKind baseline_kind_from_string(std::string_view s) {
    if (s == "naive_bayes") return BaselineKind::NaiveBayes;
    if (s == "logistic") return BaselineKind::Logistic;
    if (s == "mlp") return BaselineKind::Mlp;
    throw std::runtime_error("unknown baseline kind: " + std::string(s));
}

namespace {

// assignment values are drawn from {-1, 0.5, 1}; 0 means absent
int value_bin(double v) {
    if (v == -1.0) return 0;
    if (v == 0.0) return 1;
    if (v == 1.0) return 3;
    return 2;
}

double sigmoid(double t) { return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t)); }

void shuffled_take(std::vector<size_t>& pool, std::vector<size_t>& out, size_t want,
                   std::mt19937_64& rng) {
    for (size_t i = 0; i < pool.size() && out.size() < want; ++i) {
        size_t j = i + uniform_index(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
}

}  // namespace

ClassifierDataset build_classifier_dataset(const std::vector<corpus::Instance>& instances,
                                           const Entity& y, std::mt19937_64& rng) {
    std::vector<size_t> pos_idx, overlap_idx, other_idx;
    std::unordered_set<Entity, EntityHash> pos_features;
    for (size_t i = 0; i < instances.size(); ++i) {
        bool positive = false;
        for (const auto& [e, g] : instances[i].gold)
            if (e == y && g == 1) positive = true;
        if (positive) {
            pos_idx.push_back(i);
            for (const auto& [e, v] : instances[i].x)
                if (v != 0) pos_features.insert(e);
        }
    }
    if (pos_idx.empty()) throw std::runtime_error("no positive instance for entity: " + y.name);
    std::unordered_set<size_t> pos_set(pos_idx.begin(), pos_idx.end());
    for (size_t i = 0; i < instances.size(); ++i) {
        if (pos_set.count(i)) continue;
        bool overlaps = false;
        for (const auto& [e, v] : instances[i].x)
            if (v != 0 && pos_features.count(e)) overlaps = true;
        (overlaps ? overlap_idx : other_idx).push_back(i);
    }
    std::vector<size_t> neg_idx;
    shuffled_take(overlap_idx, neg_idx, pos_idx.size(), rng);
    shuffled_take(other_idx, neg_idx, pos_idx.size(), rng);

    ClassifierDataset d;
    d.shortfall = pos_idx.size() - neg_idx.size();
    std::unordered_set<Entity, EntityHash> kept;
    auto collect = [&](const std::vector<size_t>& idx, std::vector<SparseFeatures>& out) {
        for (size_t i : idx) {
            SparseFeatures f;
            for (const auto& [e, v] : instances[i].x)
                if (v != 0) {
                    f.emplace_back(e, v);
                    kept.insert(e);
                }
            out.push_back(std::move(f));
        }
    };
    collect(pos_idx, d.positives);
    collect(neg_idx, d.negatives);
    d.kept_features.assign(kept.begin(), kept.end());
    std::sort(d.kept_features.begin(), d.kept_features.end());
    return d;
}

namespace {

std::vector<double> dense_features(const Scorer& s, const SparseFeatures& x) {
    std::vector<double> v(s.kept_features.size(), 0.0);
    for (const auto& [e, val] : x) {
        auto it = s.feature_index.find(e);
        if (it != s.feature_index.end()) v[it->second] = val;
    }
    return v;
}

void train_naive_bayes(Scorer& s, const ClassifierDataset& data) {
    const size_t nf = s.kept_features.size();
    std::vector<double> counts(nf * 8, 1.0);  // add-one smoothing
    double n_cls[2] = {static_cast<double>(data.negatives.size()),
                       static_cast<double>(data.positives.size())};
    auto tally = [&](const std::vector<SparseFeatures>& set, int cls) {
        for (const auto& inst : set) {
            std::vector<double> v = dense_features(s, inst);
            for (size_t f = 0; f < nf; ++f) counts[f * 8 + cls * 4 + value_bin(v[f])] += 1.0;
        }
    };
    tally(data.negatives, 0);
    tally(data.positives, 1);
    s.nb_log_lik.assign(nf * 8, 0.0);
    for (size_t f = 0; f < nf; ++f)
        for (int cls = 0; cls < 2; ++cls) {
            double total = n_cls[cls] + 4.0;
            for (int b = 0; b < 4; ++b)
                s.nb_log_lik[f * 8 + cls * 4 + b] = std::log(counts[f * 8 + cls * 4 + b] / total);
        }
    double total = n_cls[0] + n_cls[1] + 2.0;
    s.nb_log_prior[0] = std::log((n_cls[0] + 1.0) / total);
    s.nb_log_prior[1] = std::log((n_cls[1] + 1.0) / total);
}

void train_logistic(Scorer& s, const ClassifierDataset& data) {
    const size_t nf = s.kept_features.size();
    s.lr_w.assign(nf, 0.0);
    s.lr_b = 0;
    std::vector<std::pair<std::vector<double>, int>> rows;
    for (const auto& p : data.positives) rows.emplace_back(dense_features(s, p), 1);
    for (const auto& p : data.negatives) rows.emplace_back(dense_features(s, p), 0);
    const double lr = 0.5, reg = 1e-3, tol = 1e-6;
    const int max_iter = 20000;
    std::vector<double> gw(nf);
    for (int iter = 0; iter < max_iter; ++iter) {
        std::fill(gw.begin(), gw.end(), 0.0);
        double gb = 0;
        for (const auto& [v, t] : rows) {
            double z = s.lr_b;
            for (size_t f = 0; f < nf; ++f) z += s.lr_w[f] * v[f];
            double err = sigmoid(z) - t;
            for (size_t f = 0; f < nf; ++f) gw[f] += err * v[f];
            gb += err;
        }
        double inv = 1.0 / static_cast<double>(rows.size());
        double max_g = std::abs(gb * inv);
        for (size_t f = 0; f < nf; ++f) {
            gw[f] = gw[f] * inv + reg * s.lr_w[f];
            max_g = std::max(max_g, std::abs(gw[f]));
        }
        gb *= inv;
        if (max_g < tol) break;
        for (size_t f = 0; f < nf; ++f) s.lr_w[f] -= lr * gw[f];
        s.lr_b -= lr * gb;
    }
}

void train_mlp(Scorer& s, const ClassifierDataset& data, uint64_t seed) {
    const size_t nf = s.kept_features.size();
    const int h = s.hidden;
    auto rng = substream(seed, "mlp-init");
    double scale = 1.0 / std::sqrt(static_cast<double>(nf ? nf : 1));
    s.mlp_w1.resize(static_cast<size_t>(h) * nf);
    for (auto& w : s.mlp_w1) w = uniform_real(rng, -scale, scale);
    s.mlp_b1.assign(h, 0.0);
    s.mlp_w2.resize(h);
    for (auto& w : s.mlp_w2) w = uniform_real(rng, -0.5, 0.5);
    s.mlp_b2 = 0;

    std::vector<std::pair<std::vector<double>, int>> rows;
    for (const auto& p : data.positives) rows.emplace_back(dense_features(s, p), 1);
    for (const auto& p : data.negatives) rows.emplace_back(dense_features(s, p), 0);
    const double lr = 0.5;
    const int epochs = 200;
    std::vector<double> hid(h), gw2(h), gb1(h);
    std::vector<double> gw1(static_cast<size_t>(h) * nf);
    double inv = 1.0 / static_cast<double>(rows.size());
    for (int ep = 0; ep < epochs; ++ep) {
        std::fill(gw1.begin(), gw1.end(), 0.0);
        std::fill(gw2.begin(), gw2.end(), 0.0);
        std::fill(gb1.begin(), gb1.end(), 0.0);
        double gb2 = 0;
        for (const auto& [v, t] : rows) {
            for (int j = 0; j < h; ++j) {
                double z = s.mlp_b1[j];
                const double* row = s.mlp_w1.data() + static_cast<size_t>(j) * nf;
                for (size_t f = 0; f < nf; ++f) z += row[f] * v[f];
                hid[j] = sigmoid(z);
            }
            double z2 = s.mlp_b2;
            for (int j = 0; j < h; ++j) z2 += s.mlp_w2[j] * hid[j];
            double err = sigmoid(z2) - t;  // cross-entropy with sigmoid output
            gb2 += err;
            for (int j = 0; j < h; ++j) {
                gw2[j] += err * hid[j];
                double dh = err * s.mlp_w2[j] * hid[j] * (1.0 - hid[j]);
                gb1[j] += dh;
                double* grow = gw1.data() + static_cast<size_t>(j) * nf;
                for (size_t f = 0; f < nf; ++f) grow[f] += dh * v[f];
            }
        }
        for (size_t i = 0; i < gw1.size(); ++i) s.mlp_w1[i] -= lr * inv * gw1[i];
        for (int j = 0; j < h; ++j) {
            s.mlp_b1[j] -= lr * inv * gb1[j];
            s.mlp_w2[j] -= lr * inv * gw2[j];
        }
        s.mlp_b2 -= lr * inv * gb2;
    }
}

}  // namespace

Scorer train_baseline(BaselineKind kind, const ClassifierDataset& data, uint64_t seed) {
    if (data.positives.empty()) throw std::runtime_error("empty classifier dataset");
    Scorer s;
    s.kind = kind;
    s.kept_features = data.kept_features;
    for (size_t i = 0; i < s.kept_features.size(); ++i)
        s.feature_index.emplace(s.kept_features[i], static_cast<int>(i));
    switch (kind) {
        case BaselineKind::NaiveBayes: train_naive_bayes(s, data); break;
        case BaselineKind::Logistic: train_logistic(s, data); break;
        case BaselineKind::Mlp: train_mlp(s, data, seed); break;
    }
    return s;
}

double Scorer::score(const SparseFeatures& x) const {
    std::vector<double> v = dense_features(*this, x);
    const size_t nf = kept_features.size();
    switch (kind) {
        case BaselineKind::NaiveBayes: {
            double lp[2] = {nb_log_prior[0], nb_log_prior[1]};
            for (size_t f = 0; f < nf; ++f) {
                int b = value_bin(v[f]);
                lp[0] += nb_log_lik[f * 8 + b];
                lp[1] += nb_log_lik[f * 8 + 4 + b];
            }
            return sigmoid(lp[1] - lp[0]);
        }
        case BaselineKind::Logistic: {
            double z = lr_b;
            for (size_t f = 0; f < nf; ++f) z += lr_w[f] * v[f];
            return sigmoid(z);
        }
        case BaselineKind::Mlp: {
            double z2 = mlp_b2;
            for (int j = 0; j < hidden; ++j) {
                double z = mlp_b1[j];
                const double* row = mlp_w1.data() + static_cast<size_t>(j) * nf;
                for (size_t f = 0; f < nf; ++f) z += row[f] * v[f];
                z2 += mlp_w2[j] * sigmoid(z);
            }
            return sigmoid(z2);
        }
    }
    return 0.5;
}

inference::RankedResult rank_candidates_baseline(
    const std::vector<std::pair<Entity, Scorer>>& scorers, const SparseFeatures& x,
    TaskKind task) {
    inference::RankedResult r;
    r.task = task;
    for (const auto& [y, s] : scorers) r.ranking.emplace_back(y, s.score(x));
    std::sort(r.ranking.begin(), r.ranking.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first.name < b.first.name;
    });
    return r;
}

}  // namespace medrank::baselines
