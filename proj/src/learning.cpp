#include "medrank/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "medrank/rng.hpp"

namespace medrank::learning {

using energy::EnergyKind;
using energy::EnergyModel;

TrainInstance to_train_instance(const graph::Bigraph& b, const corpus::Instance& inst) {
    TrainInstance t;
    t.x = inference::make_assignment(b, inst.x);
    for (const auto& [e, g] : inst.gold) {
        if (g != 1) continue;
        if (auto yi = b.y_index(e)) t.positives.push_back(*yi);
    }
    std::sort(t.positives.begin(), t.positives.end());
    return t;
}

namespace {

double softplus(double t) {
    if (t > 30) return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

double field_sum(const EnergyModel& m, int y, const inference::Assignment& a) {
    double s = 0;
    for (const auto& [x, v] : a.items)
        if (v != 0) s += m.f_value(y, x) * v;
    return s;
}

// ln P(Y = sign | x) with field S
double log_cond(double s, int sign) { return -softplus(2.0 * sign * s); }

}  // namespace

double instance_loglik(const EnergyModel& m, const TrainInstance& t, double lambda) {
    double ll = 0;
    for (int y : t.positives) ll += log_cond(field_sum(m, y, t.x), +1);
    for (int y : t.negatives) ll += log_cond(field_sum(m, y, t.x), -1);
    if (lambda > 0) ll -= 0.5 * lambda * m.parameter_sq_norm();
    return ll;
}

std::vector<int> negative_sample(const EnergyModel& m, const std::vector<int>& positives,
                                 const inference::Assignment& x, int k_neg,
                                 std::mt19937_64& rng) {
    const auto& b = m.bigraph;
    std::unordered_set<int> pos(positives.begin(), positives.end());
    size_t universe = b.y_part.size() - pos.size();
    if (universe == 0) throw std::runtime_error("no negatives available");

    std::unordered_set<int> pool_set;
    for (const auto& [xi, v] : x.items) {
        if (v <= 0) continue;
        std::vector<std::pair<double, int>> scored;  // (f, y); y index order is name order
        for (int eid : b.x_adj[xi]) {
            int y = b.edges[eid].y;
            scored.emplace_back(m.f_value(y, xi), y);
        }
        std::sort(scored.begin(), scored.end());
        size_t take = std::min<size_t>(k_neg, scored.size());
        for (size_t i = 0; i < take; ++i)
            if (!pos.count(scored[i].second)) pool_set.insert(scored[i].second);
    }
    std::vector<int> pool(pool_set.begin(), pool_set.end());
    std::sort(pool.begin(), pool.end());

    size_t need = std::min(positives.size(), universe);
    std::vector<int> chosen;
    // partial Fisher-Yates over the pool
    for (size_t i = 0; i < pool.size() && chosen.size() < need; ++i) {
        size_t j = i + uniform_index(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
        chosen.push_back(pool[i]);
    }
    if (chosen.size() < need) {
        std::unordered_set<int> taken(chosen.begin(), chosen.end());
        std::vector<int> rest;
        for (size_t y = 0; y < b.y_part.size(); ++y)
            if (!pos.count(static_cast<int>(y)) && !taken.count(static_cast<int>(y)))
                rest.push_back(static_cast<int>(y));
        for (size_t i = 0; i < rest.size() && chosen.size() < need; ++i) {
            size_t j = i + uniform_index(rng, rest.size() - i);
            std::swap(rest[i], rest[j]);
            chosen.push_back(rest[i]);
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

void sgd_step(EnergyModel& m, const TrainInstance& t, double eta, double lambda) {
    if (!energy::is_learnable(m.kind)) throw std::runtime_error("non-learnable energy");
    const int d = m.hp.dim;

    std::unordered_map<int, double> d_theta;                 // edge id -> grad
    std::unordered_map<int, std::vector<double>> d_y, d_x;   // entity idx -> grad
    std::vector<double> d_w, d_r;
    if (m.kind == EnergyKind::LFM) d_w.assign(static_cast<size_t>(d) * d, 0.0);
    if (m.kind == EnergyKind::Trans) d_r.assign(d, 0.0);

    auto add_vec = [d](std::unordered_map<int, std::vector<double>>& acc, int idx,
                       const std::vector<double>& g, double c) {
        auto& v = acc[idx];
        if (v.empty()) v.assign(d, 0.0);
        for (int i = 0; i < d; ++i) v[i] += c * g[i];
    };

    auto accumulate = [&](int y, int sign) {
        double s = field_sum(m, y, t.x);
        // d/dp ln P(sign | x) = -(sign + tanh(S)) * dS/dp,  Ising expectation
        double coeff = -(sign + std::tanh(s));
        if (coeff == 0) return;
        for (const auto& [xi, v] : t.x.items) {
            if (v == 0) continue;
            double c = coeff * v;
            energy::FGrad fg = energy::f_grad(m, y, xi);
            switch (m.kind) {
                case EnergyKind::Theta:
                    if (fg.edge >= 0) d_theta[fg.edge] += c;
                    break;
                case EnergyKind::LFM: {
                    add_vec(d_y, y, fg.dy, c);
                    add_vec(d_x, xi, fg.dx, c);
                    const double* yv = m.y_vec(y);
                    for (int a = 0; a < d; ++a) {
                        double cy = c * yv[a];
                        if (cy == 0) continue;
                        double* row = d_w.data() + static_cast<size_t>(a) * d;
                        for (int k = 0; k < d; ++k) row[k] += cy * fg.dfdu[k];
                    }
                    break;
                }
                case EnergyKind::Trans:
                    add_vec(d_y, y, fg.dy, c);
                    add_vec(d_x, xi, fg.dx, c);
                    for (int i = 0; i < d; ++i) d_r[i] += c * fg.dr[i];
                    break;
                default: break;
            }
        }
    };
    for (int y : t.positives) accumulate(y, +1);
    for (int y : t.negatives) accumulate(y, -1);

    // weight decay applies to every parameter, data term only to touched ones
    const double decay = 1.0 - eta * lambda;
    auto decay_all = [decay](std::vector<double>& v) {
        if (decay == 1.0) return;
        for (double& p : v) p *= decay;
    };
    switch (m.kind) {
        case EnergyKind::Theta:
            decay_all(m.theta);
            for (const auto& [eid, g] : d_theta) m.theta[eid] += eta * g;
            break;
        case EnergyKind::LFM:
        case EnergyKind::Trans: {
            decay_all(m.y_emb);
            decay_all(m.x_emb);
            for (const auto& [y, g] : d_y) {
                double* v = m.y_vec(y);
                for (int i = 0; i < d; ++i) v[i] += eta * g[i];
            }
            for (const auto& [x, g] : d_x) {
                double* v = m.x_vec(x);
                for (int i = 0; i < d; ++i) v[i] += eta * g[i];
            }
            if (m.kind == EnergyKind::LFM) {
                decay_all(m.w_rel);
                for (size_t i = 0; i < m.w_rel.size(); ++i) m.w_rel[i] += eta * d_w[i];
            } else {
                decay_all(m.r_rel);
                for (int i = 0; i < d; ++i) m.r_rel[i] += eta * d_r[i];
            }
            energy::normalize_embeddings(m);
            break;
        }
        default: break;
    }
}

TrainReport train(EnergyModel& m, const std::vector<TrainInstance>& instances,
                  const energy::HyperParams& hp) {
    if (!energy::is_learnable(m.kind)) throw std::runtime_error("non-learnable energy");
    if (instances.empty()) throw std::runtime_error("no training instances");
    TrainReport report;
    report.epochs = hp.epochs;
    report.seed = hp.seed;

    std::vector<TrainInstance> work(instances.begin(), instances.end());
    std::vector<size_t> order(work.size());
    std::iota(order.begin(), order.end(), size_t{0});

    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        auto shuffle_rng = substream(hp.seed, "shuffle", epoch);
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        auto neg_rng = substream(hp.seed, "negsample", epoch);
        for (size_t idx : order) {
            TrainInstance& t = work[idx];
            t.negatives = negative_sample(m, t.positives, t.x, hp.k_neg, neg_rng);
            sgd_step(m, t, hp.eta, hp.lambda);
        }
        double obj = 0;
        for (const auto& t : work) obj += instance_loglik(m, t, hp.lambda);
        report.objective_trace.push_back(obj);
    }
    report.final_param_norm = std::sqrt(m.parameter_sq_norm());
    return report;
}

}  // namespace medrank::learning
