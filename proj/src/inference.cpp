#include "medrank/inference.hpp"

#include <algorithm>
#include <cmath>

namespace medrank::inference {

Assignment make_assignment(const graph::Bigraph& b,
                           const std::vector<std::pair<Entity, double>>& values) {
    Assignment a;
    for (const auto& [e, v] : values) {
        auto xi = b.x_index(e);
        if (!xi) throw std::runtime_error("unknown X entity: " + e.name);
        a.items.emplace_back(*xi, v);
    }
    std::sort(a.items.begin(), a.items.end());
    return a;
}

namespace {

double field_sum(const energy::EnergyModel& m, int y, const Assignment& a) {
    double s = 0;
    for (const auto& [x, v] : a.items)
        if (v != 0) s += m.f_value(y, x) * v;
    return s;
}

// exp(-S) / (exp(-S) + exp(S)) without overflow
double prob_from_field(double s) {
    double t = 2.0 * s;
    if (t >= 0) {
        double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

}  // namespace

double conditional_prob(const energy::EnergyModel& m, int y, const Assignment& a) {
    if (y < 0 || static_cast<size_t>(y) >= m.bigraph.y_part.size())
        throw std::runtime_error("y index out of range");
    return prob_from_field(field_sum(m, y, a));
}

double conditional_prob(const energy::EnergyModel& m, const Entity& y, const Assignment& a) {
    auto yi = m.bigraph.y_index(y);
    if (!yi) throw std::runtime_error("unknown Y entity: " + y.name);
    return conditional_prob(m, *yi, a);
}

RankedResult rank_candidates(const energy::EnergyModel& m, const Assignment& a) {
    RankedResult r;
    r.task = m.bigraph.task;
    r.ranking.reserve(m.bigraph.y_part.size());
    for (size_t y = 0; y < m.bigraph.y_part.size(); ++y)
        r.ranking.emplace_back(m.bigraph.y_part[y],
                               conditional_prob(m, static_cast<int>(y), a));
    std::sort(r.ranking.begin(), r.ranking.end(), [](const auto& l, const auto& rh) {
        if (l.second != rh.second) return l.second > rh.second;
        return l.first.name < rh.first.name;
    });
    return r;
}

double brute_force_conditional(const energy::EnergyModel& m, int y, const Assignment& a) {
    const size_t n = m.bigraph.y_part.size();
    if (n > 12) throw std::runtime_error("brute force oracle limited to |Y| <= 12");
    if (y < 0 || static_cast<size_t>(y) >= n) throw std::runtime_error("y index out of range");
    // Per-configuration energies reuse the per-node field sums; the joint is
    // their product since all cliques are edges.
    std::vector<double> field(n);
    for (size_t i = 0; i < n; ++i) field[i] = field_sum(m, static_cast<int>(i), a);
    double z = 0, marginal = 0;
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
        double e = 0;
        for (size_t i = 0; i < n; ++i) {
            double s = (mask >> i) & 1 ? 1.0 : -1.0;
            e += s * field[i];
        }
        double w = std::exp(-e);
        z += w;
        if ((mask >> y) & 1) marginal += w;
    }
    return marginal / z;
}

}  // namespace medrank::inference
