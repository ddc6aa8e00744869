#include "medrank/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace medrank::metrics {

namespace {

size_t hits_in_top_k(const EvalInstance& e, size_t k) {
    size_t hits = 0;
    size_t limit = std::min(k, e.ranked.ranking.size());
    for (size_t i = 0; i < limit; ++i)
        if (e.gold.count(e.ranked.ranking[i].first)) ++hits;
    return hits;
}

}  // namespace

double precision_at_k(const EvalInstance& e, size_t k) {
    if (k == 0) throw std::runtime_error("k must be >= 1");
    return static_cast<double>(hits_in_top_k(e, k)) / static_cast<double>(k);
}

double recall_at_k(const EvalInstance& e, size_t k) {
    if (e.gold.empty()) throw std::runtime_error("instance has no gold entities");
    return static_cast<double>(hits_in_top_k(e, k)) / static_cast<double>(e.gold.size());
}

double average_precision(const EvalInstance& e) {
    if (e.gold.empty()) throw std::runtime_error("instance has no gold entities");
    double sum = 0;
    size_t found = 0;
    for (size_t i = 0; i < e.ranked.ranking.size(); ++i) {
        if (e.gold.count(e.ranked.ranking[i].first)) {
            ++found;
            sum += static_cast<double>(found) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(e.gold.size());
}

InstanceMetrics evaluate_instance(const EvalInstance& e) {
    InstanceMetrics m;
    m.p_at_m = precision_at_k(e, e.gold.size());
    m.r_at_10 = recall_at_k(e, 10);
    m.ap = average_precision(e);
    return m;
}

MetricReport aggregate(const std::vector<InstanceMetrics>& rows) {
    if (rows.empty()) throw std::runtime_error("no instances to aggregate");
    MetricReport r;
    r.rows = rows;
    size_t c01 = 0, c09 = 0;
    for (const auto& m : rows) {
        r.mp_at_r += m.p_at_m;
        r.map += m.ap;
        r.mr_at_10 += m.r_at_10;
        if (m.r_at_10 > 0.1) ++c01;
        if (m.r_at_10 > 0.9) ++c09;
    }
    double n = static_cast<double>(rows.size());
    r.mp_at_r /= n;
    r.map /= n;
    r.mr_at_10 /= n;
    r.frac_r10_gt_01 = c01 / n;
    r.frac_r10_gt_09 = c09 / n;
    return r;
}

}  // namespace medrank::metrics
