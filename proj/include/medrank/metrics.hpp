#pragma once

#include <unordered_set>
#include <vector>

#include "medrank/inference.hpp"

namespace medrank::metrics {

struct EvalInstance {
    inference::RankedResult ranked;
    std::unordered_set<Entity, EntityHash> gold;  // positive Y entities, m = |gold| >= 1
};

double precision_at_k(const EvalInstance& e, size_t k);
double recall_at_k(const EvalInstance& e, size_t k = 10);
double average_precision(const EvalInstance& e);

struct InstanceMetrics {
    double p_at_m = 0;   // P@k with k = number of gold entities
    double r_at_10 = 0;
    double ap = 0;
};

InstanceMetrics evaluate_instance(const EvalInstance& e);

struct MetricReport {
    double mp_at_r = 0;       // mean P@m
    double map = 0;
    double mr_at_10 = 0;
    double frac_r10_gt_01 = 0;  // strict >
    double frac_r10_gt_09 = 0;
    std::vector<InstanceMetrics> rows;
};

MetricReport aggregate(const std::vector<InstanceMetrics>& rows);

}  // namespace medrank::metrics
