#pragma once

#include <utility>
#include <vector>

#include "medrank/energy.hpp"

namespace medrank::inference {

// Observed X values; absent entities are implicitly 0. Indices refer to the
// model's bigraph x_part.
struct Assignment {
    std::vector<std::pair<int, double>> items;  // (x index, value in [-1, 1])
};

// Builds an Assignment from entity/value pairs; entities missing from the
// bigraph are an error.
Assignment make_assignment(const graph::Bigraph& b,
                           const std::vector<std::pair<Entity, double>>& values);

struct RankedResult {
    TaskKind task = TaskKind::SD;
    std::vector<std::pair<Entity, double>> ranking;  // probability-descending, ties by name
};

// P(Y_i = 1 | x) under the per-node Ising conditional: with
// S = sum_j f(y, x_j) * x_j, returns exp(-S) / (exp(-S) + exp(S)).
double conditional_prob(const energy::EnergyModel& m, int y, const Assignment& a);
double conditional_prob(const energy::EnergyModel& m, const Entity& y, const Assignment& a);

RankedResult rank_candidates(const energy::EnergyModel& m, const Assignment& a);

// Test oracle: enumerates all {-1,+1}^|Y| joint configurations, computes the
// unnormalized joint from pair energies, and marginalizes. |Y| <= 12.
double brute_force_conditional(const energy::EnergyModel& m, int y, const Assignment& a);

}  // namespace medrank::inference
