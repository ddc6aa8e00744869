#pragma once

#include <random>
#include <vector>

#include "medrank/energy.hpp"
#include "medrank/inference.hpp"

namespace medrank::learning {

struct TrainInstance {
    inference::Assignment x;
    std::vector<int> positives;  // y indices with gold 1
    std::vector<int> negatives;  // sampled, treated as y = -1
};

// Positives come from the instance's gold labels; negatives start empty and
// are filled per epoch by the sampler.
TrainInstance to_train_instance(const graph::Bigraph& b, const corpus::Instance& inst);

// Sampled-objective log-likelihood of one instance plus the Gaussian-prior
// penalty -(lambda/2) * ||params||^2.
double instance_loglik(const energy::EnergyModel& m, const TrainInstance& t, double lambda);

// Negatives drawn from the union of each positive-valued X entity's k_neg
// lowest-f graph neighbors, topped up uniformly when that pool runs short.
std::vector<int> negative_sample(const energy::EnergyModel& m, const std::vector<int>& positives,
                                 const inference::Assignment& x, int k_neg,
                                 std::mt19937_64& rng);

// One gradient-ascent step on the instance objective; embeddings are
// renormalized afterwards.
void sgd_step(energy::EnergyModel& m, const TrainInstance& t, double eta, double lambda);

struct TrainReport {
    std::vector<double> objective_trace;  // one entry per epoch
    int epochs = 0;
    uint64_t seed = 0;
    double final_param_norm = 0;
};

TrainReport train(energy::EnergyModel& m, const std::vector<TrainInstance>& instances,
                  const energy::HyperParams& hp);

}  // namespace medrank::learning
