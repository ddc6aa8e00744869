#pragma once

#include <unordered_map>
#include <vector>

#include "medrank/corpus.hpp"
#include "medrank/inference.hpp"

namespace medrank::synth {

// Planted-association corpus generator; the stand-in for real record data.
struct SynthConfig {
    int diseases = 20;
    int symptoms = 100;
    int tests = 40;
    int treatments = 30;
    int records = 500;
    double noise = 0.05;        // per-slot probability of a spurious mention (3 slots/record)
    double absent_rate = 0.05;  // probability an emitted mention flips to `absent`
    int min_diseases = 1;
    int max_diseases = 3;
    int symptoms_per_disease = 5;
    int tests_per_disease = 2;
    int treatments_per_disease = 2;
    double emission_min = 0.5;
    double emission_max = 0.9;
    int common_symptoms = 5;        // shared across all diseases
    double common_emission = 0.3;
    int clusters = 0;  // >0 partitions diseases and their symptom pools
    uint64_t seed = 42;

    void validate() const;
};

// The fixed default config; all pinned acceptance values are measured on it.
SynthConfig default_config();
// Two planted disease clusters with disjoint symptom pools.
SynthConfig two_cluster_config();

SynthConfig parse_synth_config(const std::string& path);

struct GroundTruth {
    std::unordered_map<Entity, std::vector<std::pair<Entity, double>>, EntityHash> by_y;

    double strength(const Entity& y, const Entity& x) const;
    // cluster id per disease when the config was clustered
    std::unordered_map<Entity, int, EntityHash> cluster_of;
};

std::pair<corpus::Corpus, GroundTruth> generate(const SynthConfig& cfg);

// Best-possible ranking given the generator: candidates scored by
// sum_j strength(y, x_j) * x_j, ties alphabetical.
inference::RankedResult oracle_rank(const GroundTruth& gt,
                                    const std::vector<std::pair<Entity, double>>& x,
                                    const std::vector<Entity>& candidates, TaskKind task);

void save_ground_truth(const GroundTruth& gt, const std::string& path);

}  // namespace medrank::synth
