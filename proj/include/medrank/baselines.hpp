#pragma once

#include <random>
#include <unordered_map>
#include <vector>

#include "medrank/corpus.hpp"
#include "medrank/inference.hpp"

namespace medrank::baselines {

enum class BaselineKind : uint8_t { NaiveBayes, Logistic, Mlp };

std::string_view to_string(BaselineKind k);
BaselineKind baseline_kind_from_string(std::string_view s);

// Sparse X assignment values keyed by entity; zeros are not stored.
using SparseFeatures = std::vector<std::pair<Entity, double>>;

struct ClassifierDataset {
    std::vector<SparseFeatures> positives;
    std::vector<SparseFeatures> negatives;
    std::vector<Entity> kept_features;  // nonzero in at least one selected instance
    size_t shortfall = 0;               // positives minus available negatives
};

// Negatives are sampled to match the positive count, drawing first from
// instances that share at least one nonzero feature with some positive.
ClassifierDataset build_classifier_dataset(const std::vector<corpus::Instance>& instances,
                                           const Entity& y, std::mt19937_64& rng);

// Per-Y binary scorer; positive-class probability in [0, 1].
class Scorer {
  public:
    double score(const SparseFeatures& x) const;

    BaselineKind kind = BaselineKind::NaiveBayes;
    std::vector<Entity> kept_features;
    std::unordered_map<Entity, int, EntityHash> feature_index;

    // naive Bayes: categorical over 4 value bins per feature, add-one smoothed
    std::vector<double> nb_log_lik;  // [feature * 8 + cls * 4 + bin]
    double nb_log_prior[2] = {0, 0};

    // logistic regression
    std::vector<double> lr_w;
    double lr_b = 0;

    // single-hidden-layer perceptron
    int hidden = 16;
    std::vector<double> mlp_w1, mlp_b1, mlp_w2;
    double mlp_b2 = 0;
};

Scorer train_baseline(BaselineKind kind, const ClassifierDataset& data, uint64_t seed);

inference::RankedResult rank_candidates_baseline(
    const std::vector<std::pair<Entity, Scorer>>& scorers, const SparseFeatures& x,
    TaskKind task);

}  // namespace medrank::baselines
