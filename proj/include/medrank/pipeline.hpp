#pragma once

#include <string>
#include <vector>

#include "medrank/baselines.hpp"
#include "medrank/learning.hpp"
#include "medrank/metrics.hpp"
#include "medrank/synth.hpp"

namespace medrank::pipeline {

enum class MethodClass : uint8_t { Energy, Baseline, Random };

struct Method {
    MethodClass cls = MethodClass::Energy;
    energy::EnergyKind energy = energy::EnergyKind::Weight;
    baselines::BaselineKind baseline = baselines::BaselineKind::NaiveBayes;

    static Method parse(std::string_view s);  // throws on unknown name
    std::string name() const;
};

graph::Bigraph build_task_graph(const corpus::Corpus& train, TaskKind task,
                                bool positive_only_edges = false);

// Test-side instances surviving the X-vocabulary filter, plus drop counts for
// the evaluation summary.
struct EvalSet {
    std::vector<corpus::Instance> instances;
    size_t dropped_no_positive = 0;  // no positive X or Y entity
    size_t dropped_unknown_x = 0;    // more than half X entities outside the vocabulary
    size_t dropped_no_gold = 0;      // no gold entity inside the candidate part
};

EvalSet make_eval_set(const corpus::Corpus& test, const graph::Bigraph& b);

// Trains a learnable energy model on the train corpus (lazy kinds are just
// initialized).
struct TrainedModel {
    energy::EnergyModel model;
    learning::TrainReport report;
    size_t dropped_train = 0;
};
TrainedModel fit_energy(energy::EnergyKind kind, const corpus::Corpus& train, TaskKind task,
                        const energy::HyperParams& hp);

metrics::MetricReport evaluate_model(const energy::EnergyModel& m, EvalSet& eval);

metrics::MetricReport evaluate_baseline(baselines::BaselineKind kind,
                                        const corpus::Corpus& train, const graph::Bigraph& b,
                                        EvalSet& eval, uint64_t seed);

metrics::MetricReport evaluate_random(const graph::Bigraph& b, EvalSet& eval, uint64_t seed);

// Generator-oracle ranking evaluated on the same eval set.
metrics::MetricReport evaluate_oracle(const synth::GroundTruth& gt, const graph::Bigraph& b,
                                      EvalSet& eval);

// End to end: split handled by caller; trains when needed, then evaluates.
metrics::MetricReport run_method(const Method& method, const corpus::Corpus& train,
                                 const corpus::Corpus& test, TaskKind task,
                                 const energy::HyperParams& hp, EvalSet* eval_out = nullptr);

}  // namespace medrank::pipeline
