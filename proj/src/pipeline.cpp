#include "medrank/pipeline.hpp"

#include <algorithm>
#include <functional>

#include "medrank/rng.hpp"

namespace medrank::pipeline {

Method Method::parse(std::string_view s) {
    Method m;
    if (s == "random") {
        m.cls = MethodClass::Random;
        return m;
    }
    if (s == "naive_bayes" || s == "logistic" || s == "mlp") {
        m.cls = MethodClass::Baseline;
        m.baseline = baselines::baseline_kind_from_string(s);
        return m;
    }
    m.cls = MethodClass::Energy;
    m.energy = energy::energy_kind_from_string(s);
    return m;
}

std::string Method::name() const {
    switch (cls) {
        case MethodClass::Energy: return std::string(energy::to_string(energy));
        case MethodClass::Baseline: return std::string(baselines::to_string(baseline));
        case MethodClass::Random: return "random";
    }
    return "?";
}

graph::Bigraph build_task_graph(const corpus::Corpus& train, TaskKind task,
                                bool positive_only_edges) {
    return graph::extract_bigraph(graph::build_network(train, positive_only_edges), task);
}

EvalSet make_eval_set(const corpus::Corpus& test, const graph::Bigraph& b) {
    EvalSet out;
    auto made = corpus::make_instances(test, b.task);
    out.dropped_no_positive = made.dropped;
    auto filtered = corpus::filter_test_instances(made.instances, b.x_part);
    out.dropped_unknown_x = filtered.dropped;
    for (auto& inst : filtered.instances) {
        bool any_gold = false;
        for (const auto& [e, g] : inst.gold)
            if (g == 1 && b.y_index(e)) any_gold = true;
        if (!any_gold) {
            ++out.dropped_no_gold;
            continue;
        }
        out.instances.push_back(std::move(inst));
    }
    return out;
}

TrainedModel fit_energy(energy::EnergyKind kind, const corpus::Corpus& train, TaskKind task,
                        const energy::HyperParams& hp) {
    TrainedModel out;
    auto b = build_task_graph(train, task);
    out.model = energy::init_model(kind, b, hp);
    if (energy::is_learnable(kind)) {
        auto made = corpus::make_instances(train, task);
        out.dropped_train = made.dropped;
        std::vector<learning::TrainInstance> instances;
        for (const auto& inst : made.instances)
            instances.push_back(learning::to_train_instance(b, inst));
        out.report = learning::train(out.model, instances, hp);
    }
    return out;
}

namespace {

metrics::EvalInstance to_eval_instance(const corpus::Instance& inst, const graph::Bigraph& b,
                                       inference::RankedResult ranked) {
    metrics::EvalInstance e;
    e.ranked = std::move(ranked);
    for (const auto& [ent, g] : inst.gold)
        if (g == 1 && b.y_index(ent)) e.gold.insert(ent);
    return e;
}

metrics::MetricReport evaluate_with(
    const graph::Bigraph& b, EvalSet& eval,
    const std::function<inference::RankedResult(const corpus::Instance&, size_t)>& ranker) {
    std::vector<metrics::InstanceMetrics> rows;
    for (size_t i = 0; i < eval.instances.size(); ++i) {
        const auto& inst = eval.instances[i];
        auto e = to_eval_instance(inst, b, ranker(inst, i));
        rows.push_back(metrics::evaluate_instance(e));
    }
    return metrics::aggregate(rows);
}

}  // namespace

metrics::MetricReport evaluate_model(const energy::EnergyModel& m, EvalSet& eval) {
    return evaluate_with(m.bigraph, eval, [&m](const corpus::Instance& inst, size_t) {
        return inference::rank_candidates(m, inference::make_assignment(m.bigraph, inst.x));
    });
}

metrics::MetricReport evaluate_baseline(baselines::BaselineKind kind,
                                        const corpus::Corpus& train, const graph::Bigraph& b,
                                        EvalSet& eval, uint64_t seed) {
    auto made = corpus::make_instances(train, b.task);
    std::vector<std::pair<Entity, baselines::Scorer>> scorers;
    for (size_t yi = 0; yi < b.y_part.size(); ++yi) {
        const Entity& y = b.y_part[yi];
        bool has_positive = false;
        for (const auto& inst : made.instances)
            for (const auto& [e, g] : inst.gold)
                if (e == y && g == 1) has_positive = true;
        if (has_positive) {
            auto rng = substream(seed, "baseline-dataset", yi);
            auto data = baselines::build_classifier_dataset(made.instances, y, rng);
            scorers.emplace_back(y,
                                 baselines::train_baseline(kind, data, mix_seed(seed, "baseline", yi)));
        } else {
            // never-positive candidate: constant floor score
            baselines::Scorer floor;
            floor.kind = baselines::BaselineKind::Logistic;
            floor.lr_b = -30.0;
            scorers.emplace_back(y, std::move(floor));
        }
    }
    return evaluate_with(b, eval, [&scorers, &b](const corpus::Instance& inst, size_t) {
        return baselines::rank_candidates_baseline(scorers, inst.x, b.task);
    });
}

metrics::MetricReport evaluate_random(const graph::Bigraph& b, EvalSet& eval, uint64_t seed) {
    return evaluate_with(b, eval, [&b, seed](const corpus::Instance&, size_t i) {
        auto rng = substream(seed, "random-rank", i);
        inference::RankedResult r;
        r.task = b.task;
        for (const auto& y : b.y_part) r.ranking.emplace_back(y, uniform_real(rng, 0.0, 1.0));
        std::sort(r.ranking.begin(), r.ranking.end(), [](const auto& a, const auto& c) {
            if (a.second != c.second) return a.second > c.second;
            return a.first.name < c.first.name;
        });
        return r;
    });
}

metrics::MetricReport evaluate_oracle(const synth::GroundTruth& gt, const graph::Bigraph& b,
                                      EvalSet& eval) {
    return evaluate_with(b, eval, [&gt, &b](const corpus::Instance& inst, size_t) {
        return synth::oracle_rank(gt, inst.x, b.y_part, b.task);
    });
}

metrics::MetricReport run_method(const Method& method, const corpus::Corpus& train,
                                 const corpus::Corpus& test, TaskKind task,
                                 const energy::HyperParams& hp, EvalSet* eval_out) {
    auto b = build_task_graph(train, task);
    EvalSet eval = make_eval_set(test, b);
    metrics::MetricReport report;
    switch (method.cls) {
        case MethodClass::Energy: {
            auto trained = fit_energy(method.energy, train, task, hp);
            report = evaluate_model(trained.model, eval);
            break;
        }
        case MethodClass::Baseline:
            report = evaluate_baseline(method.baseline, train, b, eval, hp.seed);
            break;
        case MethodClass::Random:
            report = evaluate_random(b, eval, hp.seed);
            break;
    }
    if (eval_out) *eval_out = std::move(eval);
    return report;
}

}  // namespace medrank::pipeline
