#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "medrank/pipeline.hpp"
#include "medrank/rng.hpp"

namespace {

using namespace medrank;

struct RunConfig {
    std::string corpus_path;
    std::string model_path;
    std::string out_path;
    std::string task = "sd";
    std::string method = "weight";
    energy::HyperParams hp;
    size_t n_train = 700;
    bool positive_only_edges = false;

    std::vector<std::pair<std::string, std::string>> provenance() const {
        std::vector<std::pair<std::string, std::string>> lines;
        lines.emplace_back("task", task);
        lines.emplace_back("method", method);
        lines.emplace_back("corpus", corpus_path);
        lines.emplace_back("dim", std::to_string(hp.dim));
        lines.emplace_back("gamma", std::to_string(hp.gamma));
        lines.emplace_back("eta", std::to_string(hp.eta));
        lines.emplace_back("lambda", std::to_string(hp.lambda));
        lines.emplace_back("epochs", std::to_string(hp.epochs));
        lines.emplace_back("k_neg", std::to_string(hp.k_neg));
        lines.emplace_back("seed", std::to_string(hp.seed));
        lines.emplace_back("n_train", std::to_string(n_train));
        return lines;
    }
};

void add_common_flags(CLI::App* cmd, RunConfig& cfg, bool with_hyper = true) {
    cmd->add_option("--corpus", cfg.corpus_path, "record file path");
    cmd->add_option("--task", cfg.task, "sd|dtr|st")->default_str(cfg.task);
    cmd->add_option("--seed", cfg.hp.seed, "master seed");
    cmd->add_option("--n-train", cfg.n_train, "records in the training split");
    if (with_hyper) {
        cmd->add_option("--method", cfg.method,
                        "weight|log-weight|tf-idf|theta|lfm|trans|naive_bayes|logistic|mlp|random");
        cmd->add_option("--dim", cfg.hp.dim, "embedding dimension");
        cmd->add_option("--gamma", cfg.hp.gamma, "translation energy bias");
        cmd->add_option("--eta", cfg.hp.eta, "learning rate");
        cmd->add_option("--lambda", cfg.hp.lambda, "L2 regularization strength");
        cmd->add_option("--epochs", cfg.hp.epochs, "training epochs");
        cmd->add_option("--k-neg", cfg.hp.k_neg, "neighbor-list size for negative sampling");
    }
    cmd->set_config("--config", "", "flat key = value config file");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    return out;
}

void write_provenance(std::ostream& out, const RunConfig& cfg) {
    for (const auto& [k, v] : cfg.provenance()) out << "# " << k << " = " << v << '\n';
}

std::pair<corpus::Corpus, corpus::Corpus> load_and_split(const RunConfig& cfg) {
    auto full = corpus::load_corpus(cfg.corpus_path);
    return corpus::split_corpus(full, cfg.hp.seed, cfg.n_train);
}

void print_part_stats(std::ostream& out, const char* subgraph, const char* part,
                      const graph::PartStats& s) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s\t%s\t%zu\t%.2f\t%.2f", subgraph, part, s.size,
                  s.degree_mean, s.degree_median);
    out << buf << '\n';
}

int cmd_synth_gen(const std::string& config_path, const std::string& records_out,
                  const std::string& truth_out) {
    synth::SynthConfig cfg =
        config_path.empty() ? synth::default_config() : synth::parse_synth_config(config_path);
    auto [c, gt] = synth::generate(cfg);
    corpus::save_corpus(c, records_out);
    if (!truth_out.empty()) synth::save_ground_truth(gt, truth_out);
    std::cerr << "wrote " << c.records.size() << " records to " << records_out << '\n';
    return 0;
}

int cmd_stats(const RunConfig& cfg) {
    auto c = corpus::load_corpus(cfg.corpus_path);
    auto net = graph::build_network(c, cfg.positive_only_edges);
    std::cout << "subgraph\tpart\tsize\tdegree_mean\tdegree_median\n";
    for (auto task : {TaskKind::SD, TaskKind::DTr, TaskKind::ST}) {
        auto b = graph::extract_bigraph(net, task);
        auto s = graph::degree_stats(b);
        std::string name = std::string(to_string(task));
        print_part_stats(std::cout, name.c_str(), "X", s.x);
        print_part_stats(std::cout, name.c_str(), "Y", s.y);
    }
    return 0;
}

int cmd_build_graph(const RunConfig& cfg) {
    auto [train, test] = load_and_split(cfg);
    auto b = pipeline::build_task_graph(train, task_from_string(cfg.task),
                                        cfg.positive_only_edges);
    auto out = open_out(cfg.out_path);
    write_provenance(out, cfg);
    for (const auto& e : b.edges)
        out << b.y_part[e.y].name << '\t' << b.x_part[e.x].name << '\t' << e.weight << '\n';
    auto s = graph::degree_stats(b);
    std::cerr << "x part: " << s.x.size << " nodes, mean degree " << s.x.degree_mean
              << "; y part: " << s.y.size << " nodes, mean degree " << s.y.degree_mean << '\n';
    return 0;
}

int cmd_train(const RunConfig& cfg) {
    auto method = pipeline::Method::parse(cfg.method);
    if (method.cls != pipeline::MethodClass::Energy || !energy::is_learnable(method.energy))
        throw std::runtime_error("train requires a learnable energy method (theta|lfm|trans)");
    auto [train, test] = load_and_split(cfg);
    auto fitted =
        pipeline::fit_energy(method.energy, train, task_from_string(cfg.task), cfg.hp);
    energy::save_checkpoint(fitted.model, cfg.out_path, cfg.provenance());
    auto loss = open_out(cfg.out_path + ".loss.csv");
    write_provenance(loss, cfg);
    loss << "epoch,objective\n";
    char buf[48];
    for (size_t i = 0; i < fitted.report.objective_trace.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.9g\n", i + 1, fitted.report.objective_trace[i]);
        loss << buf;
    }
    std::cerr << "trained " << cfg.method << " for " << fitted.report.epochs << " epochs ("
              << fitted.dropped_train << " records dropped); checkpoint: " << cfg.out_path
              << '\n';
    return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
    auto [train, test] = load_and_split(cfg);
    metrics::MetricReport report;
    pipeline::EvalSet eval;
    std::string method_name = cfg.method;
    if (!cfg.model_path.empty()) {
        auto m = energy::load_checkpoint(cfg.model_path);
        method_name = std::string(energy::to_string(m.kind));
        eval = pipeline::make_eval_set(test, m.bigraph);
        if (eval.instances.empty())
            throw std::runtime_error(
                "no evaluable test instances: checkpoint vocabulary does not match the corpus");
        report = pipeline::evaluate_model(m, eval);
    } else {
        auto method = pipeline::Method::parse(cfg.method);
        report = pipeline::run_method(method, train, test, task_from_string(cfg.task), cfg.hp,
                                      &eval);
    }
    std::ostream& out = std::cout;
    write_provenance(out, cfg);
    out << "# evaluated = " << eval.instances.size()
        << ", dropped_no_positive = " << eval.dropped_no_positive
        << ", dropped_unknown_x = " << eval.dropped_unknown_x
        << ", dropped_no_gold = " << eval.dropped_no_gold << '\n';
    out << "method\tMP@R\tMAP\tMR@10\tR@10>0.1\tR@10>0.9\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s\t%.4f\t%.4f\t%.4f\t%.4f\t%.4f\n", method_name.c_str(),
                  report.mp_at_r, report.map, report.mr_at_10, report.frac_r10_gt_01,
                  report.frac_r10_gt_09);
    out << buf;
    return 0;
}

int cmd_rank(const RunConfig& cfg, const std::string& queries_path, size_t top_n) {
    auto m = energy::load_checkpoint(cfg.model_path);
    std::ifstream in(queries_path);
    if (!in) throw std::runtime_error("cannot open queries file: " + queries_path);
    std::string line;
    size_t query_no = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        ++query_no;
        std::vector<std::pair<Entity, double>> values;
        std::istringstream ls(line);
        std::string item;
        while (std::getline(ls, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("bad query item '" + item + "': expected entity=value");
            std::string name = item.substr(0, eq);
            double v = std::stod(item.substr(eq + 1));
            const Entity* found = nullptr;
            for (const auto& e : m.bigraph.x_part)
                if (e.name == name) {
                    if (found) throw std::runtime_error("ambiguous entity name: " + name);
                    found = &e;
                }
            if (!found) throw std::runtime_error("unknown X entity: " + name);
            values.emplace_back(*found, v);
        }
        auto ranked = inference::rank_candidates(m, inference::make_assignment(m.bigraph, values));
        std::cout << "# query " << query_no << ": " << line << '\n';
        char buf[160];
        for (size_t i = 0; i < std::min(top_n, ranked.ranking.size()); ++i) {
            std::snprintf(buf, sizeof(buf), "%zu\t%s\t%.6f\n", i + 1,
                          ranked.ranking[i].first.name.c_str(), ranked.ranking[i].second);
            std::cout << buf;
        }
    }
    return 0;
}

int cmd_neighbors(const RunConfig& cfg, const std::string& entity_name, size_t top_n) {
    auto m = energy::load_checkpoint(cfg.model_path);
    const Entity* found = nullptr;
    auto scan = [&](const std::vector<Entity>& part) {
        for (const auto& e : part)
            if (e.name == entity_name) found = &e;
    };
    scan(m.bigraph.y_part);
    if (!found) scan(m.bigraph.x_part);
    if (!found) throw std::runtime_error("unknown entity: " + entity_name);
    char buf[160];
    for (const auto& [e, cos] : energy::nearest_neighbors(m, *found, top_n)) {
        std::snprintf(buf, sizeof(buf), "%s\t%s\t%.6f\n", e.name.c_str(),
                      std::string(to_string(e.kind)).c_str(), cos);
        std::cout << buf;
    }
    return 0;
}

int cmd_export_embeddings(const RunConfig& cfg) {
    auto m = energy::load_checkpoint(cfg.model_path);
    auto out = open_out(cfg.out_path);
    energy::export_embeddings(m, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bipartite co-occurrence MRF recommender for structured medical records"};
    app.require_subcommand(1);
    RunConfig cfg;

    std::string synth_config, records_out, truth_out, queries_path, entity_name;
    size_t top_n = 10;

    auto* synth_cmd = app.add_subcommand("synth-gen", "generate a synthetic corpus");
    synth_cmd->add_option("--config", synth_config, "synth config file (key = value)");
    synth_cmd->add_option("--out", records_out, "output record file")->required();
    synth_cmd->add_option("--truth-out", truth_out, "planted ground-truth file");

    auto* stats_cmd = app.add_subcommand("stats", "per-task bigraph degree statistics");
    add_common_flags(stats_cmd, cfg, false);

    auto* build_cmd = app.add_subcommand("build-graph", "export a task bigraph edge list");
    add_common_flags(build_cmd, cfg, false);
    build_cmd->add_option("--out", cfg.out_path, "edge list output")->required();

    auto* train_cmd = app.add_subcommand("train", "train a learnable energy model");
    add_common_flags(train_cmd, cfg);
    train_cmd->add_option("--out", cfg.out_path, "checkpoint output")->required();

    auto* eval_cmd = app.add_subcommand("evaluate", "IR-style evaluation on the test split");
    add_common_flags(eval_cmd, cfg);
    eval_cmd->add_option("--model", cfg.model_path, "trained checkpoint (overrides --method)");

    auto* rank_cmd = app.add_subcommand("rank", "rank candidates for assignment queries");
    rank_cmd->add_option("--model", cfg.model_path, "trained checkpoint")->required();
    rank_cmd->add_option("--queries", queries_path, "one 'entity=value,...' line per query")
        ->required();
    rank_cmd->add_option("--top", top_n, "results per query");

    auto* nn_cmd = app.add_subcommand("neighbors", "nearest neighbors in embedding space");
    nn_cmd->add_option("--model", cfg.model_path, "trained checkpoint")->required();
    nn_cmd->add_option("--entity", entity_name, "entity name")->required();
    nn_cmd->add_option("--top", top_n, "neighbor count");

    auto* export_cmd = app.add_subcommand("export-embeddings", "write entity embeddings");
    export_cmd->add_option("--model", cfg.model_path, "trained checkpoint")->required();
    export_cmd->add_option("--out", cfg.out_path, "embedding file")->required();

    for (auto* c : {stats_cmd, build_cmd, train_cmd, eval_cmd})
        c->add_flag("--positive-only-edges", cfg.positive_only_edges,
                    "count co-occurrence only for positive mentions");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth_cmd->parsed()) return cmd_synth_gen(synth_config, records_out, truth_out);
        if (stats_cmd->parsed()) return cmd_stats(cfg);
        if (build_cmd->parsed()) return cmd_build_graph(cfg);
        if (train_cmd->parsed()) return cmd_train(cfg);
        if (eval_cmd->parsed()) return cmd_evaluate(cfg);
        if (rank_cmd->parsed()) return cmd_rank(cfg, queries_path, top_n);
        if (nn_cmd->parsed()) return cmd_neighbors(cfg, entity_name, top_n);
        if (export_cmd->parsed()) return cmd_export_embeddings(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
