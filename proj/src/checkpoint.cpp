#include <cstdio>
#include <fstream>
#include <sstream>

#include "medrank/energy.hpp"

namespace medrank::energy {

namespace {

constexpr const char* kMagic = "medrank-checkpoint v1";

std::string dbl(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_vector(std::ostream& out, const char* tag, const std::vector<double>& v,
                  size_t per_line) {
    out << tag << ' ' << v.size() << '\n';
    for (size_t i = 0; i < v.size(); ++i) {
        out << dbl(v[i]);
        out << (((i + 1) % per_line == 0 || i + 1 == v.size()) ? '\n' : ' ');
    }
}

std::vector<double> read_vector(std::istream& in, const std::string& tag) {
    std::string got;
    size_t n = 0;
    if (!(in >> got >> n) || got != tag)
        throw std::runtime_error("bad checkpoint: expected section '" + tag + "'");
    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i)
        if (!(in >> v[i])) throw std::runtime_error("bad checkpoint: truncated " + tag);
    return v;
}

void write_part(std::ostream& out, const char* tag, const std::vector<Entity>& part) {
    out << tag << ' ' << part.size() << '\n';
    for (const auto& e : part) out << e.name << '\t' << to_string(e.kind) << '\n';
}

std::vector<Entity> read_part(std::istream& in, const std::string& tag) {
    std::string got;
    size_t n = 0;
    if (!(in >> got >> n) || got != tag)
        throw std::runtime_error("bad checkpoint: expected section '" + tag + "'");
    std::string dummy;
    std::getline(in, dummy);
    std::vector<Entity> part(n);
    for (size_t i = 0; i < n; ++i) {
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("bad checkpoint: truncated " + tag);
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw std::runtime_error("bad checkpoint entity line");
        part[i].name = line.substr(0, tab);
        part[i].kind = entity_type_from_string(line.substr(tab + 1));
    }
    return part;
}

}  // namespace

void save_checkpoint(const EnergyModel& m, const std::string& path,
                     const std::vector<std::pair<std::string, std::string>>& config_lines) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << kMagic << '\n';
    for (const auto& [k, v] : config_lines) out << "# " << k << " = " << v << '\n';
    out << "kind " << to_string(m.kind) << '\n';
    out << "task " << to_string(m.bigraph.task) << '\n';
    out << "dim " << m.hp.dim << '\n';
    out << "gamma " << dbl(m.hp.gamma) << '\n';
    out << "eta " << dbl(m.hp.eta) << '\n';
    out << "lambda " << dbl(m.hp.lambda) << '\n';
    out << "epochs " << m.hp.epochs << '\n';
    out << "k_neg " << m.hp.k_neg << '\n';
    out << "seed " << m.hp.seed << '\n';
    write_part(out, "x_part", m.bigraph.x_part);
    write_part(out, "y_part", m.bigraph.y_part);
    out << "edges " << m.bigraph.edges.size() << '\n';
    for (const auto& e : m.bigraph.edges) out << e.y << ' ' << e.x << ' ' << e.weight << '\n';
    write_vector(out, "theta", m.theta, 8);
    write_vector(out, "y_emb", m.y_emb, std::max(1, m.hp.dim));
    write_vector(out, "x_emb", m.x_emb, std::max(1, m.hp.dim));
    write_vector(out, "w_rel", m.w_rel, std::max(1, m.hp.dim));
    write_vector(out, "r_rel", m.r_rel, std::max(1, m.hp.dim));
    out << "end\n";
}

EnergyModel load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kMagic)
        throw std::runtime_error("not a model checkpoint: " + path);
    while (in.peek() == '#') std::getline(in, line);

    EnergyModel m;
    auto expect = [&in](const char* key) {
        std::string got;
        if (!(in >> got) || got != key)
            throw std::runtime_error(std::string("bad checkpoint: expected '") + key + "'");
    };
    std::string s;
    expect("kind");
    in >> s;
    m.kind = energy_kind_from_string(s);
    expect("task");
    in >> s;
    m.bigraph.task = task_from_string(s);
    expect("dim");
    in >> m.hp.dim;
    expect("gamma");
    in >> m.hp.gamma;
    expect("eta");
    in >> m.hp.eta;
    expect("lambda");
    in >> m.hp.lambda;
    expect("epochs");
    in >> m.hp.epochs;
    expect("k_neg");
    in >> m.hp.k_neg;
    expect("seed");
    in >> m.hp.seed;
    std::getline(in, s);
    m.bigraph.x_part = read_part(in, "x_part");
    m.bigraph.y_part = read_part(in, "y_part");
    size_t n_edges = 0;
    expect("edges");
    in >> n_edges;
    m.bigraph.edges.resize(n_edges);
    m.bigraph.y_adj.assign(m.bigraph.y_part.size(), {});
    m.bigraph.x_adj.assign(m.bigraph.x_part.size(), {});
    for (size_t i = 0; i < n_edges; ++i) {
        auto& e = m.bigraph.edges[i];
        if (!(in >> e.y >> e.x >> e.weight))
            throw std::runtime_error("bad checkpoint: truncated edges");
        m.bigraph.edge_index[(static_cast<uint64_t>(e.y) << 32) | static_cast<uint32_t>(e.x)] =
            static_cast<int>(i);
        m.bigraph.y_adj[e.y].push_back(static_cast<int>(i));
        m.bigraph.x_adj[e.x].push_back(static_cast<int>(i));
    }
    m.theta = read_vector(in, "theta");
    m.y_emb = read_vector(in, "y_emb");
    m.x_emb = read_vector(in, "x_emb");
    m.w_rel = read_vector(in, "w_rel");
    m.r_rel = read_vector(in, "r_rel");
    expect("end");
    return m;
}

void export_embeddings(const EnergyModel& m, std::ostream& out) {
    if (!is_embedding(m.kind)) throw std::runtime_error("model has no embeddings");
    const int d = m.hp.dim;
    char buf[64];
    auto emit = [&](const std::vector<Entity>& part, const std::vector<double>& emb) {
        for (size_t i = 0; i < part.size(); ++i) {
            out << part[i].name << '\t' << to_string(part[i].kind) << '\t';
            for (int k = 0; k < d; ++k) {
                std::snprintf(buf, sizeof(buf), "%.9g", emb[i * d + k]);
                out << (k ? "," : "") << buf;
            }
            out << '\n';
        }
    };
    emit(m.bigraph.y_part, m.y_emb);
    emit(m.bigraph.x_part, m.x_emb);
}

}  // namespace medrank::energy
