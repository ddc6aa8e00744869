#include "medrank/graph.hpp"

#include <algorithm>

namespace medrank::graph {

namespace {

uint64_t pack(int lo, int hi) {
    return (static_cast<uint64_t>(lo) << 32) | static_cast<uint32_t>(hi);
}

bool entity_less(const Entity& a, const Entity& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.kind < b.kind;
}

double median_of(std::vector<int>& degs) {
    if (degs.empty()) return 0;
    std::sort(degs.begin(), degs.end());
    size_t n = degs.size();
    if (n % 2 == 1) return degs[n / 2];
    return (degs[n / 2 - 1] + degs[n / 2]) / 2.0;
}

}  // namespace

int CoocNetwork::weight(const Entity& a, const Entity& b) const {
    auto ia = node_index.find(a), ib = node_index.find(b);
    if (ia == node_index.end() || ib == node_index.end()) return 0;
    int lo = std::min(ia->second, ib->second), hi = std::max(ia->second, ib->second);
    auto it = edge_weight.find(pack(lo, hi));
    return it == edge_weight.end() ? 0 : it->second;
}

CoocNetwork build_network(const corpus::Corpus& train, bool positive_only_edges) {
    CoocNetwork g;
    for (const auto& rec : train.records)
        for (const auto& m : rec.mentions)
            if (!g.node_index.count(m.entity)) {
                g.node_index.emplace(m.entity, 0);
                g.nodes.push_back(m.entity);
            }
    std::sort(g.nodes.begin(), g.nodes.end(), entity_less);
    for (size_t i = 0; i < g.nodes.size(); ++i) g.node_index[g.nodes[i]] = static_cast<int>(i);

    for (const auto& rec : train.records) {
        std::vector<int> ids;
        for (const auto& m : rec.mentions) {
            if (positive_only_edges && corpus::assignment_value(m.modifier) <= 0) continue;
            ids.push_back(g.node_index.at(m.entity));
        }
        std::sort(ids.begin(), ids.end());
        for (size_t i = 0; i < ids.size(); ++i)
            for (size_t j = i + 1; j < ids.size(); ++j)
                ++g.edge_weight[pack(ids[i], ids[j])];
    }
    return g;
}

void Bigraph::build_lookup() const {
    if (lookup_built_) return;
    for (size_t i = 0; i < x_part.size(); ++i) x_lookup_.emplace(x_part[i], static_cast<int>(i));
    for (size_t i = 0; i < y_part.size(); ++i) y_lookup_.emplace(y_part[i], static_cast<int>(i));
    lookup_built_ = true;
}

std::optional<int> Bigraph::x_index(const Entity& e) const {
    build_lookup();
    auto it = x_lookup_.find(e);
    if (it == x_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> Bigraph::y_index(const Entity& e) const {
    build_lookup();
    auto it = y_lookup_.find(e);
    if (it == y_lookup_.end()) return std::nullopt;
    return it->second;
}

int Bigraph::edge_id(int y, int x) const {
    auto it = edge_index.find(pack(y, x));
    return it == edge_index.end() ? -1 : it->second;
}

int Bigraph::weight(int y, int x) const {
    int id = edge_id(y, x);
    return id < 0 ? 0 : edges[id].weight;
}

Bigraph extract_bigraph(const CoocNetwork& g, TaskKind task) {
    Bigraph b;
    b.task = task;
    const auto xs = x_kinds(task);
    const auto yk = y_kind(task);
    auto is_x = [&xs](EntityType k) { return std::find(xs.begin(), xs.end(), k) != xs.end(); };
    for (const auto& e : g.nodes) {
        if (is_x(e.kind)) b.x_part.push_back(e);
        else if (e.kind == yk) b.y_part.push_back(e);
    }
    // g.nodes is sorted, so the parts inherit (name, kind) order.
    std::unordered_map<int, int> node_to_x, node_to_y;
    for (size_t i = 0; i < b.x_part.size(); ++i)
        node_to_x[g.node_index.at(b.x_part[i])] = static_cast<int>(i);
    for (size_t i = 0; i < b.y_part.size(); ++i)
        node_to_y[g.node_index.at(b.y_part[i])] = static_cast<int>(i);

    for (const auto& [key, w] : g.edge_weight) {
        int lo = static_cast<int>(key >> 32), hi = static_cast<int>(key & 0xffffffffu);
        for (auto [a, c] : {std::pair{lo, hi}, std::pair{hi, lo}}) {
            auto yi = node_to_y.find(a);
            auto xi = node_to_x.find(c);
            if (yi != node_to_y.end() && xi != node_to_x.end())
                b.edges.push_back({yi->second, xi->second, w});
        }
    }
    // Deterministic edge ids regardless of hash-map iteration order.
    std::sort(b.edges.begin(), b.edges.end(), [](const BigraphEdge& a, const BigraphEdge& c) {
        return a.y != c.y ? a.y < c.y : a.x < c.x;
    });
    b.y_adj.resize(b.y_part.size());
    b.x_adj.resize(b.x_part.size());
    for (size_t i = 0; i < b.edges.size(); ++i) {
        const auto& e = b.edges[i];
        b.edge_index[pack(e.y, e.x)] = static_cast<int>(i);
        b.y_adj[e.y].push_back(static_cast<int>(i));
        b.x_adj[e.x].push_back(static_cast<int>(i));
    }
    return b;
}

DegreeStats degree_stats(const Bigraph& b) {
    DegreeStats s;
    s.x.size = b.x_part.size();
    s.y.size = b.y_part.size();
    std::vector<int> xd, yd;
    for (const auto& adj : b.x_adj) xd.push_back(static_cast<int>(adj.size()));
    for (const auto& adj : b.y_adj) yd.push_back(static_cast<int>(adj.size()));
    if (!xd.empty()) {
        s.x.degree_mean = 0;
        for (int d : xd) s.x.degree_mean += d;
        s.x.degree_mean /= xd.size();
        s.x.degree_median = median_of(xd);
    }
    if (!yd.empty()) {
        s.y.degree_mean = 0;
        for (int d : yd) s.y.degree_mean += d;
        s.y.degree_mean /= yd.size();
        s.y.degree_median = median_of(yd);
    }
    return s;
}

}  // namespace medrank::graph
