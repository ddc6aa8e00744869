#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "medrank/corpus.hpp"
#include "medrank/types.hpp"

namespace medrank::graph {

// Co-occurrence knowledge network over all record entities; edge weight is
// the number of records in which both endpoints appear.
struct CoocNetwork {
    std::vector<Entity> nodes;  // sorted by (name, kind)
    std::unordered_map<Entity, int, EntityHash> node_index;
    // Symmetric weights stored once per unordered pair, keyed by packed
    // (min_index, max_index).
    std::unordered_map<uint64_t, int> edge_weight;

    int weight(const Entity& a, const Entity& b) const;
};

struct BigraphEdge {
    int y = 0;  // index into y_part
    int x = 0;  // index into x_part
    int weight = 0;
};

struct Bigraph {
    TaskKind task = TaskKind::SD;
    std::vector<Entity> x_part;  // sorted by (name, kind); includes isolated nodes
    std::vector<Entity> y_part;
    std::vector<BigraphEdge> edges;
    std::unordered_map<uint64_t, int> edge_index;  // (y<<32|x) -> edge id
    std::vector<std::vector<int>> y_adj;           // edge ids per y
    std::vector<std::vector<int>> x_adj;           // edge ids per x

    std::optional<int> x_index(const Entity& e) const;
    std::optional<int> y_index(const Entity& e) const;
    // -1 when the pair has no edge
    int edge_id(int y, int x) const;
    int weight(int y, int x) const;
    int y_degree(int y) const { return static_cast<int>(y_adj[y].size()); }
    int x_degree(int x) const { return static_cast<int>(x_adj[x].size()); }

  private:
    mutable std::unordered_map<Entity, int, EntityHash> x_lookup_, y_lookup_;
    mutable bool lookup_built_ = false;
    void build_lookup() const;
};

struct PartStats {
    size_t size = 0;
    double degree_mean = 0;
    double degree_median = 0;
};

struct DegreeStats {
    PartStats x;
    PartStats y;
};

// positive_only_edges: count a co-occurrence only when both mentions have a
// positive assignment value.
CoocNetwork build_network(const corpus::Corpus& train, bool positive_only_edges = false);

Bigraph extract_bigraph(const CoocNetwork& g, TaskKind task);

DegreeStats degree_stats(const Bigraph& b);

}  // namespace medrank::graph
