#pragma once

#include <random>
#include <sstream>
#include <string>

#include "medrank/energy.hpp"
#include "medrank/inference.hpp"
#include "medrank/rng.hpp"

namespace test_helpers {

using namespace medrank;

inline corpus::Corpus corpus_from_text(const std::string& text) {
    std::istringstream in(text);
    return corpus::parse_corpus(in, "test");
}

inline graph::Bigraph random_bigraph(std::mt19937_64& rng, int ny, int nx, double p_edge,
                                     TaskKind task = TaskKind::SD) {
    graph::Bigraph b;
    b.task = task;
    for (int i = 0; i < ny; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "y%02d", i);
        b.y_part.push_back({buf, y_kind(task)});
    }
    for (int j = 0; j < nx; ++j) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "x%02d", j);
        b.x_part.push_back({buf, x_kinds(task)[0]});
    }
    b.y_adj.resize(ny);
    b.x_adj.resize(nx);
    for (int i = 0; i < ny; ++i)
        for (int j = 0; j < nx; ++j) {
            if (uniform_real(rng, 0, 1) >= p_edge) continue;
            int id = static_cast<int>(b.edges.size());
            int w = 1 + static_cast<int>(uniform_index(rng, 5));
            b.edges.push_back({i, j, w});
            b.edge_index[(static_cast<uint64_t>(i) << 32) | static_cast<uint32_t>(j)] = id;
            b.y_adj[i].push_back(id);
            b.x_adj[j].push_back(id);
        }
    return b;
}

// learnable model with randomized parameters on a random bigraph
inline energy::EnergyModel random_model(energy::EnergyKind kind, std::mt19937_64& rng, int ny,
                                        int nx, int dim = 4, double p_edge = 0.7) {
    auto b = random_bigraph(rng, ny, nx, p_edge);
    energy::HyperParams hp;
    hp.dim = dim;
    hp.seed = rng();
    auto m = energy::init_model(kind, b, hp);
    if (kind == energy::EnergyKind::Theta) {
        for (auto& t : m.theta) t = uniform_real(rng, -2, 2);
    } else {
        for (auto& v : m.y_emb) v = uniform_real(rng, -1, 1);
        for (auto& v : m.x_emb) v = uniform_real(rng, -1, 1);
        for (auto& v : m.w_rel) v = uniform_real(rng, -1, 1);
        for (auto& v : m.r_rel) v = uniform_real(rng, -0.5, 0.5);
        energy::normalize_embeddings(m);
    }
    return m;
}

inline inference::Assignment random_assignment(std::mt19937_64& rng, int nx,
                                               double p_nonzero = 0.7) {
    inference::Assignment a;
    for (int j = 0; j < nx; ++j) {
        if (uniform_real(rng, 0, 1) >= p_nonzero) continue;
        double vals[] = {-1.0, 0.5, 1.0};
        a.items.emplace_back(j, vals[uniform_index(rng, 3)]);
    }
    return a;
}

}  // namespace test_helpers
