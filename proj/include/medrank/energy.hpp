#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "medrank/graph.hpp"
#include "medrank/types.hpp"

namespace medrank::energy {

// Weight/LogWeight/TfIdf are lazy (parameter-free, graph statistics only);
// Theta/LFM/Trans are learnable.
enum class EnergyKind : uint8_t { Weight, LogWeight, TfIdf, Theta, LFM, Trans };

bool is_learnable(EnergyKind k);
bool is_embedding(EnergyKind k);
std::string_view to_string(EnergyKind k);
EnergyKind energy_kind_from_string(std::string_view s);

struct HyperParams {
    int dim = 100;
    double gamma = -1.0;
    double eta = 0.05;
    double lambda = 1e-4;
    int epochs = 30;
    int k_neg = 50;
    uint64_t seed = 1;
};

// An energy function bound to a bigraph. f(Y_i, X_j) < 0 favors Y_i and X_j
// taking the same sign; the pair energy is f * (y_val * x_val).
struct EnergyModel {
    EnergyKind kind = EnergyKind::Weight;
    graph::Bigraph bigraph;
    HyperParams hp;

    std::vector<double> theta;  // per bigraph edge (Theta)
    std::vector<double> y_emb;  // |Y| x dim, row-major (LFM/Trans)
    std::vector<double> x_emb;  // |X| x dim
    std::vector<double> w_rel;  // dim x dim, row-major (LFM)
    std::vector<double> r_rel;  // dim (Trans)

    double f_value(int y, int x) const;
    double f_value(const Entity& y, const Entity& x) const;  // throws on unknown entity

    double pair_energy(int y, double y_val, int x, double x_val) const {
        return f_value(y, x) * (y_val * x_val);
    }
    double pair_energy(const Entity& y, double y_val, const Entity& x, double x_val) const;

    const double* y_vec(int y) const { return y_emb.data() + static_cast<size_t>(y) * hp.dim; }
    const double* x_vec(int x) const { return x_emb.data() + static_cast<size_t>(x) * hp.dim; }
    double* y_vec(int y) { return y_emb.data() + static_cast<size_t>(y) * hp.dim; }
    double* x_vec(int x) { return x_emb.data() + static_cast<size_t>(x) * hp.dim; }

    size_t parameter_count() const;
    double parameter_sq_norm() const;
};

// Pair-local pieces of ∂f/∂p. For LFM the W gradient factorizes as
// dW(a,k) = y_emb[a] * dfdu[k] and is not materialized here.
struct FGrad {
    double dtheta = 0;
    int edge = -1;
    std::vector<double> dy, dx;  // wrt the pair's embeddings
    std::vector<double> dr;      // Trans relation vector
    std::vector<double> dfdu;    // LFM: gradient wrt u = y^T W
};

FGrad f_grad(const EnergyModel& m, int y, int x);

// ∂ε/∂p for one pair (ε = f * y_val * x_val), with the LFM W gradient
// materialized. Throws for lazy kinds.
struct PairGrad {
    double dtheta = 0;
    std::vector<double> dy, dx, dr;
    std::vector<double> dw;  // dim x dim, row-major
};

PairGrad grad(const EnergyModel& m, const Entity& y, double y_val, const Entity& x, double x_val);

EnergyModel init_model(EnergyKind kind, const graph::Bigraph& b, const HyperParams& hp);

// Rescales every entity embedding to unit norm; a zero vector is replaced by
// a fresh seeded random unit vector.
void normalize_embeddings(EnergyModel& m);

// Top-n same-part entities by cosine similarity, ties by name.
std::vector<std::pair<Entity, double>> nearest_neighbors(const EnergyModel& m, const Entity& e,
                                                         size_t n);

// Self-describing text checkpoint; doubles are printed with enough digits to
// round-trip bit-exactly. config_lines are free-form provenance keys.
void save_checkpoint(const EnergyModel& m, const std::string& path,
                     const std::vector<std::pair<std::string, std::string>>& config_lines = {});
EnergyModel load_checkpoint(const std::string& path);

// One line per entity: name<TAB>kind<TAB>v1,v2,...,vd
void export_embeddings(const EnergyModel& m, std::ostream& out);

}  // namespace medrank::energy
