#include "medrank/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "medrank/rng.hpp"

namespace medrank::energy {

bool is_learnable(EnergyKind k) {
    return k == EnergyKind::Theta || k == EnergyKind::LFM || k == EnergyKind::Trans;
}

bool is_embedding(EnergyKind k) { return k == EnergyKind::LFM || k == EnergyKind::Trans; }

std::string_view to_string(EnergyKind k) {
    switch (k) {
        case EnergyKind::Weight: return "weight";
        case EnergyKind::LogWeight: return "log-weight";
        case EnergyKind::TfIdf: return "tf-idf";
        case EnergyKind::Theta: return "theta";
        case EnergyKind::LFM: return "lfm";
        case EnergyKind::Trans: return "trans";
    }
    return "?";
}

EnergyKind energy_kind_from_string(std::string_view s) {
    if (s == "weight") return EnergyKind::Weight;
    if (s == "log-weight" || s == "log_weight") return EnergyKind::LogWeight;
    if (s == "tf-idf" || s == "tf_idf") return EnergyKind::TfIdf;
    if (s == "theta") return EnergyKind::Theta;
    if (s == "lfm") return EnergyKind::LFM;
    if (s == "trans") return EnergyKind::Trans;
    throw std::runtime_error("unknown energy kind: " + std::string(s));
}

namespace {

double dot(const double* a, const double* b, int d) {
    double s = 0;
    for (int i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
}

double vec_norm(const double* a, int d) { return std::sqrt(dot(a, a, d)); }

// u = y^T W, i.e. u[k] = sum_a y[a] * W[a*d+k]
void left_multiply(const double* y, const double* w, int d, std::vector<double>& u) {
    u.assign(d, 0.0);
    for (int a = 0; a < d; ++a) {
        double ya = y[a];
        if (ya == 0) continue;
        const double* row = w + static_cast<size_t>(a) * d;
        for (int k = 0; k < d; ++k) u[k] += ya * row[k];
    }
}

}  // namespace

double EnergyModel::f_value(int y, int x) const {
    switch (kind) {
        case EnergyKind::Weight:
            return -static_cast<double>(bigraph.weight(y, x));
        case EnergyKind::LogWeight:
            return -std::log2(bigraph.weight(y, x) + 1.0);
        case EnergyKind::TfIdf: {
            int deg = bigraph.y_degree(y);
            if (deg == 0) return 0.0;
            double idf = std::log2(static_cast<double>(bigraph.x_part.size()) / deg);
            return -std::log2(bigraph.weight(y, x) + 1.0) * idf;
        }
        case EnergyKind::Theta: {
            int id = bigraph.edge_id(y, x);
            return id < 0 ? 0.0 : theta[id];
        }
        case EnergyKind::LFM: {
            const int d = hp.dim;
            std::vector<double> u;
            left_multiply(y_vec(y), w_rel.data(), d, u);
            double nu = vec_norm(u.data(), d);
            if (nu == 0) return 0.0;
            return -dot(u.data(), x_vec(x), d) / nu;
        }
        case EnergyKind::Trans: {
            const int d = hp.dim;
            const double* yv = y_vec(y);
            const double* xv = x_vec(x);
            double s = 0;
            for (int i = 0; i < d; ++i) {
                double v = yv[i] + r_rel[i] - xv[i];
                s += v * v;
            }
            return std::sqrt(s) + hp.gamma;
        }
    }
    return 0.0;
}

double EnergyModel::f_value(const Entity& y, const Entity& x) const {
    auto yi = bigraph.y_index(y);
    if (!yi) throw std::runtime_error("unknown Y entity: " + y.name);
    auto xi = bigraph.x_index(x);
    if (!xi) throw std::runtime_error("unknown X entity: " + x.name);
    return f_value(*yi, *xi);
}

double EnergyModel::pair_energy(const Entity& y, double y_val, const Entity& x,
                                double x_val) const {
    return f_value(y, x) * (y_val * x_val);
}

size_t EnergyModel::parameter_count() const {
    switch (kind) {
        case EnergyKind::Theta: return theta.size();
        case EnergyKind::LFM: return y_emb.size() + x_emb.size() + w_rel.size();
        case EnergyKind::Trans: return y_emb.size() + x_emb.size() + r_rel.size();
        default: return 0;
    }
}

double EnergyModel::parameter_sq_norm() const {
    auto sq = [](const std::vector<double>& v) {
        return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
    };
    switch (kind) {
        case EnergyKind::Theta: return sq(theta);
        case EnergyKind::LFM: return sq(y_emb) + sq(x_emb) + sq(w_rel);
        case EnergyKind::Trans: return sq(y_emb) + sq(x_emb) + sq(r_rel);
        default: return 0;
    }
}

FGrad f_grad(const EnergyModel& m, int y, int x) {
    if (!is_learnable(m.kind)) throw std::runtime_error("non-learnable energy");
    FGrad g;
    const int d = m.hp.dim;
    switch (m.kind) {
        case EnergyKind::Theta: {
            g.edge = m.bigraph.edge_id(y, x);
            g.dtheta = g.edge < 0 ? 0.0 : 1.0;
            break;
        }
        case EnergyKind::LFM: {
            const double* yv = m.y_vec(y);
            const double* xv = m.x_vec(x);
            std::vector<double> u;
            left_multiply(yv, m.w_rel.data(), d, u);
            double nu = vec_norm(u.data(), d);
            g.dy.assign(d, 0.0);
            g.dx.assign(d, 0.0);
            g.dfdu.assign(d, 0.0);
            if (nu == 0) break;
            double ux = dot(u.data(), xv, d);
            // f = -(u.x)/|u|; df/du = -x/|u| + (u.x) u / |u|^3
            for (int k = 0; k < d; ++k)
                g.dfdu[k] = -xv[k] / nu + ux * u[k] / (nu * nu * nu);
            for (int a = 0; a < d; ++a)
                g.dy[a] = dot(m.w_rel.data() + static_cast<size_t>(a) * d, g.dfdu.data(), d);
            for (int k = 0; k < d; ++k) g.dx[k] = -u[k] / nu;
            break;
        }
        case EnergyKind::Trans: {
            const double* yv = m.y_vec(y);
            const double* xv = m.x_vec(x);
            std::vector<double> v(d);
            double s = 0;
            for (int i = 0; i < d; ++i) {
                v[i] = yv[i] + m.r_rel[i] - xv[i];
                s += v[i] * v[i];
            }
            double n = std::sqrt(s);
            g.dy.assign(d, 0.0);
            g.dx.assign(d, 0.0);
            g.dr.assign(d, 0.0);
            if (n == 0) break;
            for (int i = 0; i < d; ++i) {
                g.dy[i] = v[i] / n;
                g.dr[i] = v[i] / n;
                g.dx[i] = -v[i] / n;
            }
            break;
        }
        default: break;
    }
    return g;
}

PairGrad grad(const EnergyModel& m, const Entity& y, double y_val, const Entity& x,
              double x_val) {
    if (!is_learnable(m.kind)) throw std::runtime_error("non-learnable energy");
    auto yi = m.bigraph.y_index(y);
    if (!yi) throw std::runtime_error("unknown Y entity: " + y.name);
    auto xi = m.bigraph.x_index(x);
    if (!xi) throw std::runtime_error("unknown X entity: " + x.name);
    const double c = y_val * x_val;
    FGrad fg = f_grad(m, *yi, *xi);
    PairGrad pg;
    const int d = m.hp.dim;
    if (m.kind == EnergyKind::Theta) {
        pg.dtheta = c * fg.dtheta;
        return pg;
    }
    pg.dy.resize(d);
    pg.dx.resize(d);
    for (int i = 0; i < d; ++i) {
        pg.dy[i] = c * fg.dy[i];
        pg.dx[i] = c * fg.dx[i];
    }
    if (m.kind == EnergyKind::Trans) {
        pg.dr.resize(d);
        for (int i = 0; i < d; ++i) pg.dr[i] = c * fg.dr[i];
    } else {
        pg.dw.assign(static_cast<size_t>(d) * d, 0.0);
        const double* yv = m.y_vec(*yi);
        for (int a = 0; a < d; ++a)
            for (int k = 0; k < d; ++k) pg.dw[static_cast<size_t>(a) * d + k] = c * yv[a] * fg.dfdu[k];
    }
    return pg;
}

namespace {

void random_unit_rows(std::vector<double>& rows, int d, std::mt19937_64& rng) {
    double bound = 6.0 / std::sqrt(static_cast<double>(d));
    for (size_t start = 0; start < rows.size(); start += d) {
        double* v = rows.data() + start;
        double n = 0;
        do {
            n = 0;
            for (int i = 0; i < d; ++i) {
                v[i] = uniform_real(rng, -bound, bound);
                n += v[i] * v[i];
            }
            n = std::sqrt(n);
        } while (n == 0);
        for (int i = 0; i < d; ++i) v[i] /= n;
    }
}

}  // namespace

EnergyModel init_model(EnergyKind kind, const graph::Bigraph& b, const HyperParams& hp) {
    if (hp.dim < 2 && is_embedding(kind)) throw std::runtime_error("dim must be >= 2");
    EnergyModel m;
    m.kind = kind;
    m.bigraph = b;
    m.hp = hp;
    if (kind == EnergyKind::Theta) {
        m.theta.assign(b.edges.size(), 0.0);
    } else if (is_embedding(kind)) {
        const int d = hp.dim;
        m.y_emb.assign(b.y_part.size() * static_cast<size_t>(d), 0.0);
        m.x_emb.assign(b.x_part.size() * static_cast<size_t>(d), 0.0);
        auto rng = substream(hp.seed, "init");
        random_unit_rows(m.y_emb, d, rng);
        random_unit_rows(m.x_emb, d, rng);
        if (kind == EnergyKind::LFM) {
            m.w_rel.assign(static_cast<size_t>(d) * d, 0.0);
            for (int i = 0; i < d; ++i) m.w_rel[static_cast<size_t>(i) * d + i] = 1.0;
        } else {
            m.r_rel.assign(d, 0.0);
        }
    }
    return m;
}

void normalize_embeddings(EnergyModel& m) {
    if (!is_embedding(m.kind)) throw std::runtime_error("model has no embeddings");
    const int d = m.hp.dim;
    uint64_t rescue = 0;
    auto normalize_rows = [&](std::vector<double>& rows) {
        for (size_t start = 0; start < rows.size(); start += d) {
            double* v = rows.data() + start;
            double n = vec_norm(v, d);
            if (n == 0) {
                auto rng = substream(m.hp.seed, "renorm-rescue", rescue++);
                std::vector<double> one(d);
                random_unit_rows(one, d, rng);
                std::copy(one.begin(), one.end(), v);
                continue;
            }
            for (int i = 0; i < d; ++i) v[i] /= n;
        }
    };
    normalize_rows(m.y_emb);
    normalize_rows(m.x_emb);
}

std::vector<std::pair<Entity, double>> nearest_neighbors(const EnergyModel& m, const Entity& e,
                                                         size_t n) {
    if (!is_embedding(m.kind)) throw std::runtime_error("model has no embeddings");
    const int d = m.hp.dim;
    const std::vector<Entity>* part = nullptr;
    const std::vector<double>* emb = nullptr;
    int idx = -1;
    if (auto yi = m.bigraph.y_index(e)) {
        part = &m.bigraph.y_part;
        emb = &m.y_emb;
        idx = *yi;
    } else if (auto xi = m.bigraph.x_index(e)) {
        part = &m.bigraph.x_part;
        emb = &m.x_emb;
        idx = *xi;
    } else {
        throw std::runtime_error("unknown entity: " + e.name);
    }
    const double* ev = emb->data() + static_cast<size_t>(idx) * d;
    double en = vec_norm(ev, d);
    std::vector<std::pair<Entity, double>> scored;
    for (size_t i = 0; i < part->size(); ++i) {
        if (static_cast<int>(i) == idx) continue;
        const double* ov = emb->data() + i * d;
        double on = vec_norm(ov, d);
        double cos = (en == 0 || on == 0) ? 0.0 : dot(ev, ov, d) / (en * on);
        scored.emplace_back((*part)[i], cos);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first.name < b.first.name;
    });
    if (scored.size() > n) scored.resize(n);
    return scored;
}

}  // namespace medrank::energy
