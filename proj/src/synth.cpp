#include "medrank/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "medrank/rng.hpp"

namespace medrank::synth {

void SynthConfig::validate() const {
    if (diseases < 1 || symptoms < 1 || tests < 1 || treatments < 1 || records < 1)
        throw std::runtime_error("synth config: entity and record counts must be positive");
    if (noise < 0 || noise > 1 || absent_rate < 0 || absent_rate > 1)
        throw std::runtime_error("synth config: rates must be in [0, 1]");
    if (min_diseases < 1 || max_diseases < min_diseases || max_diseases > diseases)
        throw std::runtime_error("synth config: bad disease-per-record range");
    if (symptoms_per_disease < 1 || tests_per_disease < 1 || treatments_per_disease < 1)
        throw std::runtime_error("synth config: every disease needs associations of each kind");
    if (emission_min < 0 || emission_max > 1 || emission_min > emission_max)
        throw std::runtime_error("synth config: bad emission range");
    if (clusters < 0 || (clusters > 0 && (diseases % clusters || symptoms % clusters)))
        throw std::runtime_error("synth config: clusters must divide diseases and symptoms");
}

SynthConfig default_config() { return SynthConfig{}; }

SynthConfig two_cluster_config() {
    SynthConfig c;
    c.diseases = 20;
    c.symptoms = 30;
    c.tests = 10;
    c.treatments = 10;
    c.records = 1200;
    c.clusters = 2;
    c.common_symptoms = 0;
    c.noise = 0.02;
    c.absent_rate = 0.02;
    c.emission_min = 0.6;
    c.emission_max = 0.9;
    c.symptoms_per_disease = 6;
    return c;
}

SynthConfig parse_synth_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open synth config: " + path);
    SynthConfig c;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string key, eq, value;
        if (!(ls >> key)) continue;
        if (!(ls >> eq >> value) || eq != "=")
            throw std::runtime_error("synth config line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        try {
            if (key == "diseases") c.diseases = std::stoi(value);
            else if (key == "symptoms") c.symptoms = std::stoi(value);
            else if (key == "tests") c.tests = std::stoi(value);
            else if (key == "treatments") c.treatments = std::stoi(value);
            else if (key == "records") c.records = std::stoi(value);
            else if (key == "noise") c.noise = std::stod(value);
            else if (key == "absent_rate") c.absent_rate = std::stod(value);
            else if (key == "min_diseases") c.min_diseases = std::stoi(value);
            else if (key == "max_diseases") c.max_diseases = std::stoi(value);
            else if (key == "symptoms_per_disease") c.symptoms_per_disease = std::stoi(value);
            else if (key == "tests_per_disease") c.tests_per_disease = std::stoi(value);
            else if (key == "treatments_per_disease") c.treatments_per_disease = std::stoi(value);
            else if (key == "emission_min") c.emission_min = std::stod(value);
            else if (key == "emission_max") c.emission_max = std::stod(value);
            else if (key == "common_symptoms") c.common_symptoms = std::stoi(value);
            else if (key == "common_emission") c.common_emission = std::stod(value);
            else if (key == "clusters") c.clusters = std::stoi(value);
            else if (key == "seed") c.seed = std::stoull(value);
            else throw std::runtime_error("unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("synth config line " + std::to_string(line_no) +
                                     ": bad value for '" + key + "'");
        }
    }
    c.validate();
    return c;
}

double GroundTruth::strength(const Entity& y, const Entity& x) const {
    auto it = by_y.find(y);
    if (it == by_y.end()) return 0;
    for (const auto& [e, s] : it->second)
        if (e == x) return s;
    return 0;
}

namespace {

Entity named(const char* prefix, EntityType kind, int i) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s_%03d", prefix, i);
    return Entity{buf, kind};
}

std::vector<int> sample_distinct(std::mt19937_64& rng, int n, int k) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(uniform_index(rng, n - i));
        std::swap(all[i], all[j]);
    }
    all.resize(k);
    return all;
}

}  // namespace

std::pair<corpus::Corpus, GroundTruth> generate(const SynthConfig& cfg) {
    cfg.validate();
    std::vector<Entity> diseases, symptoms, tests, treatments;
    for (int i = 0; i < cfg.diseases; ++i) diseases.push_back(named("disease", EntityType::Disease, i));
    for (int i = 0; i < cfg.symptoms; ++i) symptoms.push_back(named("symptom", EntityType::Symptom, i));
    for (int i = 0; i < cfg.tests; ++i) tests.push_back(named("test", EntityType::Test, i));
    for (int i = 0; i < cfg.treatments; ++i)
        treatments.push_back(named("treatment", EntityType::Treatment, i));

    GroundTruth gt;
    auto assoc_rng = substream(cfg.seed, "assoc");
    for (int di = 0; di < cfg.diseases; ++di) {
        const Entity& d = diseases[di];
        auto& list = gt.by_y[d];
        int sym_lo = 0, sym_n = cfg.symptoms;
        if (cfg.clusters > 0) {
            int cluster = di / (cfg.diseases / cfg.clusters);
            gt.cluster_of[d] = cluster;
            sym_n = cfg.symptoms / cfg.clusters;
            sym_lo = cluster * sym_n;
        }
        int k_sym = std::min(cfg.symptoms_per_disease, sym_n);
        for (int s : sample_distinct(assoc_rng, sym_n, k_sym))
            list.emplace_back(symptoms[sym_lo + s],
                              uniform_real(assoc_rng, cfg.emission_min, cfg.emission_max));
        for (int i = 0; i < std::min(cfg.common_symptoms, cfg.symptoms); ++i)
            list.emplace_back(symptoms[cfg.symptoms - 1 - i], cfg.common_emission);
        for (int t : sample_distinct(assoc_rng, cfg.tests, std::min(cfg.tests_per_disease, cfg.tests)))
            list.emplace_back(tests[t], uniform_real(assoc_rng, cfg.emission_min, cfg.emission_max));
        for (int t : sample_distinct(assoc_rng, cfg.treatments,
                                     std::min(cfg.treatments_per_disease, cfg.treatments)))
            list.emplace_back(treatments[t],
                              uniform_real(assoc_rng, cfg.emission_min, cfg.emission_max));
    }
    // tests and treatments are also recommendation targets with the disease's
    // symptoms/diseases as observed side; derive their strengths from the
    // disease lists (max over sharing diseases)
    {
        std::unordered_map<Entity, std::unordered_map<Entity, double, EntityHash>, EntityHash> acc;
        for (const auto& d : diseases) {
            const auto& list = gt.by_y.at(d);
            for (const auto& [e, s] : list) {
                if (e.kind == EntityType::Treatment) {
                    double& v = acc[e][d];
                    v = std::max(v, s);
                } else if (e.kind == EntityType::Test) {
                    for (const auto& [e2, s2] : list)
                        if (e2.kind == EntityType::Symptom) {
                            double& v = acc[e][e2];
                            v = std::max(v, s * s2);
                        }
                }
            }
        }
        for (auto& [y, xs] : acc) {
            auto& list = gt.by_y[y];
            for (const auto& [x, s] : xs) list.emplace_back(x, s);
        }
    }

    corpus::Corpus c;
    c.provenance = "synthetic";
    auto rng = substream(cfg.seed, "records");
    std::vector<Entity> all_entities;
    all_entities.insert(all_entities.end(), diseases.begin(), diseases.end());
    all_entities.insert(all_entities.end(), symptoms.begin(), symptoms.end());
    all_entities.insert(all_entities.end(), tests.begin(), tests.end());
    all_entities.insert(all_entities.end(), treatments.begin(), treatments.end());

    for (int r = 0; r < cfg.records; ++r) {
        std::unordered_map<Entity, Modifier, EntityHash> mentions;
        auto add = [&mentions](const Entity& e, Modifier m) {
            auto it = mentions.find(e);
            if (it == mentions.end()) mentions.emplace(e, m);
            else if (corpus::assignment_value(m) > corpus::assignment_value(it->second))
                it->second = m;
        };
        int n_dis = cfg.min_diseases +
                    static_cast<int>(uniform_index(rng, cfg.max_diseases - cfg.min_diseases + 1));
        for (int di : sample_distinct(rng, cfg.diseases, n_dis)) {
            const Entity& d = diseases[di];
            add(d, Modifier::Present);
            for (const auto& [e, emission] : gt.by_y.at(d)) {
                if (e.kind == EntityType::Disease) continue;
                if (uniform_real(rng, 0, 1) < emission) {
                    Modifier m = uniform_real(rng, 0, 1) < cfg.absent_rate ? Modifier::Absent
                                                                           : Modifier::Present;
                    add(e, m);
                }
            }
        }
        for (int slot = 0; slot < 3; ++slot)
            if (uniform_real(rng, 0, 1) < cfg.noise)
                add(all_entities[uniform_index(rng, all_entities.size())], Modifier::Present);

        corpus::Record rec;
        char id[24];
        std::snprintf(id, sizeof(id), "synth-%05d", r);
        rec.id = id;
        for (const auto& [e, m] : mentions) rec.mentions.push_back({e, m});
        std::sort(rec.mentions.begin(), rec.mentions.end(),
                  [](const corpus::Mention& a, const corpus::Mention& b) {
                      return a.entity < b.entity;
                  });
        c.records.push_back(std::move(rec));
    }
    return {std::move(c), std::move(gt)};
}

inference::RankedResult oracle_rank(const GroundTruth& gt,
                                    const std::vector<std::pair<Entity, double>>& x,
                                    const std::vector<Entity>& candidates, TaskKind task) {
    inference::RankedResult r;
    r.task = task;
    for (const auto& y : candidates) {
        double score = 0;
        for (const auto& [xe, v] : x) score += gt.strength(y, xe) * v;
        r.ranking.emplace_back(y, score);
    }
    std::sort(r.ranking.begin(), r.ranking.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first.name < b.first.name;
    });
    return r;
}

void save_ground_truth(const GroundTruth& gt, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write ground truth: " + path);
    std::vector<Entity> ys;
    for (const auto& [y, _] : gt.by_y) ys.push_back(y);
    std::sort(ys.begin(), ys.end());
    char buf[32];
    for (const auto& y : ys) {
        auto list = gt.by_y.at(y);
        std::sort(list.begin(), list.end());
        for (const auto& [x, s] : list) {
            std::snprintf(buf, sizeof(buf), "%.9g", s);
            out << y.name << '\t' << x.name << '\t' << buf << '\n';
        }
    }
}

}  // namespace medrank::synth
