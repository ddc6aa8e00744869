#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "medrank/learning.hpp"
#include "medrank/metrics.hpp"
#include "medrank/synth.hpp"

using namespace medrank;
namespace fs = std::filesystem;

namespace {

std::string serialize(const corpus::Corpus& c) {
    std::ostringstream out;
    corpus::serialize_corpus(c, out);
    return out.str();
}

fs::path temp_file(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << content;
    return p;
}

}  // namespace

TEST_CASE("config validation catches every bad field") {
    synth::default_config().validate();
    synth::two_cluster_config().validate();
    auto bad = [](auto mutate) {
        auto c = synth::default_config();
        mutate(c);
        CHECK_THROWS(c.validate());
    };
    bad([](synth::SynthConfig& c) { c.diseases = 0; });
    bad([](synth::SynthConfig& c) { c.records = -1; });
    bad([](synth::SynthConfig& c) { c.noise = 1.5; });
    bad([](synth::SynthConfig& c) { c.absent_rate = -0.1; });
    bad([](synth::SynthConfig& c) { c.min_diseases = 0; });
    bad([](synth::SynthConfig& c) { c.max_diseases = c.min_diseases - 1; });
    bad([](synth::SynthConfig& c) { c.max_diseases = c.diseases + 1; });
    bad([](synth::SynthConfig& c) { c.symptoms_per_disease = 0; });
    bad([](synth::SynthConfig& c) { c.emission_min = 0.9; c.emission_max = 0.5; });
    bad([](synth::SynthConfig& c) { c.emission_max = 1.1; });
    bad([](synth::SynthConfig& c) { c.clusters = 3; });  // 3 does not divide 20/100
    bad([](synth::SynthConfig& c) { c.clusters = -1; });
}

TEST_CASE("config file parsing") {
    auto p = temp_file("synth_cfg_ok.txt",
                       "# comment line\n"
                       "diseases = 4\n"
                       "symptoms = 8   # trailing comment\n"
                       "records = 25\n"
                       "noise = 0.125\n"
                       "seed = 7\n"
                       "\n");
    auto c = synth::parse_synth_config(p.string());
    CHECK(c.diseases == 4);
    CHECK(c.symptoms == 8);
    CHECK(c.records == 25);
    CHECK(c.noise == 0.125);
    CHECK(c.seed == 7);
    CHECK(c.tests == synth::default_config().tests);  // untouched keys keep defaults

    CHECK_THROWS(synth::parse_synth_config("/nonexistent/path.cfg"));
    auto bad1 = temp_file("synth_cfg_bad1.txt", "diseases 4\n");
    CHECK_THROWS_WITH_AS(synth::parse_synth_config(bad1.string()),
                         doctest::Contains("line 1"), std::runtime_error);
    auto bad2 = temp_file("synth_cfg_bad2.txt", "warp = 9\n");
    CHECK_THROWS(synth::parse_synth_config(bad2.string()));
    auto bad3 = temp_file("synth_cfg_bad3.txt", "diseases = many\n");
    CHECK_THROWS(synth::parse_synth_config(bad3.string()));
    auto bad4 = temp_file("synth_cfg_bad4.txt", "diseases = 0\n");
    CHECK_THROWS(synth::parse_synth_config(bad4.string()));  // validated after parse
}

TEST_CASE("generation is deterministic in the seed") {
    auto cfg = synth::default_config();
    cfg.records = 60;
    auto [c1, g1] = synth::generate(cfg);
    auto [c2, g2] = synth::generate(cfg);
    CHECK(serialize(c1) == serialize(c2));
    for (const auto& [y, list] : g1.by_y) {
        REQUIRE(g2.by_y.count(y));
        CHECK(g2.by_y.at(y) == list);
    }
    cfg.seed = 43;
    auto [c3, g3] = synth::generate(cfg);
    CHECK(serialize(c1) != serialize(c3));
}

TEST_CASE("generated corpus structure") {
    auto cfg = synth::default_config();
    cfg.records = 120;
    auto [c, gt] = synth::generate(cfg);
    REQUIRE(c.records.size() == 120);
    std::set<std::string> ids;
    for (const auto& r : c.records) {
        ids.insert(r.id);
        std::set<Entity> seen;
        int present_diseases = 0;
        for (const auto& m : r.mentions) {
            CHECK(seen.insert(m.entity).second);  // unique entities
            if (m.entity.kind == EntityType::Disease && m.modifier == Modifier::Present)
                ++present_diseases;
        }
        CHECK(present_diseases >= cfg.min_diseases);
        CHECK(std::is_sorted(r.mentions.begin(), r.mentions.end(),
                             [](const corpus::Mention& a, const corpus::Mention& b) {
                                 return a.entity < b.entity;
                             }));
    }
    CHECK(ids.size() == 120);

    // a saved corpus round-trips through the record-file format
    auto text = serialize(c);
    std::istringstream in(text);
    auto back = corpus::parse_corpus(in);
    CHECK(serialize(back) == text);
}

TEST_CASE("planted associations respect the config") {
    auto cfg = synth::default_config();
    cfg.records = 1;
    auto [c, gt] = synth::generate(cfg);
    int diseases_seen = 0;
    for (const auto& [y, list] : gt.by_y) {
        if (y.kind != EntityType::Disease) continue;
        ++diseases_seen;
        int sym = 0, tst = 0, trt = 0;
        for (const auto& [x, s] : list) {
            CHECK(s > 0);
            CHECK(s <= cfg.emission_max);
            if (x.kind == EntityType::Symptom) ++sym;
            if (x.kind == EntityType::Test) ++tst;
            if (x.kind == EntityType::Treatment) ++trt;
        }
        CHECK(sym == cfg.symptoms_per_disease + cfg.common_symptoms);
        CHECK(tst == cfg.tests_per_disease);
        CHECK(trt == cfg.treatments_per_disease);
    }
    CHECK(diseases_seen == cfg.diseases);
    // derived targets exist for the other tasks
    bool has_treatment = false, has_test = false;
    for (const auto& [y, list] : gt.by_y) {
        has_treatment |= y.kind == EntityType::Treatment;
        has_test |= y.kind == EntityType::Test;
    }
    CHECK(has_treatment);
    CHECK(has_test);
    CHECK(gt.strength({"no_such", EntityType::Disease}, {"x", EntityType::Symptom}) == 0);
}

TEST_CASE("clustered configs split the symptom vocabulary") {
    auto cfg = synth::two_cluster_config();
    cfg.records = 1;
    auto [c, gt] = synth::generate(cfg);
    std::set<Entity> pool[2];
    for (const auto& [y, list] : gt.by_y) {
        if (y.kind != EntityType::Disease) continue;
        REQUIRE(gt.cluster_of.count(y));
        int cl = gt.cluster_of.at(y);
        for (const auto& [x, s] : list)
            if (x.kind == EntityType::Symptom) pool[cl].insert(x);
    }
    CHECK(!pool[0].empty());
    CHECK(!pool[1].empty());
    for (const auto& e : pool[0]) CHECK(!pool[1].count(e));
}

TEST_CASE("observed co-occurrence frequency converges to the planted emission") {
    synth::SynthConfig cfg;
    cfg.diseases = 5;
    cfg.symptoms = 40;
    cfg.tests = 4;
    cfg.treatments = 4;
    cfg.records = 10000;
    cfg.noise = 0;
    cfg.absent_rate = 0;
    cfg.min_diseases = 1;
    cfg.max_diseases = 1;
    cfg.common_symptoms = 0;
    cfg.seed = 5;
    auto [c, gt] = synth::generate(cfg);
    for (const auto& [y, list] : gt.by_y) {
        if (y.kind != EntityType::Disease) continue;
        size_t with_d = 0;
        std::unordered_map<Entity, size_t, EntityHash> with_both;
        for (const auto& r : c.records) {
            bool has_d = false;
            for (const auto& m : r.mentions) has_d |= m.entity == y;
            if (!has_d) continue;
            ++with_d;
            for (const auto& m : r.mentions) ++with_both[m.entity];
        }
        REQUIRE(with_d > 1000);
        for (const auto& [x, strength] : list) {
            if (x.kind != EntityType::Symptom) continue;
            double freq = static_cast<double>(with_both[x]) / static_cast<double>(with_d);
            CHECK(std::abs(freq - strength) < 0.03);
        }
    }
}

TEST_CASE("oracle ranking is the strength-weighted score with alphabetical ties") {
    synth::GroundTruth gt;
    Entity a{"a_dis", EntityType::Disease}, b{"b_dis", EntityType::Disease},
        z{"z_dis", EntityType::Disease};
    Entity s1{"s1", EntityType::Symptom}, s2{"s2", EntityType::Symptom};
    gt.by_y[a] = {{s1, 0.9}};
    gt.by_y[b] = {{s1, 0.4}, {s2, 0.5}};
    gt.by_y[z] = {{s2, 0.9}};
    auto r = synth::oracle_rank(gt, {{s1, 1.0}, {s2, -1.0}}, {z, b, a}, TaskKind::SD);
    REQUIRE(r.ranking.size() == 3);
    CHECK(r.ranking[0].first == a);                       // 0.9
    CHECK(r.ranking[1].first == b);                       // -0.1
    CHECK(r.ranking[2].first == z);                       // -0.9
    auto tie = synth::oracle_rank(gt, {}, {z, b, a}, TaskKind::SD);
    CHECK(tie.ranking[0].first == a);  // all scores 0, names break ties
    CHECK(tie.ranking[2].first == z);
}

TEST_CASE("ground truth export is sorted and stable") {
    auto cfg = synth::default_config();
    cfg.records = 1;
    auto [c, gt] = synth::generate(cfg);
    auto p1 = fs::temp_directory_path() / "gt1.tsv";
    auto p2 = fs::temp_directory_path() / "gt2.tsv";
    synth::save_ground_truth(gt, p1.string());
    synth::save_ground_truth(gt, p2.string());
    std::ifstream f1(p1), f2(p2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(!s1.str().empty());
    std::string prev, line;
    std::istringstream in(s1.str());
    while (std::getline(in, line)) {
        CHECK(prev <= line);
        prev = line;
    }
}

TEST_CASE("co-occurrence counts recover a two-cluster planted structure") {
    // two diseases with disjoint symptom pools: counting shared records is
    // enough to put the right disease first almost always
    synth::SynthConfig cfg;
    cfg.diseases = 2;
    cfg.symptoms = 12;
    cfg.tests = 2;
    cfg.treatments = 2;
    cfg.records = 300;
    cfg.clusters = 2;
    cfg.noise = 0;
    cfg.absent_rate = 0;
    cfg.min_diseases = 1;
    cfg.max_diseases = 1;
    cfg.symptoms_per_disease = 5;
    cfg.common_symptoms = 0;
    cfg.emission_min = 0.6;
    cfg.emission_max = 0.9;
    cfg.seed = 11;
    auto [c, gt] = synth::generate(cfg);
    auto net = graph::build_network(c);
    auto b = graph::extract_bigraph(net, TaskKind::SD);
    auto m = energy::init_model(energy::EnergyKind::Weight, b, {});

    auto insts = corpus::make_instances(c, TaskKind::SD);
    size_t top1 = 0, total = 0;
    for (const auto& inst : insts.instances) {
        auto a = inference::make_assignment(b, inst.x);
        auto r = inference::rank_candidates(m, a);
        Entity gold{};
        for (const auto& [e, g] : inst.gold)
            if (g == 1) gold = e;
        ++total;
        top1 += r.ranking.at(0).first == gold;
    }
    REQUIRE(total > 200);
    CHECK(static_cast<double>(top1) / static_cast<double>(total) >= 0.95);
}
