#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "medrank/graph.hpp"

using namespace medrank;
using test_helpers::corpus_from_text;

TEST_CASE("co-occurrence counts per record") {
    auto c = corpus_from_text(
        "r1\tA|symptom|present\tB|disease|present\n"
        "r2\tA|symptom|present\tB|disease|present\tC|disease|present\n");
    auto g = graph::build_network(c);
    Entity a{"A", EntityType::Symptom}, b{"B", EntityType::Disease}, cc{"C", EntityType::Disease};
    CHECK(g.weight(a, b) == 2);
    CHECK(g.weight(a, cc) == 1);
    CHECK(g.weight(b, cc) == 1);
}

TEST_CASE("single record with one entity has no edges") {
    auto g = graph::build_network(corpus_from_text("r1\tA|symptom|present\n"));
    CHECK(g.nodes.size() == 1);
    CHECK(g.edge_weight.empty());
}

TEST_CASE("absent mentions still co-occur unless positive_only_edges") {
    auto c = corpus_from_text("r1\tA|symptom|absent\tB|disease|present\n");
    CHECK(graph::build_network(c).weight({"A", EntityType::Symptom},
                                         {"B", EntityType::Disease}) == 1);
    CHECK(graph::build_network(c, true).weight({"A", EntityType::Symptom},
                                               {"B", EntityType::Disease}) == 0);
}

TEST_CASE("bigraph keeps only kind-matching edges, weights intact") {
    auto c = corpus_from_text(
        "r1\ts|symptom|present\ttr|test_result|present\td|disease|present\tt|treatment|present\n"
        "r2\ts|symptom|present\td|disease|present\n");
    auto g = graph::build_network(c);
    auto b = graph::extract_bigraph(g, TaskKind::SD);
    REQUIRE(b.y_part.size() == 1);
    CHECK(b.x_part.size() == 2);  // symptom + test_result; treatment excluded
    CHECK(b.edges.size() == 2);
    auto yi = b.y_index({"d", EntityType::Disease});
    auto xi = b.x_index({"s", EntityType::Symptom});
    REQUIRE((yi && xi));
    CHECK(b.weight(*yi, *xi) == 2);

    auto dtr = graph::extract_bigraph(g, TaskKind::DTr);
    CHECK(dtr.x_part.size() == 1);
    CHECK(dtr.y_part.size() == 1);
    CHECK(dtr.edges.size() == 1);
    CHECK(dtr.edges[0].weight == 1);
}

TEST_CASE("task with no matching y nodes gives an empty part") {
    auto g = graph::build_network(corpus_from_text("r1\td|disease|present\ts|symptom|present\n"));
    auto b = graph::extract_bigraph(g, TaskKind::DTr);
    CHECK(b.y_part.empty());
    CHECK(b.edges.empty());
    CHECK(b.x_part.size() == 1);  // the disease is still the X part
}

TEST_CASE("isolated nodes stay in the parts") {
    // d2 never co-occurs with a symptom but remains a candidate
    auto c = corpus_from_text(
        "r1\ts|symptom|present\td1|disease|present\n"
        "r2\td2|disease|present\n");
    auto b = graph::extract_bigraph(graph::build_network(c), TaskKind::SD);
    CHECK(b.y_part.size() == 2);
    auto yi = b.y_index({"d2", EntityType::Disease});
    REQUIRE(yi);
    CHECK(b.y_degree(*yi) == 0);
}

TEST_CASE("degree stats: complete bigraph and even-size median") {
    auto rng = substream(3, "test");
    auto b = test_helpers::random_bigraph(rng, 3, 2, 1.1);  // complete 3x2
    auto s = graph::degree_stats(b);
    CHECK(s.y.size == 3);
    CHECK(s.y.degree_mean == doctest::Approx(2));
    CHECK(s.y.degree_median == doctest::Approx(2));
    CHECK(s.x.degree_mean == doctest::Approx(3));
    CHECK(s.x.degree_median == doctest::Approx(3));

    std::vector<int> degs = {1, 2, 4, 10};  // mean 4.25, median 3
    auto rng2 = substream(4, "test");
    auto b2 = test_helpers::random_bigraph(rng2, 10, 4, 0.0);
    int eid = 0;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < degs[x]; ++y) {
            b2.edges.push_back({y, x, 1});
            b2.edge_index[(static_cast<uint64_t>(y) << 32) | static_cast<uint32_t>(x)] = eid++;
            b2.y_adj[y].push_back(eid - 1);
            b2.x_adj[x].push_back(eid - 1);
        }
    auto s2 = graph::degree_stats(b2);
    CHECK(s2.x.degree_mean == doctest::Approx(4.25));
    CHECK(s2.x.degree_median == doctest::Approx(3));
}

TEST_CASE("empty part reports zeros") {
    graph::Bigraph b;
    auto s = graph::degree_stats(b);
    CHECK(s.x.size == 0);
    CHECK(s.x.degree_mean == 0);
    CHECK(s.x.degree_median == 0);
}

TEST_CASE("bigraph edges match a brute-force corpus scan") {
    auto rng = substream(11, "graph-oracle");
    const char* symptoms[] = {"s0", "s1", "s2", "s3", "s4", "s5"};
    const char* diseases[] = {"d0", "d1", "d2", "d3"};
    for (int trial = 0; trial < 20; ++trial) {
        corpus::Corpus c;
        int n_rec = 2 + static_cast<int>(uniform_index(rng, 30));
        for (int r = 0; r < n_rec; ++r) {
            corpus::Record rec;
            rec.id = "r" + std::to_string(r);
            for (const char* s : symptoms)
                if (uniform_real(rng, 0, 1) < 0.4)
                    rec.mentions.push_back({{s, EntityType::Symptom}, Modifier::Present});
            for (const char* d : diseases)
                if (uniform_real(rng, 0, 1) < 0.4)
                    rec.mentions.push_back({{d, EntityType::Disease}, Modifier::Present});
            c.records.push_back(rec);
        }
        auto b = graph::extract_bigraph(graph::build_network(c), TaskKind::SD);

        std::map<std::pair<std::string, std::string>, int> expected;
        for (const auto& rec : c.records)
            for (const auto& m1 : rec.mentions)
                for (const auto& m2 : rec.mentions)
                    if (m1.entity.kind == EntityType::Disease &&
                        m2.entity.kind == EntityType::Symptom)
                        ++expected[{m1.entity.name, m2.entity.name}];

        size_t found = 0;
        for (const auto& [pair, w] : expected) {
            auto yi = b.y_index({pair.first, EntityType::Disease});
            auto xi = b.x_index({pair.second, EntityType::Symptom});
            REQUIRE((yi && xi));
            CHECK(b.weight(*yi, *xi) == w);
            ++found;
        }
        CHECK(b.edges.size() == found);
    }
}

TEST_CASE("weight bounded by both occurrence counts") {
    auto rng = substream(12, "graph-bound");
    corpus::Corpus c;
    for (int r = 0; r < 40; ++r) {
        corpus::Record rec;
        rec.id = "r" + std::to_string(r);
        for (int s = 0; s < 5; ++s)
            if (uniform_real(rng, 0, 1) < 0.5)
                rec.mentions.push_back(
                    {{"s" + std::to_string(s), EntityType::Symptom}, Modifier::Present});
        c.records.push_back(rec);
    }
    auto g = graph::build_network(c);
    std::unordered_map<Entity, int, EntityHash> occurrences;
    for (const auto& rec : c.records)
        for (const auto& m : rec.mentions) ++occurrences[m.entity];
    for (const auto& a : g.nodes)
        for (const auto& b : g.nodes) {
            if (a == b) continue;
            int w = g.weight(a, b);
            CHECK(w <= std::min(occurrences[a], occurrences[b]));
        }
}
