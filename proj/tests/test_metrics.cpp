#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "medrank/metrics.hpp"

using namespace medrank;

namespace {

Entity dis(const std::string& n) { return {n, EntityType::Disease}; }

// gold entities at the given 1-based ranks in a list of n candidates
metrics::EvalInstance instance_with_gold_at(size_t n, const std::vector<size_t>& gold_ranks,
                                            size_t extra_gold = 0) {
    metrics::EvalInstance e;
    for (size_t i = 1; i <= n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "d%03zu", i);
        e.ranked.ranking.emplace_back(dis(buf), 1.0 - 0.01 * static_cast<double>(i));
    }
    for (size_t r : gold_ranks) e.gold.insert(e.ranked.ranking[r - 1].first);
    for (size_t i = 0; i < extra_gold; ++i) e.gold.insert(dis("missing" + std::to_string(i)));
    return e;
}

}  // namespace

TEST_CASE("precision at k hand cases") {
    // gold {d1, d2}, top-2 = [d1, d3]
    auto e = instance_with_gold_at(5, {1, 3});
    CHECK(metrics::precision_at_k(e, 2) == doctest::Approx(0.5));
    auto perfect = instance_with_gold_at(5, {1, 2});
    CHECK(metrics::precision_at_k(perfect, 2) == doctest::Approx(1.0));
    auto none = instance_with_gold_at(5, {4, 5});
    CHECK(metrics::precision_at_k(none, 2) == doctest::Approx(0.0));
    // k beyond the ranking still divides by k
    CHECK(metrics::precision_at_k(e, 10) == doctest::Approx(0.2));
    CHECK_THROWS(metrics::precision_at_k(e, 0));
}

TEST_CASE("recall at k hand cases") {
    // m=3, two inside top-10
    auto e = instance_with_gold_at(15, {2, 9, 14});
    CHECK(metrics::recall_at_k(e, 10) == doctest::Approx(2.0 / 3.0));
    auto single = instance_with_gold_at(15, {1});
    CHECK(metrics::recall_at_k(single, 10) == doctest::Approx(1.0));
    auto outside = instance_with_gold_at(15, {12, 13});
    CHECK(metrics::recall_at_k(outside, 10) == doctest::Approx(0.0));
}

TEST_CASE("average precision hand cases") {
    CHECK(metrics::average_precision(instance_with_gold_at(10, {1, 3})) ==
          doctest::Approx(5.0 / 6.0));
    CHECK(metrics::average_precision(instance_with_gold_at(10, {1, 2, 3})) == doctest::Approx(1.0));
    // m=3, single positive at rank 2 -> (1/3)(1/2)
    CHECK(metrics::average_precision(instance_with_gold_at(10, {2}, 2)) ==
          doctest::Approx(1.0 / 6.0));
}

TEST_CASE("gold entities missing from the ranking contribute zero") {
    auto e = instance_with_gold_at(5, {1}, 1);  // m = 2, one never returned
    CHECK(metrics::average_precision(e) == doctest::Approx(0.5));
    CHECK(metrics::recall_at_k(e, 10) == doctest::Approx(0.5));
}

TEST_CASE("aggregate means and strict threshold fractions") {
    std::vector<metrics::InstanceMetrics> rows(2);
    rows[0].ap = 1.0;
    rows[1].ap = 0.5;
    rows[0].r_at_10 = 0.1;   // exactly 0.1 is NOT above 0.1
    rows[1].r_at_10 = 0.95;
    rows[0].p_at_m = 0.25;
    rows[1].p_at_m = 0.75;
    auto rep = metrics::aggregate(rows);
    CHECK(rep.map == doctest::Approx(0.75));
    CHECK(rep.mp_at_r == doctest::Approx(0.5));
    CHECK(rep.mr_at_10 == doctest::Approx(0.525));
    CHECK(rep.frac_r10_gt_01 == doctest::Approx(0.5));
    CHECK(rep.frac_r10_gt_09 == doctest::Approx(0.5));
    CHECK_THROWS(metrics::aggregate({}));
}

TEST_CASE("property suite over random instances") {
    auto rng = substream(21, "metrics-prop");
    for (int trial = 0; trial < 1000; ++trial) {
        size_t n = 3 + uniform_index(rng, 20);
        size_t m = 1 + uniform_index(rng, n);
        std::vector<size_t> ranks(n);
        for (size_t i = 0; i < n; ++i) ranks[i] = i + 1;
        std::shuffle(ranks.begin(), ranks.end(), rng);
        ranks.resize(m);
        auto e = instance_with_gold_at(n, ranks);

        double ap = metrics::average_precision(e);
        CHECK(ap >= 0);
        CHECK(ap <= 1);
        bool top_m = *std::max_element(ranks.begin(), ranks.end()) == m;
        CHECK((ap == 1.0) == top_m);

        double prev = 0;
        for (size_t k = 1; k <= n; ++k) {
            double r = metrics::recall_at_k(e, k);
            CHECK(r >= prev);  // non-decreasing in k
            prev = r;
            double p = metrics::precision_at_k(e, k);
            CHECK(p <= std::min(1.0, static_cast<double>(m) / static_cast<double>(k)) + 1e-12);
            if (k == m)
                CHECK(p == doctest::Approx(r));  // P@m == R@m
        }
    }
}

TEST_CASE("AP ignores non-gold order below the lowest gold rank") {
    auto e = instance_with_gold_at(10, {2, 5});
    double ap = metrics::average_precision(e);
    // permute the tail candidates (ranks 6..10 are all non-gold)
    std::reverse(e.ranked.ranking.begin() + 5, e.ranked.ranking.end());
    CHECK(metrics::average_precision(e) == doctest::Approx(ap));
}

TEST_CASE("aggregate matches brute-force recomputation") {
    auto rng = substream(22, "agg");
    std::vector<metrics::InstanceMetrics> rows;
    for (int i = 0; i < 50; ++i) {
        metrics::InstanceMetrics m;
        m.ap = uniform_real(rng, 0, 1);
        m.p_at_m = uniform_real(rng, 0, 1);
        m.r_at_10 = uniform_real(rng, 0, 1);
        rows.push_back(m);
    }
    auto rep = metrics::aggregate(rows);
    double map = 0;
    size_t c01 = 0;
    for (const auto& m : rows) {
        map += m.ap;
        if (m.r_at_10 > 0.1) ++c01;
    }
    CHECK(rep.map == doctest::Approx(map / rows.size()).epsilon(1e-12));
    CHECK(rep.frac_r10_gt_01 == doctest::Approx(static_cast<double>(c01) / rows.size()));
}
