#include <doctest.h>

#include <algorithm>
#include <set>

#include "sfair/expansion.hpp"
#include "support/oracles.hpp"

using namespace sfair;

namespace {

std::vector<std::uint8_t> random_mask(std::size_t n, double p, Rng& rng) {
    std::vector<std::uint8_t> mask(n);
    for (auto& m : mask) m = rng.uniform01() < p ? 1 : 0;
    return mask;
}

// expected hop-h set from the dense boolean power of the masked adjacency
std::vector<NodeId> oracle_hop_set(const std::vector<std::vector<bool>>& power,
                                   NodeId i) {
    std::vector<NodeId> out;
    for (NodeId j = 0; j < power.size(); ++j) {
        if (power[i][j] || j == i) out.push_back(j);
    }
    return out;
}

}  // namespace

TEST_CASE("mark_marginal thresholds") {
    CentralityVector cv{CentralityKind::closeness, {0.0, 0.4, 1.0}, true};
    MarginConfig cfg{0.0, CentralityKind::closeness, true};
    CHECK(mark_marginal(cv, cfg) == std::vector<std::uint8_t>{1, 0, 0});
    cfg.line = 1.0;
    CHECK(mark_marginal(cv, cfg) == std::vector<std::uint8_t>{1, 1, 1});
}

TEST_CASE("mark_marginal rejects mismatched kind or space") {
    CentralityVector cv{CentralityKind::eigenvector, {0.1, 0.2}, true};
    CHECK_THROWS_AS(mark_marginal(cv, MarginConfig{0.5, CentralityKind::closeness, true}),
                    UsageError);
    CentralityVector raw{CentralityKind::closeness, {0.1, 0.2}, false};
    CHECK_THROWS_AS(mark_marginal(raw, MarginConfig{0.5, CentralityKind::closeness, true}),
                    UsageError);
}

TEST_CASE("mark_marginal on P5 at the median closeness flags ends and their neighbors") {
    // P5 closeness: ends (4/10)=0.4, next (4/7), center (4/6)
    Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    auto cv = closeness(g);
    CHECK(cv.scores[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(cv.scores[1] == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
    CHECK(cv.scores[2] == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
    MarginConfig cfg{4.0 / 7.0, CentralityKind::closeness, false};
    CHECK(mark_marginal(cv, cfg) == std::vector<std::uint8_t>{1, 1, 0, 1, 1});
}

TEST_CASE("build_debiased_adjacency cases") {
    Graph tri = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});

    auto none = build_debiased_adjacency(tri, {0, 0, 0});
    CHECK(none.adj.num_edges() == 0);

    auto all = build_debiased_adjacency(tri, {1, 1, 1});
    CHECK(all.adj == tri);

    auto only0 = build_debiased_adjacency(tri, {1, 0, 0});
    CHECK(only0.adj.num_edges() == 2);
    CHECK(only0.adj.neighbors(1).size() == 1);  // edge (1,2) dropped
    CHECK(only0.adj.neighbors(1)[0] == 0);
}

TEST_CASE("debiased adjacency never gains edges; equality iff every edge touches a marginal") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = oracle::random_graph(30, 0.15, rng);
        auto mask = random_mask(30, 0.3, rng);
        auto dadj = build_debiased_adjacency(g, mask);
        CHECK(dadj.adj.num_edges() <= g.num_edges());
        bool all_touch = true;
        for (NodeId i = 0; i < 30; ++i) {
            for (NodeId j : g.neighbors(i)) {
                if (i < j && !mask[i] && !mask[j]) all_touch = false;
            }
        }
        CHECK((dadj.adj.num_edges() == g.num_edges()) == all_touch);
    }
}

TEST_CASE("expand with empty mask collapses hop >= 2 sets to self") {
    Graph tri = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    auto hops = expand(build_debiased_adjacency(tri, {0, 0, 0}), 3, tri);
    for (NodeId i = 0; i < 3; ++i) {
        CHECK(hops.set(1, i).size() == 3);  // original neighbors + self
        CHECK(hops.set(2, i).size() == 1);
        CHECK(hops.set(2, i)[0] == i);
        CHECK(hops.set(3, i).size() == 1);
    }
}

TEST_CASE("expand on P4 with all-true mask, exact length-2 walks") {
    Graph p4 = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    auto hops = expand(build_debiased_adjacency(p4, {1, 1, 1, 1}), 2, p4);
    auto s = hops.set(2, 0);
    CHECK(std::vector<NodeId>(s.begin(), s.end()) == std::vector<NodeId>{0, 2});
}

TEST_CASE("expand rejects h_max = 0") {
    Graph g = Graph::from_edges(2, {{0, 1}});
    CHECK_THROWS_AS(expand(build_debiased_adjacency(g, {1, 1}), 0, g), UsageError);
}

TEST_CASE("expand matches the dense boolean power oracle") {
    Rng rng(1234);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 10 + rng.uniform_index(31);
        Graph g = oracle::random_graph(n, 0.12, rng);
        auto mask = random_mask(n, rng.uniform(0.1, 0.9), rng);
        auto dadj = build_debiased_adjacency(g, mask);
        const int h_max = 2 + static_cast<int>(rng.uniform_index(3));
        auto hops = expand(dadj, h_max, g);
        for (int h = 2; h <= h_max; ++h) {
            auto power = oracle::bool_power(dadj.adj, h);
            for (NodeId i = 0; i < n; ++i) {
                auto s = hops.set(h, i);
                CHECK(std::vector<NodeId>(s.begin(), s.end()) == oracle_hop_set(power, i));
            }
        }
    }
}

TEST_CASE("hop sets are sorted, unique, self-containing") {
    Rng rng(77);
    Graph g = oracle::random_graph(25, 0.2, rng);
    auto hops = expand(build_debiased_adjacency(g, random_mask(25, 0.5, rng)), 4, g);
    for (int h = 1; h <= 4; ++h) {
        for (NodeId i = 0; i < 25; ++i) {
            auto s = hops.set(h, i);
            CHECK(std::is_sorted(s.begin(), s.end()));
            CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
            CHECK(std::binary_search(s.begin(), s.end(), i));
        }
    }
}

TEST_CASE("growing the mask never shrinks any hop set") {
    Rng rng(88);
    Graph g = oracle::random_graph(25, 0.15, rng);
    auto mask = random_mask(25, 0.3, rng);
    auto bigger = mask;
    for (NodeId i = 0; i < 25; ++i) {
        if (!bigger[i]) {
            bigger[i] = 1;
            break;
        }
    }
    auto hops_a = expand(build_debiased_adjacency(g, mask), 3, g);
    auto hops_b = expand(build_debiased_adjacency(g, bigger), 3, g);
    for (int h = 1; h <= 3; ++h) {
        for (NodeId i = 0; i < 25; ++i) {
            auto a = hops_a.set(h, i);
            auto b = hops_b.set(h, i);
            CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
        }
    }
}

TEST_CASE("within variant accumulates powers 1..h") {
    Graph p4 = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    auto dadj = build_debiased_adjacency(p4, {1, 1, 1, 1});
    auto hops = expand(dadj, 2, p4, /*within=*/true);
    auto s = hops.set(2, 0);
    // union of walks of length 1 and 2 from node 0, plus self
    CHECK(std::vector<NodeId>(s.begin(), s.end()) == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("expansion_report: hop 1 equals original closeness; complete graph gap 0") {
    Graph k5 = Graph::from_edges(
        5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
    auto dadj = build_debiased_adjacency(k5, std::vector<std::uint8_t>(5, 1));
    auto hops = expand(dadj, 3, k5);
    auto rep = expansion_report(k5, dadj, hops, {0, 0, 1, 1, 2}, 3);
    for (const auto& row : rep.rows) CHECK(row.gap == doctest::Approx(0.0));

    Graph p5 = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    auto dadj_p = build_debiased_adjacency(p5, std::vector<std::uint8_t>(5, 1));
    auto hops_p = expand(dadj_p, 1, p5);
    auto rep_p = expansion_report(p5, dadj_p, hops_p, {0, 1, 2, 1, 0}, 3);
    auto cc = closeness(p5);
    CHECK(rep_p.rows[0].group_mean_closeness[2] == doctest::Approx(cc.scores[2]).epsilon(1e-12));
}
