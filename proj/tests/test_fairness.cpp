#include <doctest.h>

#include <cmath>

#include "sfair/fairness.hpp"
#include "support/oracles.hpp"

using namespace sfair;

namespace {

CentralityVector scores(std::vector<double> s) {
    return {CentralityKind::closeness, std::move(s), true};
}

// histogram oracle: linear scan over explicit bin intervals
std::vector<std::size_t> histogram(const std::vector<double>& xs, const std::vector<double>& edges) {
    std::vector<std::size_t> counts(edges.size() - 1, 0);
    for (double x : xs) {
        for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
            const bool last = b + 2 == edges.size();
            if (x >= edges[b] && (x < edges[b + 1] || (last && x <= edges[b + 1]))) {
                ++counts[b];
                break;
            }
        }
    }
    return counts;
}

}  // namespace

TEST_CASE("bin_by_centrality on the 0.0..1.0 grid: last bin is right-closed") {
    auto cv = scores({0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
    std::vector<std::uint8_t> mask(11, 1);
    auto table = bin_by_centrality(cv, mask, 10, 1);
    // 0.9 and 1.0 both land in bin 9 under the left-closed convention
    std::vector<std::size_t> expect{1, 1, 1, 1, 1, 1, 1, 1, 1, 2};
    CHECK(table.counts == expect);
    CHECK(table.edges.front() == 0.0);
    CHECK(table.edges.back() == 1.0);
}

TEST_CASE("bin counts match the histogram oracle on random data") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> s;
        for (int i = 0; i < 200; ++i) s.push_back(rng.uniform(0.0, 1.0));
        auto cv = scores(s);
        std::vector<std::uint8_t> mask(200, 1);
        auto table = bin_by_centrality(cv, mask, 10, 5);
        CHECK(table.counts == histogram(s, table.edges));
        std::size_t total = 0;
        for (auto c : table.counts) total += c;
        CHECK(total == 200);
    }
}

TEST_CASE("bin_by_centrality handles masks, degenerate and invalid input") {
    auto cv = scores({0.1, 0.5, 0.9, 0.3});
    std::vector<std::uint8_t> none(4, 0);
    CHECK_THROWS_AS(bin_by_centrality(cv, none, 10, 1), UsageError);
    CHECK_THROWS_AS(bin_by_centrality(cv, {1, 1, 1, 1}, 1, 1), UsageError);
    CHECK_THROWS_AS(bin_by_centrality(cv, {1, 1}, 10, 1), UsageError);

    auto constant = scores({0.5, 0.5, 0.5});
    // constant scores collapse to a single degenerate bin
    auto degen = bin_by_centrality(constant, {1, 1, 1}, 10, 1);
    CHECK(degen.counts == std::vector<std::size_t>{3});
    CHECK(degen.retained == std::vector<std::uint8_t>{1});
    // ... which std_metric rejects (it needs two retained bins)
    CHECK_THROWS_AS(std_metric(degen), UsageError);
    // an unpopulated degenerate bin is rejected outright
    CHECK_THROWS_AS(bin_by_centrality(constant, {1, 1, 1}, 10, 5), UsageError);

    // min_count filters: 4 nodes spread over 2 populated bins of 10
    auto spread = scores({0.0, 0.01, 0.99, 1.0});
    auto table = bin_by_centrality(spread, {1, 1, 1, 1}, 10, 2);
    CHECK(table.retained[0] == 1);
    CHECK(table.retained[9] == 1);
    for (int b = 1; b < 9; ++b) CHECK(table.retained[b] == 0);
}

TEST_CASE("std_metric frozen example: accuracies {0.2, 0.8} give 30.0") {
    BinTable t;
    t.edges = {0.0, 0.5, 1.0};
    t.counts = {5, 5};
    t.accuracy = {0.2, 0.8};
    t.retained = {1, 1};
    CHECK(std_metric(t) == doctest::Approx(30.0).epsilon(1e-12));
    t.retained = {1, 0};
    CHECK_THROWS_AS(std_metric(t), UsageError);
}

TEST_CASE("std_metric ignores non-retained bins") {
    BinTable t;
    t.edges = {0.0, 1.0 / 3, 2.0 / 3, 1.0};
    t.counts = {5, 1, 5};
    t.accuracy = {0.4, 0.0, 0.6};  // middle bin would shift the result if used
    t.retained = {1, 0, 1};
    CHECK(std_metric(t) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("pearson exact values and affine invariance") {
    CHECK(*pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*pearson({1, 2, 3}, {6, 4, 2}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(!pearson({1, 2, 3}, {5, 5, 5}).has_value());
    CHECK_THROWS_AS(pearson({1}, {1}), UsageError);

    Rng rng(5);
    std::vector<double> x, y;
    for (int i = 0; i < 50; ++i) {
        x.push_back(rng.uniform(0.0, 1.0));
        y.push_back(rng.uniform(0.0, 1.0));
    }
    const double r = *pearson(x, y);
    std::vector<double> y2;
    for (double v : y) y2.push_back(3.0 * v + 7.0);
    CHECK(*pearson(x, y2) == doctest::Approx(r).epsilon(1e-12));
    std::vector<double> y3;
    for (double v : y) y3.push_back(-2.0 * v + 1.0);
    CHECK(*pearson(x, y3) == doctest::Approx(-r).epsilon(1e-12));
}

TEST_CASE("pearson matches a direct covariance-formula oracle") {
    Rng rng(8);
    std::vector<double> x, y;
    for (int i = 0; i < 100; ++i) {
        x.push_back(rng.uniform(-5.0, 5.0));
        y.push_back(0.3 * x.back() + rng.uniform(-1.0, 1.0));
    }
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    const double n = 100.0;
    for (int i = 0; i < 100; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    const double ref = (n * sxy - sx * sy) /
                       std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    CHECK(*pearson(x, y) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("pcc_metric is +/-100 on perfectly aligned probabilities") {
    auto cv = scores({0.1, 0.4, 0.7, 1.0});
    std::vector<std::uint8_t> mask(4, 1);
    CHECK(*pcc_metric(cv, {0.1, 0.4, 0.7, 1.0}, mask) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(*pcc_metric(cv, {0.9, 0.6, 0.3, 0.0}, mask) == doctest::Approx(-100.0).epsilon(1e-12));
    CHECK(!pcc_metric(cv, {0.5, 0.5, 0.5, 0.5}, mask).has_value());
    CHECK_THROWS_AS(pcc_metric(cv, {0.5}, mask), UsageError);
    // masked-out nodes do not participate
    std::vector<std::uint8_t> sub{1, 1, 1, 0};
    CHECK(*pcc_metric(cv, {0.1, 0.4, 0.7, 0.0}, sub) == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("improvement_pct frozen reference values") {
    // 13.15 -> 10.53 is a 19.9% improvement; 10.47 -> 0.76 is 92.7%
    CHECK(improvement_pct(13.15, 10.53) == doctest::Approx(19.9).epsilon(5e-3));
    CHECK(improvement_pct(10.47, 0.76) == doctest::Approx(92.7).epsilon(5e-3));
    CHECK(improvement_pct(10.0, 10.0) == 0.0);
    CHECK(improvement_pct(10.0, 12.0) == doctest::Approx(-20.0));
}

TEST_CASE("build_report computes accuracy, bins, and both pcc variants") {
    // 20 nodes, all test; correctness rises with centrality
    const std::size_t n = 20;
    LabeledDataset ds;
    ds.graph = Graph::from_edges(n, {{0, 1}});
    ds.num_classes = 2;
    ds.labels.assign(n, 1);
    ds.train_mask.assign(n, 0);
    ds.test_mask.assign(n, 1);
    CentralityVector cv{CentralityKind::closeness, {}, true};
    DenseMatrix probs(n, 2);
    std::vector<int> predicted(n);
    for (std::size_t i = 0; i < n; ++i) {
        cv.scores.push_back(static_cast<double>(i) / (n - 1));
        const double p1 = 0.05 + 0.9 * static_cast<double>(i) / (n - 1);
        probs.at(i, 0) = 1.0 - p1;
        probs.at(i, 1) = p1;
        predicted[i] = p1 > 0.5 ? 1 : 0;
    }
    auto rep = build_report(ds, cv, probs, predicted, 2, 5, {{"seed", "1"}});
    CHECK(rep.accuracy_pct == doctest::Approx(50.0));
    REQUIRE(rep.std_metric.has_value());
    CHECK(*rep.std_metric == doctest::Approx(50.0));  // bins at 0% and 100%
    REQUIRE(rep.pcc_metric.has_value());
    CHECK(*rep.pcc_metric == doctest::Approx(100.0).epsilon(1e-9));
    REQUIRE(rep.pcc_binary.has_value());
    CHECK(*rep.pcc_binary > 0.0);
    CHECK(rep.config.at("seed") == "1");
    CHECK(!rep.std_improvement_pct.has_value());

    // against itself as baseline, improvements are zero
    auto rep2 = build_report(ds, cv, probs, predicted, 2, 5, {}, &rep);
    CHECK(*rep2.std_improvement_pct == doctest::Approx(0.0));
    CHECK(*rep2.pcc_improvement_pct == doctest::Approx(0.0));
}

TEST_CASE("build_report validates prediction coverage") {
    LabeledDataset ds;
    ds.graph = Graph::from_edges(3, {{0, 1}, {1, 2}});
    ds.num_classes = 2;
    ds.labels = {0, 1, 0};
    ds.train_mask = {0, 0, 0};
    ds.test_mask = {1, 1, 1};
    CentralityVector cv = scores({0.0, 0.5, 1.0});
    DenseMatrix probs(2, 2);
    CHECK_THROWS_AS(build_report(ds, cv, probs, {0, 1}, 2, 1, {}), UsageError);
}
