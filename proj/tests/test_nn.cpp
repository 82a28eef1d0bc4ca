#include <doctest.h>

#include <cmath>

#include "sfair/nn.hpp"

using namespace sfair;

TEST_CASE("xavier_init bounds, near-zero mean, determinism") {
    const std::size_t r = 40, c = 60;
    auto m = xavier_init(r, c, 9);
    const double bound = std::sqrt(6.0 / (r + c));
    double sum = 0.0;
    for (double v : m.data) {
        CHECK(std::abs(v) <= bound);
        sum += v;
    }
    CHECK(std::abs(sum / (r * c)) < bound / 10.0);

    auto m2 = xavier_init(r, c, 9);
    CHECK(m.data == m2.data);
    auto m3 = xavier_init(r, c, 10);
    CHECK(m.data != m3.data);
    CHECK_THROWS_AS(xavier_init(0, 3, 1), UsageError);
}

TEST_CASE("leaky_relu and elu values and slopes") {
    CHECK(leaky_relu(2.0, 0.2) == 2.0);
    CHECK(leaky_relu(-2.0, 0.2) == doctest::Approx(-0.4));
    CHECK(leaky_relu_grad(3.0, 0.2) == 1.0);
    CHECK(leaky_relu_grad(-3.0, 0.2) == 0.2);
    CHECK(elu(1.5) == 1.5);
    CHECK(elu(-1.0) == doctest::Approx(std::expm1(-1.0)));
    CHECK(elu_grad(-1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(elu_grad(0.5) == 1.0);
}

TEST_CASE("softmax_rows exact values and overflow safety") {
    DenseMatrix m(2, 2);
    m.at(0, 0) = std::log(2.0);
    m.at(0, 1) = 0.0;
    m.at(1, 0) = 1000.0;
    m.at(1, 1) = 0.0;
    auto s = softmax_rows(m);
    CHECK(s.at(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(s.at(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(s.at(1, 0) == doctest::Approx(1.0));
    CHECK(std::isfinite(s.at(1, 1)));
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(s.at(i, 0) + s.at(i, 1) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cross_entropy on uniform logits is ln(num_classes)") {
    DenseMatrix logits(3, 4);  // all zeros -> uniform softmax
    std::vector<int> labels{0, 1, 2};
    std::vector<std::uint8_t> mask{1, 1, 1};
    auto res = cross_entropy(logits, labels, mask);
    CHECK(res.loss == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    // grad = (1/4 - onehot)/3
    CHECK(res.grad.at(0, 0) == doctest::Approx((0.25 - 1.0) / 3.0).epsilon(1e-12));
    CHECK(res.grad.at(0, 1) == doctest::Approx(0.25 / 3.0).epsilon(1e-12));
}

TEST_CASE("cross_entropy gradient matches central differences") {
    Rng rng(77);
    DenseMatrix logits(5, 3);
    for (double& v : logits.data) v = rng.uniform(-2.0, 2.0);
    std::vector<int> labels{0, 2, 1, 1, 0};
    std::vector<std::uint8_t> mask{1, 0, 1, 1, 1};
    auto res = cross_entropy(logits, labels, mask);
    const double eps = 1e-6;
    for (std::size_t i = 0; i < logits.rows; ++i) {
        for (std::size_t j = 0; j < logits.cols; ++j) {
            DenseMatrix up = logits, down = logits;
            up.at(i, j) += eps;
            down.at(i, j) -= eps;
            const double fd = (cross_entropy(up, labels, mask).loss -
                               cross_entropy(down, labels, mask).loss) /
                              (2.0 * eps);
            CHECK(res.grad.at(i, j) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
    // unmasked rows contribute nothing
    for (std::size_t j = 0; j < 3; ++j) CHECK(res.grad.at(1, j) == 0.0);
}

TEST_CASE("cross_entropy input validation") {
    DenseMatrix logits(2, 2);
    CHECK_THROWS_AS(cross_entropy(logits, {0, 1}, {0, 0}), UsageError);
    CHECK_THROWS_AS(cross_entropy(logits, {0}, {1, 1}), UsageError);
    CHECK_THROWS_AS(cross_entropy(logits, {0, 5}, {1, 1}), UsageError);
}

TEST_CASE("adam first step moves each coordinate by about lr") {
    Parameter p("w", DenseMatrix(1, 3));
    p.value.data = {1.0, 2.0, 3.0};
    p.grad.data = {0.5, -0.25, 10.0};
    std::vector<Parameter*> params{&p};
    AdamState st;
    adam_step(params, st, 0.005);
    // with bias correction, mhat/sqrt(vhat) = sign(g) on step 1 (up to eps)
    CHECK(p.value.data[0] == doctest::Approx(1.0 - 0.005).epsilon(1e-4));
    CHECK(p.value.data[1] == doctest::Approx(2.0 + 0.005).epsilon(1e-4));
    CHECK(p.value.data[2] == doctest::Approx(3.0 - 0.005).epsilon(1e-4));
}

TEST_CASE("adam leaves parameters unchanged at zero gradient from fresh state") {
    Parameter p("w", DenseMatrix(2, 2));
    p.value.data = {1.0, -1.0, 0.5, 2.0};
    p.zero_grad();
    auto before = p.value.data;
    std::vector<Parameter*> params{&p};
    AdamState st;
    for (int i = 0; i < 5; ++i) adam_step(params, st, 0.1);
    CHECK(p.value.data == before);
}

TEST_CASE("adam is deterministic and rejects state/parameter mismatch") {
    auto run = [] {
        Parameter p("w", xavier_init(3, 3, 5));
        std::vector<Parameter*> params{&p};
        AdamState st;
        for (int i = 0; i < 10; ++i) {
            for (std::size_t k = 0; k < 9; ++k) p.grad.data[k] = p.value.data[k];
            adam_step(params, st, 0.01);
        }
        return p.value.data;
    };
    CHECK(run() == run());

    Parameter a("a", DenseMatrix(1, 1)), b("b", DenseMatrix(1, 1));
    std::vector<Parameter*> one{&a};
    AdamState st;
    adam_step(one, st, 0.1);
    std::vector<Parameter*> two{&a, &b};
    CHECK_THROWS_AS(adam_step(two, st, 0.1), StateError);
}

TEST_CASE("finite_difference_check accepts an exact quadratic gradient") {
    Parameter p("w", DenseMatrix(4, 4));
    Rng rng(31);
    for (double& v : p.value.data) v = rng.uniform(-1.0, 1.0);
    std::vector<Parameter*> params{&p};
    auto loss = [&] {
        double l = 0.0;
        for (std::size_t i = 0; i < 16; ++i) {
            l += 0.5 * p.value.data[i] * p.value.data[i];
            p.grad.data[i] = p.value.data[i];
        }
        return l;
    };
    CHECK(finite_difference_check(loss, params, 16, 1e-5, 1) < 1e-8);
}

TEST_CASE("finite_difference_check flags a corrupted gradient") {
    Parameter p("w", DenseMatrix(2, 2));
    p.value.data = {0.3, -0.7, 1.1, 0.4};
    std::vector<Parameter*> params{&p};
    auto loss = [&] {
        double l = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            l += 0.5 * p.value.data[i] * p.value.data[i];
            p.grad.data[i] = 2.0 * p.value.data[i];  // wrong by a factor of 2
        }
        return l;
    };
    CHECK(finite_difference_check(loss, params, 4, 1e-5, 1) > 0.4);
}
