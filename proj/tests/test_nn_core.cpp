#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "puedet/activations.hpp"
#include "puedet/adam.hpp"
#include "puedet/errors.hpp"
#include "puedet/grad_check.hpp"
#include "puedet/param_store.hpp"
#include "puedet/rng.hpp"
#include "test_oracles.hpp"

using namespace puedet;

TEST_CASE("activation fixed points") {
    CHECK(sigmoid(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(tanh_act(0.0) == 0.0);
    const Vector uniform = softmax(Vector{0.0, 0.0, 0.0, 0.0});
    for (double v : uniform) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("sigmoid symmetry over a wide range") {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-50.0, 50.0);
        CHECK(sigmoid(x) + sigmoid(-x) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("softmax outputs are probability vectors") {
    // Logit gaps below ~36 keep every component strictly inside (0,1); past
    // that, 1 - e^{-gap} is no longer representable below 1.0.
    Rng rng(6);
    for (int i = 0; i < 200; ++i) {
        Vector v(4);
        for (double& x : v) x = rng.uniform(-15.0, 15.0);
        const Vector y = softmax(v);
        double sum = 0.0;
        for (double p : y) {
            CHECK(p > 0.0);
            CHECK(p < 1.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("softmax stays finite and normalized for extreme logits") {
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        Vector v(4);
        for (double& x : v) x = rng.uniform(-700.0, 700.0);
        const Vector y = softmax(v);
        double sum = 0.0;
        for (double p : y) {
            CHECK(std::isfinite(p));
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("matrix kernels on a hand case") {
    Matrix w(2, 3);
    w(0, 0) = 1;
    w(0, 1) = 2;
    w(0, 2) = 3;
    w(1, 0) = -1;
    w(1, 1) = 0.5;
    w(1, 2) = 0;
    const Vector x{1.0, -1.0, 2.0};
    const Vector y = matvec(w, x);
    CHECK(y[0] == doctest::Approx(5.0));
    CHECK(y[1] == doctest::Approx(-1.5));

    Vector back(3, 0.0);
    tmatvec_add(w, Vector{1.0, 2.0}, back);
    CHECK(back[0] == doctest::Approx(-1.0));
    CHECK(back[1] == doctest::Approx(3.0));
    CHECK(back[2] == doctest::Approx(3.0));

    Matrix g(2, 3);
    add_outer(g, Vector{1.0, -2.0}, x.data());
    CHECK(g(0, 2) == doctest::Approx(2.0));
    CHECK(g(1, 0) == doctest::Approx(-2.0));

    CHECK_THROWS_AS(matvec(w, Vector{1.0}), ValidationError);
}

TEST_CASE("param store enforces unique names and mirrors gradient shapes") {
    ParamStore store;
    store.add("a", 2, 3);
    store.add("b", 4, 1);
    CHECK_THROWS_AS(store.add("a", 1, 1), ValidationError);
    CHECK_THROWS_AS(store.value("missing"), ValidationError);
    CHECK(store.total_coords() == 10);
    CHECK(store.grad("a").rows() == 2);
    CHECK(store.grad("a").cols() == 3);

    store.grad("a")(0, 0) = 3.0;
    store.grad("b")(2, 0) = 4.0;
    CHECK(store.grad_norm() == doctest::Approx(5.0));
    store.scale_grads(0.5);
    CHECK(store.grad("a")(0, 0) == doctest::Approx(1.5));
    store.zero_grads();
    CHECK(store.grad_norm() == 0.0);
}

TEST_CASE("checkpoint text round-trips byte-identically") {
    ParamStore store;
    Rng rng(17);
    Matrix& a = store.add("W", 3, 4);
    Matrix& b = store.add("b", 3, 1);
    for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = rng.uniform(-2.0, 2.0);
    for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] = rng.uniform(-2.0, 2.0);
    // Awkward values as well.
    a(0, 0) = 0.1;
    a(0, 1) = 1.0 / 3.0;
    a(0, 2) = 1e-300;
    a(0, 3) = -12345678.9012345678;

    const std::vector<std::pair<std::string, std::string>> header = {{"arch", "rnn"},
                                                                     {"hidden", "3"}};
    std::ostringstream first;
    store.save(first, header);

    std::istringstream in(first.str());
    std::vector<std::pair<std::string, std::string>> header2;
    const ParamStore loaded = ParamStore::load(in, header2);
    CHECK(header2 == header);
    CHECK(loaded == store);

    std::ostringstream second;
    loaded.save(second, header2);
    CHECK(second.str() == first.str());
}

TEST_CASE("checkpoint loader rejects damaged input") {
    std::istringstream bad_magic("nope 1\n");
    std::vector<std::pair<std::string, std::string>> header;
    CHECK_THROWS_AS(ParamStore::load(bad_magic, header), ValidationError);

    std::istringstream truncated("puedet-checkpoint 1\nheader 0\nparams 1\nW 2 2\n1 2\n");
    CHECK_THROWS_AS(ParamStore::load(truncated, header), ValidationError);

    std::istringstream bad_value("puedet-checkpoint 1\nheader 0\nparams 1\nW 1 1\nnan\n");
    CHECK_THROWS_AS(ParamStore::load(bad_value, header), ValidationError);
}

namespace {

ParamStore scalar_store(double w0) {
    ParamStore store;
    store.add("w", 1, 1)(0, 0) = w0;
    return store;
}

}  // namespace

TEST_CASE("adam leaves parameters alone when gradients are zero") {
    ParamStore store = scalar_store(1.0);
    AdamState state(store, {});
    adam_step(store, state);
    CHECK(store.value("w")(0, 0) == 1.0);
    CHECK(state.steps_taken() == 1);
}

TEST_CASE("adam minimizes a scalar quadratic") {
    // f(w) = w^2, df/dw = 2w, lr = 0.1.
    ParamStore store = scalar_store(1.0);
    AdamConfig config;
    config.learning_rate = 0.1;
    AdamState state(store, config);
    for (int i = 0; i < 200; ++i) {
        store.grad("w")(0, 0) = 2.0 * store.value("w")(0, 0);
        adam_step(store, state);
        CHECK(store.grad("w")(0, 0) == 0.0);  // zeroed after the update
    }
    CHECK(std::abs(store.value("w")(0, 0)) < 0.01);
    CHECK(state.steps_taken() == 200);
}

TEST_CASE("adam is deterministic and shape-checked") {
    auto run = [] {
        ParamStore store = scalar_store(0.7);
        AdamState state(store, {});
        for (int i = 0; i < 50; ++i) {
            store.grad("w")(0, 0) = std::sin(i) * store.value("w")(0, 0);
            adam_step(store, state);
        }
        return store.value("w")(0, 0);
    };
    CHECK(run() == run());

    ParamStore store = scalar_store(1.0);
    AdamState state(store, {});
    ParamStore other;
    other.add("w", 1, 1);
    other.add("extra", 1, 1);
    CHECK_THROWS_AS(adam_step(other, state), ValidationError);
}

TEST_CASE("finite differences agree exactly on a linear loss") {
    ParamStore store;
    Matrix& w = store.add("w", 4, 4);
    Rng rng(3);
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-1.0, 1.0);
    // loss = sum w_ij, so every analytic gradient entry is 1.
    store.grad("w").fill(1.0);
    auto loss = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) acc += w.data()[i];
        return acc;
    };
    Rng check_rng(4);
    const GradCheckReport report =
        finite_difference_check(loss, store, 1e-5, 1000, check_rng);
    CHECK(report.coords_checked == 16);
    CHECK(report.max_rel_error < 1e-9);
}

TEST_CASE("finite difference check samples the requested coordinate count") {
    ParamStore store;
    store.add("w", 10, 10);
    store.grad("w").fill(0.0);
    auto loss = [] { return 1.0; };  // constant: numeric and analytic both zero
    Rng rng(9);
    const GradCheckReport report = finite_difference_check(loss, store, 1e-5, 40, rng);
    CHECK(report.coords_checked == 40);
    CHECK(report.max_rel_error == 0.0);
}
