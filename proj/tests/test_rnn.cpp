#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "puedet/errors.hpp"
#include "puedet/grad_check.hpp"
#include "puedet/rnn.hpp"
#include "test_oracles.hpp"

using namespace puedet;

namespace {

SensedSeries bit_series(std::vector<std::uint8_t> bits) {
    SensedSeries s;
    s.attack_mask.assign(bits.size(), 0);
    s.pu_busy = bits;
    s.bits = std::move(bits);
    s.slot_period = 0.25;
    return s;
}

SensedSeries repeat_pattern(const std::vector<std::uint8_t>& pattern, std::size_t slots) {
    std::vector<std::uint8_t> bits(slots);
    for (std::size_t i = 0; i < slots; ++i) bits[i] = pattern[i % pattern.size()];
    return bit_series(std::move(bits));
}

SensedSeries random_series(std::size_t slots, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::uint8_t> bits(slots);
    for (auto& b : bits) b = rng.uniform() < 0.5 ? 1 : 0;
    return bit_series(std::move(bits));
}

RnnParams zero_rnn(std::size_t hidden, std::size_t input_len, std::size_t label_bits) {
    Rng rng(0);
    RnnParams p = RnnParams::init(hidden, input_len, label_bits, rng);
    for (std::size_t i = 0; i < p.store.count(); ++i) p.store.value_at(i).fill(0.0);
    return p;
}

}  // namespace

TEST_CASE("rnn_step with all-zero parameters gives zero state and uniform output") {
    RnnParams p = zero_rnn(3, 4, 2);
    RnnState state{Vector(3, 0.5)};
    const auto [next, y] = rnn_step(p, state, std::vector<std::uint8_t>{1, 0, 1, 1});
    for (double h : next.h) CHECK(h == 0.0);
    for (double v : y) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("rnn_step without recurrent weights is memoryless") {
    Rng rng(12);
    RnnParams p = RnnParams::init(8, 4, 2, rng);
    p.store.value("W_hh").fill(0.0);
    const std::vector<std::uint8_t> window{1, 1, 0, 1};
    const auto [h1, y1] = rnn_step(p, RnnState{Vector(8, 0.9)}, window);
    const auto [h2, y2] = rnn_step(p, RnnState{Vector(8, -0.9)}, window);
    for (std::size_t i = 0; i < y1.size(); ++i) {
        CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));
    }
}

TEST_CASE("rnn_step matches an independently computed fixture") {
    // m=2, l_I=2, l_O=2; expected values computed with an external tool.
    RnnParams p = zero_rnn(2, 2, 1);
    Matrix& w_hx = p.store.value("W_hx");
    w_hx(0, 0) = 0.5;
    w_hx(0, 1) = -0.25;
    w_hx(1, 0) = 0.3;
    w_hx(1, 1) = 0.8;
    Matrix& w_hh = p.store.value("W_hh");
    w_hh(0, 0) = 0.1;
    w_hh(0, 1) = 0.2;
    w_hh(1, 0) = -0.3;
    w_hh(1, 1) = 0.4;
    Matrix& w_yh = p.store.value("W_yh");
    w_yh(0, 0) = 0.7;
    w_yh(0, 1) = -0.6;
    w_yh(1, 0) = 0.2;
    w_yh(1, 1) = 0.9;
    p.store.value("b_h")(0, 0) = 0.05;
    p.store.value("b_h")(1, 0) = -0.1;
    p.store.value("b_y")(1, 0) = 0.1;

    RnnState state{Vector{0.2, -0.5}};
    const auto [next, y] = rnn_step(p, state, std::vector<std::uint8_t>{1, 0});
    CHECK(next.h[0] == doctest::Approx(0.43819931483276769).epsilon(1e-14));
    CHECK(next.h[1] == doctest::Approx(-0.059928103529143524).epsilon(1e-14));
    CHECK(y[0] == doctest::Approx(0.55205860814455465).epsilon(1e-14));
    CHECK(y[1] == doctest::Approx(0.44794139185544529).epsilon(1e-14));
}

TEST_CASE("rnn_step validates dimensions and inputs") {
    Rng rng(1);
    RnnParams p = RnnParams::init(4, 3, 1, rng);
    CHECK_THROWS_AS(rnn_step(p, RnnState{Vector(2, 0.0)},
                             std::vector<std::uint8_t>{1, 0, 1}),
                    ValidationError);
    CHECK_THROWS_AS(rnn_step(p, RnnState{Vector(4, 0.0)}, std::vector<std::uint8_t>{1}),
                    ValidationError);
    CHECK_THROWS_AS(rnn_step(p, RnnState{Vector(4, 0.0)},
                             std::vector<std::uint8_t>{1, 0, 2}),
                    ValidationError);
}

TEST_CASE("rnn_forward iterates rnn_step") {
    Rng rng(5);
    RnnParams p = RnnParams::init(6, 4, 2, rng);
    const std::vector<std::vector<std::uint8_t>> one = {{1, 0, 1, 0}};
    const RnnState zero{Vector(6, 0.0)};

    SUBCASE("length one equals a single step") {
        const RnnTrace trace = rnn_forward(p, zero, one);
        const auto [h, y] = rnn_step(p, zero, one[0]);
        CHECK(trace.states.size() == 1);
        CHECK(trace.outputs.size() == 1);
        CHECK(trace.states[0] == h.h);
        CHECK(trace.outputs[0] == y);
    }
    SUBCASE("outputs are order sensitive") {
        std::vector<std::vector<std::uint8_t>> inputs = {
            {1, 0, 0, 0}, {0, 1, 1, 0}, {1, 1, 1, 1}, {0, 0, 0, 1}};
        const RnnTrace forward = rnn_forward(p, zero, inputs);
        std::swap(inputs[0], inputs[2]);
        const RnnTrace swapped = rnn_forward(p, zero, inputs);
        CHECK(forward.outputs.size() == swapped.outputs.size());
        bool any_diff = false;
        for (std::size_t t = 0; t < forward.outputs.size(); ++t) {
            if (forward.outputs[t] != swapped.outputs[t]) any_diff = true;
        }
        CHECK(any_diff);
    }
    SUBCASE("every output is a probability vector") {
        std::vector<std::vector<std::uint8_t>> inputs(10, std::vector<std::uint8_t>{1, 0, 1, 1});
        const RnnTrace trace = rnn_forward(p, zero, inputs);
        for (const Vector& y : trace.outputs) {
            double sum = 0.0;
            for (double v : y) sum += v;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("empty sequence is rejected") {
        CHECK_THROWS_AS(rnn_forward(p, zero, {}), ValidationError);
    }
}

TEST_CASE("rnn_train learns a constant series") {
    const SensedSeries series = repeat_pattern({0}, 5000);
    WindowConfig window{4, 2, 2};
    TrainOptions options;
    options.hidden = 16;
    options.epochs = 50;
    Rng rng(2024);
    const RnnTrainResult result = rnn_train(series, window, options, rng);
    CHECK(result.loss_history.size() == 50);
    CHECK(result.loss_history.back() <= result.loss_history.front());
    CHECK(result.loss_history.back() < 1e-3);
}

TEST_CASE("rnn_train learns a deterministic alternating series") {
    const SensedSeries series = repeat_pattern({0, 1}, 4000);
    WindowConfig window{2, 1, 1};
    TrainOptions options;
    options.hidden = 16;
    options.epochs = 50;
    Rng rng(7);
    const RnnTrainResult result = rnn_train(series, window, options, rng);
    CHECK(result.loss_history.back() < 1e-3);
}

TEST_CASE("rnn_train is deterministic given the seed") {
    const SensedSeries series = random_series(600, 3);
    WindowConfig window{4, 2, 2};
    TrainOptions options;
    options.hidden = 8;
    options.epochs = 3;
    Rng rng1(55), rng2(55);
    const RnnTrainResult a = rnn_train(series, window, options, rng1);
    const RnnTrainResult b = rnn_train(series, window, options, rng2);
    CHECK(a.params.store == b.params.store);
    CHECK(a.loss_history == b.loss_history);
}

TEST_CASE("rnn_train rejects series that yield no training step") {
    const SensedSeries series = repeat_pattern({1}, 5);
    WindowConfig window{4, 2, 2};
    TrainOptions options;
    Rng rng(1);
    CHECK_THROWS_AS(rnn_train(series, window, options, rng), ValidationError);
}

TEST_CASE("BPTT gradients match central finite differences") {
    const SensedSeries series = random_series(200, 9);
    WindowConfig window{4, 2, 2};
    const auto steps = enumerate_steps(series, window);
    REQUIRE(steps.size() >= 20);
    std::span<const PredictionStep> batch(steps.data(), 20);

    Rng init(77);
    RnnParams params = RnnParams::init(32, window.input_len, window.compare_len, init);
    rnn_batch_backward(params, series, batch);

    auto loss_fn = [&] { return rnn_batch_loss(params, series, batch); };
    Rng sample(123);
    const GradCheckReport report =
        finite_difference_check(loss_fn, params.store, 1e-5, 150, sample);
    CHECK(report.coords_checked >= 100);
    CHECK(report.max_rel_error < 1e-4);
}
