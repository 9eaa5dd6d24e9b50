#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "puedet/channel.hpp"
#include "puedet/csv.hpp"
#include "puedet/errors.hpp"
#include "test_oracles.hpp"

using namespace puedet;

namespace {

HyperErlangParams simple_on() { return {{0.5, 0.5}, {1, 1}, {0.5, 1.5}}; }
HyperErlangParams simple_off() { return {{0.5, 0.5}, {2, 4}, {2.0, 1.0}}; }

HyperErlangParams complex_on() {
    return {{0.2, 0.05, 0.1, 0.1, 0.2, 0.05, 0.1, 0.03, 0.07, 0.1},
            {2, 1, 2, 2, 1, 3, 10, 4, 3, 6},
            {0.5, 1.2, 0.3, 0.6, 2.0, 0.8, 1.2, 1.8, 2.0, 2.5}};
}

HyperErlangParams complex_off() {
    return {{0.1, 0.15, 0.05, 0.15, 0.12, 0.13, 0.08, 0.05, 0.05, 0.12},
            {4, 2, 3, 5, 15, 4, 3, 6, 5, 1},
            {2.5, 1.3, 4.0, 3.0, 1.0, 1.5, 1.0, 0.8, 1.8, 4.0}};
}

OnOffModel simple_model() { return {simple_on(), simple_off()}; }

}  // namespace

TEST_CASE("expected_sojourn matches the analytic table values") {
    CHECK(expected_sojourn(simple_on()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expected_sojourn(simple_off()) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(expected_sojourn(complex_on()) == doctest::Approx(4.296).epsilon(1e-12));
    CHECK(expected_sojourn(complex_off()) == doctest::Approx(8.23).epsilon(1e-12));
    // Single exponential branch: mean equals the scale.
    CHECK(expected_sojourn({{1.0}, {1}, {2.5}}) == doctest::Approx(2.5));
}

TEST_CASE("parameter validation names the violated invariant") {
    CHECK(oracle::throws_with(
        [] { expected_sojourn({{0.5, 0.4}, {1, 1}, {1.0, 1.0}}); }, "sum to 1"));
    CHECK(oracle::throws_with(
        [] { expected_sojourn({{0.5, 0.5}, {0, 1}, {1.0, 1.0}}); }, "shape"));
    CHECK(oracle::throws_with(
        [] { expected_sojourn({{0.5, 0.5}, {1, 1}, {1.0, 0.0}}); }, "scale"));
    CHECK(oracle::throws_with(
        [] { expected_sojourn({{0.5, 0.5}, {1, 1, 2}, {1.0, 1.0}}); }, "equal length"));
    CHECK(oracle::throws_with([] { expected_sojourn({{}, {}, {}}); }, "branch"));
    CHECK(oracle::throws_with(
        [] { expected_sojourn({{1.5, -0.5}, {1, 1}, {1.0, 1.0}}); }, ">= 0"));
}

TEST_CASE("pdf evaluates the mixture density") {
    // Exp(1) at the origin.
    CHECK(pdf({{1.0}, {1}, {1.0}}, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    // Erlang shape 2, scale 1 at t=1: t e^{-t}.
    CHECK(pdf({{1.0}, {2}, {1.0}}, 1.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(pdf(simple_on(), -0.1), ValidationError);

    SUBCASE("non-negative on a grid") {
        const HyperErlangParams params = complex_off();
        for (int i = 0; i <= 1000; ++i) {
            CHECK(pdf(params, 0.2 * i) >= 0.0);
        }
    }

    SUBCASE("integrates to one (quadrature oracle)") {
        const double integral = oracle::simpson(
            [p = simple_off()](double t) { return pdf(p, t); }, 0.0, 100.0, 40000);
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("sample_sojourn is deterministic and matches its moments") {
    SUBCASE("fixed seed repeats") {
        Rng a(1234), b(1234);
        for (int i = 0; i < 10; ++i) {
            CHECK(sample_sojourn(simple_off(), a) == sample_sojourn(simple_off(), b));
        }
    }
    SUBCASE("Monte-Carlo mean vs expected_sojourn") {
        Rng rng(99);
        const HyperErlangParams params = simple_on();
        double sum = 0.0;
        const int n = 1'000'000;
        for (int i = 0; i < n; ++i) sum += sample_sojourn(params, rng);
        CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
    }
    SUBCASE("Erlang variance k*theta^2") {
        Rng rng(7);
        const HyperErlangParams params{{1.0}, {3}, {2.0}};
        const int n = 1'000'000;
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = sample_sojourn(params, rng);
            sum += x;
            sq += x * x;
        }
        const double mean = sum / n;
        const double var = sq / n - mean * mean;
        CHECK(var == doctest::Approx(12.0).epsilon(0.5 / 12.0));
    }
    SUBCASE("strictly positive") {
        Rng rng(3);
        for (int i = 0; i < 1000; ++i) {
            CHECK(sample_sojourn(simple_on(), rng) > 0.0);
        }
    }
}

TEST_CASE("generate_trace alternates states until the horizon") {
    SUBCASE("tiny horizon yields a single segment") {
        Rng rng(11);
        const ContinuousTrace trace =
            generate_trace(simple_model(), 0.001, ChannelState::Off, rng);
        CHECK(trace.segments.size() == 1);
        CHECK(trace.segments[0].state == ChannelState::Off);
    }
    SUBCASE("alternation, positive durations, horizon covered") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            const double horizon = 50.0;
            const ContinuousTrace trace =
                generate_trace(simple_model(), horizon, ChannelState::On, rng);
            CHECK(trace.segments.front().state == ChannelState::On);
            CHECK(trace.total_duration() >= horizon);
            for (std::size_t i = 0; i < trace.segments.size(); ++i) {
                CHECK(trace.segments[i].duration > 0.0);
                if (i > 0) {
                    CHECK(trace.segments[i].state != trace.segments[i - 1].state);
                }
            }
        }
    }
    SUBCASE("empirical mean ON segment length") {
        Rng rng(21);
        const ContinuousTrace trace =
            generate_trace(simple_model(), 1e5, ChannelState::Off, rng);
        double on_total = 0.0;
        std::size_t on_count = 0;
        for (const Segment& s : trace.segments) {
            if (s.state == ChannelState::On) {
                on_total += s.duration;
                ++on_count;
            }
        }
        CHECK(on_total / double(on_count) == doctest::Approx(1.0).epsilon(0.05));
    }
    SUBCASE("horizon must be positive") {
        Rng rng(1);
        CHECK_THROWS_AS(generate_trace(simple_model(), 0.0, ChannelState::Off, rng),
                        ValidationError);
    }
}

TEST_CASE("sense discretizes the trace and overlays attacks") {
    const SensingConfig sensing{0.01, 0.24};

    SUBCASE("all-ON trace, no attack") {
        ContinuousTrace trace{{{ChannelState::On, 100.0}}};
        Rng rng(5);
        const SensedSeries s = sense(trace, sensing, {0.0}, rng);
        CHECK(s.size() == 400);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(s.bits[i] == 1);
            CHECK(s.attack_mask[i] == 0);
        }
    }
    SUBCASE("attack probability one") {
        ContinuousTrace trace{{{ChannelState::Off, 10.0}}};
        Rng rng(5);
        const SensedSeries s = sense(trace, sensing, {1.0}, rng);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(s.bits[i] == 1);
            CHECK(s.attack_mask[i] == 1);
            CHECK(s.pu_busy[i] == 0);
        }
    }
    SUBCASE("mask density matches the attack probability") {
        Rng trace_rng(31), attack_rng(32);
        const ContinuousTrace trace =
            generate_trace(simple_model(), 1e5 * 0.25, ChannelState::Off, trace_rng);
        const SensedSeries s = sense(trace, sensing, {0.3}, attack_rng);
        REQUIRE(s.size() >= 100'000);
        double density = 0.0;
        for (std::size_t i = 0; i < 100'000; ++i) density += s.attack_mask[i];
        density /= 100'000;
        CHECK(density == doctest::Approx(0.30).epsilon(0.01 / 0.30));
    }
    SUBCASE("no attack means mask all zero and bits reproducible") {
        Rng trace_rng(8);
        const ContinuousTrace trace =
            generate_trace(simple_model(), 500.0, ChannelState::Off, trace_rng);
        Rng a1(100), a2(200);  // different attack streams must not matter
        const SensedSeries s1 = sense(trace, sensing, {0.0}, a1);
        const SensedSeries s2 = sense(trace, sensing, {0.0}, a2);
        CHECK(s1.bits == s2.bits);
        CHECK(s1.bits == s1.pu_busy);
        for (std::uint8_t m : s1.attack_mask) CHECK(m == 0);
    }
    SUBCASE("window overlapping an ON sliver senses busy") {
        // ON only inside [0.005, 0.006]; slot 0 window is [0, 0.01].
        ContinuousTrace trace{{{ChannelState::Off, 0.005},
                               {ChannelState::On, 0.001},
                               {ChannelState::Off, 10.0}}};
        Rng rng(1);
        const SensedSeries s = sense(trace, sensing, {0.0}, rng);
        CHECK(s.bits[0] == 1);
        CHECK(s.bits[1] == 0);
    }
    SUBCASE("attacked slot always observes busy") {
        Rng trace_rng(41), attack_rng(42);
        const ContinuousTrace trace =
            generate_trace(simple_model(), 2000.0, ChannelState::Off, trace_rng);
        const SensedSeries s = sense(trace, sensing, {0.3}, attack_rng);
        s.validate();
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.attack_mask[i] == 1) CHECK(s.bits[i] == 1);
            CHECK(s.bits[i] == (s.pu_busy[i] | s.attack_mask[i]));
        }
    }
    SUBCASE("bit-reproducible for a fixed seed") {
        Rng t1(77), t2(77), a1(78), a2(78);
        const ContinuousTrace tr1 =
            generate_trace(simple_model(), 300.0, ChannelState::Off, t1);
        const ContinuousTrace tr2 =
            generate_trace(simple_model(), 300.0, ChannelState::Off, t2);
        const SensedSeries s1 = sense(tr1, sensing, {0.3}, a1);
        const SensedSeries s2 = sense(tr2, sensing, {0.3}, a2);
        CHECK(s1.bits == s2.bits);
        CHECK(s1.attack_mask == s2.attack_mask);
    }
    SUBCASE("empty or too-short traces are rejected") {
        Rng rng(1);
        ContinuousTrace empty;
        CHECK_THROWS_AS(sense(empty, sensing, {0.0}, rng), ValidationError);
        ContinuousTrace tiny{{{ChannelState::On, 0.1}}};
        CHECK(oracle::throws_with(
            [&] {
                Rng r(1);
                sense(tiny, sensing, {0.0}, r);
            },
            "shorter than one slot"));
    }
}

TEST_CASE("trace and sensed series export to CSV") {
    ContinuousTrace trace{{{ChannelState::Off, 0.5}, {ChannelState::On, 0.25}}};
    std::ostringstream trace_out;
    write_trace_csv(trace_out, trace);
    CHECK(trace_out.str() == "segment,state,duration\n0,0,0.5\n1,1,0.25\n");

    SensedSeries series;
    series.bits = {1, 0, 1};
    series.attack_mask = {0, 0, 1};
    series.pu_busy = {1, 0, 0};
    series.slot_period = 0.25;
    std::ostringstream sensed_out;
    write_sensed_csv(sensed_out, series);
    CHECK(sensed_out.str() == "slot,bit,attack_mask\n0,1,0\n1,0,0\n2,1,1\n");
}
