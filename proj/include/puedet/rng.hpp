#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace puedet {

// 64-bit hash used to derive sub-stream seeds from stream names.
std::uint64_t fnv1a64(std::string_view text);

// splitmix64 finalizer; decorrelates nearby seed values.
std::uint64_t mix64(std::uint64_t x);

// Deterministic random generator. All randomness in the toolkit flows from a
// single master seed through named sub-streams, so any artifact can be
// regenerated bit-exactly. Sampling is done from raw mt19937_64 output
// (which the standard pins down exactly) rather than std:: distributions,
// whose sequences vary across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Derives an independent generator for (master seed, stream name).
    static Rng stream(std::uint64_t master_seed, std::string_view name) {
        return Rng(mix64(master_seed ^ fnv1a64(name)));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1); never returns an endpoint.
    double uniform_open() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Exponential with the given mean; strictly positive.
    double exponential(double mean) { return -mean * std::log(uniform_open()); }

    // Uniform integer in [0, n). n must be nonzero.
    std::uint64_t index(std::uint64_t n);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace puedet
