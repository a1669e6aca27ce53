#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pairfinder {

// Thin wrapper over std::mt19937_64. The engine's output sequence is fixed by
// the standard; the conversions to doubles/normals below are done here rather
// than through <random> distributions, whose algorithms are implementation
// defined, so that seeded results are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform();

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be > 0.
    std::size_t index(std::size_t n);

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller; the second variate is cached.
    double normal();

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Per-pair seed: FNV-1a over `symbol`, a 0x00 separator and `model_id`,
// xor-ed with the master seed, then passed through the splitmix64 finalizer.
// Depends only on its arguments, so any training schedule gives the same seeds.
std::uint64_t derive_seed(std::uint64_t master, std::string_view symbol, std::string_view model_id);

// Sub-seed for the i-th independent stream under `seed` (trees in a forest,
// voters in an ensemble).
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t i) {
    return splitmix64(seed ^ splitmix64(i + 0x632be59bd9b4e019ULL));
}

}  // namespace pairfinder
