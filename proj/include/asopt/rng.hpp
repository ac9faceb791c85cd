#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace asopt {

// Seeded random stream. The engine is std::mt19937_64; the distributions are
// implemented here so that draws are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent sub-stream derived from a root seed and a name, e.g.
    // Rng::stream(seed, "epmc.init"). Adding a new stream never perturbs the
    // draws of an existing one.
    static Rng stream(std::uint64_t root, std::string_view name);
    static Rng stream(std::uint64_t root, std::string_view name, std::uint64_t index);

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1).
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1].
    double uniform_open_closed() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be positive.
    std::size_t index(std::size_t n);

    // Standard normal (Box-Muller, one value per call).
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer; used to derive seeds.
std::uint64_t mix_seed(std::uint64_t x);

} // namespace asopt
