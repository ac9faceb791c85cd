#include "asopt/rng.hpp"

#include <cmath>
#include <numbers>

namespace asopt {

std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

Rng Rng::stream(std::uint64_t root, std::string_view name)
{
    return Rng(mix_seed(mix_seed(root) ^ fnv1a(name)));
}

Rng Rng::stream(std::uint64_t root, std::string_view name, std::uint64_t index)
{
    return Rng(mix_seed(mix_seed(mix_seed(root) ^ fnv1a(name)) + index));
}

std::size_t Rng::index(std::size_t n)
{
    // rejection sampling on the top of the range keeps the draw unbiased
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x = 0;
    do {
        x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

double Rng::normal()
{
    const double u1 = uniform_open_closed();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace asopt
