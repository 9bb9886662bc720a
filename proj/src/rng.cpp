#include "trimlevy/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace trimlevy {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    // Mix seed and stream id so that nearby values give unrelated states.
    std::uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + stream_id * 0x100000001b3ULL);
    std::seed_seq seq{static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s) >> 32),
                      static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s) >> 32),
                      static_cast<unsigned>(splitmix64(s)),
                      static_cast<unsigned>(splitmix64(s) >> 32)};
    engine_.seed(seq);
}

double RngStream::uniform() {
    // 53-bit mantissa, strictly inside (0,1).
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) {
    return a + (b - a) * uniform();
}

double RngStream::exponential() {
    return -std::log(uniform());
}

double RngStream::normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

double RngStream::gamma_integer(unsigned r) {
    double s = 0.0;
    for (unsigned i = 0; i < r; ++i) s += exponential();
    return s;
}

std::uint64_t RngStream::poisson_knuth(double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform();
    } while (p > limit);
    return k - 1;
}

std::uint64_t RngStream::poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson: negative mean");
    if (mean == 0.0) return 0;
    // Split large means into chunks so the product method stays in range.
    std::uint64_t total = 0;
    while (mean > 30.0) {
        total += poisson_knuth(30.0);
        mean -= 30.0;
    }
    return total + poisson_knuth(mean);
}

}  // namespace trimlevy
