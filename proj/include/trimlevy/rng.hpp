#pragma once

#include <cstdint>
#include <random>

namespace trimlevy {

// Reproducible random stream.  A given (seed, stream_id) pair always yields
// the same draw sequence bit-for-bit; distinct stream_ids give statistically
// independent streams.  All variate generation is hand-rolled on top of the
// raw 64-bit output so sequences do not depend on the standard library's
// distribution implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0,1).
    double uniform();
    double uniform(double a, double b);

    // Unit-rate exponential.
    double exponential();

    // Standard normal (Box-Muller; second variate discarded for
    // reproducibility independent of call pattern).
    double normal();

    // Gamma(r,1) for integer shape, as a sum of unit exponentials.
    double gamma_integer(unsigned r);

    std::uint64_t poisson(double mean);

private:
    std::uint64_t poisson_knuth(double mean);

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

}  // namespace trimlevy
