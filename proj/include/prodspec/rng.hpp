#ifndef PRODSPEC_RNG_HPP
#define PRODSPEC_RNG_HPP

/*
 * Seeded random stream plus the exact scalar samplers everything else is
 * built on: log-Gamma, log-Beta and uniform angles.
 *
 * The generator is PCG32 (Melissa O'Neill's pcg32_random_r). The stream
 * increment is derived from stream_id, so (seed, stream_id) selects one of
 * 2^63 statistically independent sequences; replicated Monte Carlo runs
 * assign stream_id = replicate index. Identical (seed, stream_id) yields a
 * bit-identical sequence.
 *
 * Samplers work in the log domain: they return log X rather than X, so
 * downstream products of many factors never underflow.
 */

#include <cstdint>

namespace prodspec {

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint32_t next_u32();

    // Uniform on the open interval (0,1); safe to take logs of.
    double uniform01();

    // Uniform on [0,1).
    double uniform_halfopen();

    // Standard normal via Box-Muller; the second variate is cached.
    double normal();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 1;
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// log X with X ~ Gamma(shape, 1), exact for any integer shape >= 1.
// Marsaglia-Tsang rejection for shape >= 2, inverse-CDF exponential for
// shape == 1. Throws ParamError for shape == 0.
double sample_log_gamma(std::uint32_t shape, RandomStream& rng);

// log X with X ~ Beta(a, b), a,b integer >= 1, built from two Gamma draws
// combined with log-sum-exp. The result is always <= 0.
double sample_log_beta(std::uint32_t a, std::uint32_t b, RandomStream& rng);

// Uniform angle on [0, 2*pi).
double sample_angle(RandomStream& rng);

// log(exp(p) + exp(q)) without overflow.
double log_add_exp(double p, double q);

} // namespace prodspec

#endif
