#include "prodspec/rng.hpp"

#include <cmath>

#include "prodspec/errors.hpp"

namespace prodspec {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInv2_53 = 1.0 / 9007199254740992.0; // 2^-53
} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    inc_ = (stream_id << 1u) | 1u;
    state_ = 0;
    next_u32();
    state_ += seed;
    next_u32();
}

std::uint32_t RandomStream::next_u32() {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
}

double RandomStream::uniform01() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    const std::uint64_t bits = ((hi << 32) | lo) >> 11; // 53 bits
    return (static_cast<double>(bits) + 0.5) * kInv2_53;
}

double RandomStream::uniform_halfopen() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    const std::uint64_t bits = ((hi << 32) | lo) >> 11;
    return static_cast<double>(bits) * kInv2_53;
}

double RandomStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform_halfopen();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = kTwoPi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double log_add_exp(double p, double q) {
    const double hi = p > q ? p : q;
    const double lo = p > q ? q : p;
    if (!std::isfinite(hi)) return hi;
    return hi + std::log1p(std::exp(lo - hi));
}

double sample_log_gamma(std::uint32_t shape, RandomStream& rng) {
    if (shape == 0) throw ParamError("sample_log_gamma: shape must be >= 1");
    if (shape == 1) {
        // Gamma(1) is Exp(1)
        return std::log(-std::log(rng.uniform01()));
    }
    // Marsaglia-Tsang (2000); exact rejection sampler for shape >= 1.
    const double a = static_cast<double>(shape);
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return std::log(d * v);
    }
}

double sample_log_beta(std::uint32_t a, std::uint32_t b, RandomStream& rng) {
    if (a == 0 || b == 0)
        throw ParamError("sample_log_beta: both parameters must be >= 1");
    const double lga = sample_log_gamma(a, rng);
    const double lgb = sample_log_gamma(b, rng);
    // Beta(a,b) = G_a / (G_a + G_b); log of the ratio stays <= 0.
    return lga - log_add_exp(lga, lgb);
}

double sample_angle(RandomStream& rng) {
    return kTwoPi * rng.uniform_halfopen();
}

} // namespace prodspec
