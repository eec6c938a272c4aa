#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "prodspec/errors.hpp"
#include "prodspec/rng.hpp"
#include "test_support.hpp"

using namespace prodspec;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TEST_CASE("identical (seed, stream) reproduces the sequence bit for bit") {
    RandomStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u32() == b.next_u32());
    RandomStream c(42, 7), d(42, 7);
    for (int i = 0; i < 200; ++i) {
        CHECK(sample_log_gamma(5, c) == sample_log_gamma(5, d));
        CHECK(sample_log_beta(3, 4, c) == sample_log_beta(3, 4, d));
    }
}

TEST_CASE("distinct streams differ") {
    RandomStream a(42, 0), b(42, 1), c(43, 0);
    int equal_ab = 0, equal_ac = 0;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u32();
        if (va == b.next_u32()) ++equal_ab;
        if (va == c.next_u32()) ++equal_ac;
    }
    CHECK(equal_ab < 4);
    CHECK(equal_ac < 4);
}

TEST_CASE("uniform01 stays inside the open interval") {
    RandomStream rng(1, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform01();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("gamma moments: shape 1 and 5") {
    RandomStream rng(11, 0);
    const int n = 1000000;
    double acc1 = 0.0, acc5 = 0.0;
    for (int i = 0; i < n; ++i) acc1 += std::exp(sample_log_gamma(1, rng));
    for (int i = 0; i < n; ++i) acc5 += std::exp(sample_log_gamma(5, rng));
    CHECK(acc1 / n == doctest::Approx(1.0).epsilon(0.004));
    CHECK(acc5 / n == doctest::Approx(5.0).epsilon(0.002)); // 5.0 +- 0.01
}

TEST_CASE("gamma log-domain mean matches digamma") {
    // E log Gamma(3) = psi(3) = 0.92278433...
    RandomStream rng(12, 0);
    const int n = 1000000;
    std::vector<double> logs(n);
    for (int i = 0; i < n; ++i) logs[i] = sample_log_gamma(3, rng);
    const double se = testsupport::sample_sd(logs) / std::sqrt(double(n));
    CHECK(std::fabs(testsupport::sample_mean(logs) - 0.92278433509846714) <
          4.0 * se);
}

TEST_CASE("beta moments") {
    RandomStream rng(13, 0);
    const int n = 1000000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::exp(sample_log_beta(1, 1, rng));
    CHECK(acc / n == doctest::Approx(0.5).epsilon(0.004)); // 0.5 +- 0.002

    acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::exp(sample_log_beta(2, 3, rng));
    CHECK(acc / n == doctest::Approx(0.4).epsilon(0.003));
}

TEST_CASE("beta log-domain mean matches the digamma difference") {
    // E log Beta(4,2) = psi(4) - psi(6) = -0.45 exactly.
    RandomStream rng(14, 0);
    const int n = 1000000;
    std::vector<double> logs(n);
    for (int i = 0; i < n; ++i) logs[i] = sample_log_beta(4, 2, rng);
    const double se = testsupport::sample_sd(logs) / std::sqrt(double(n));
    CHECK(std::fabs(testsupport::sample_mean(logs) + 0.45) < 4.0 * se);
}

TEST_CASE("angles are uniform on [0, 2pi)") {
    RandomStream rng(15, 0);
    const int n = 1000000;
    double acc = 0.0;
    int below_pi = 0;
    for (int i = 0; i < n; ++i) {
        const double a = sample_angle(rng);
        CHECK(a >= 0.0);
        CHECK(a < kTwoPi);
        acc += a;
        if (a < kTwoPi / 2.0) ++below_pi;
    }
    CHECK(std::fabs(acc / n - M_PI) < 0.01);
    CHECK(std::fabs(double(below_pi) / n - 0.5) < 0.002);

    RandomStream rng2(16, 0);
    std::vector<double> sample(10000);
    for (auto& v : sample) v = sample_angle(rng2) / kTwoPi;
    std::sort(sample.begin(), sample.end());
    std::vector<double> cdf(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) cdf[i] = sample[i];
    CHECK(testsupport::ks_against(cdf) <= 0.02);
}

TEST_CASE("gamma distribution against the quadrature CDF oracle") {
    for (unsigned shape : {1u, 2u, 5u, 20u}) {
        RandomStream rng(100 + shape, 0);
        std::vector<double> draws(10000);
        for (auto& v : draws) v = std::exp(sample_log_gamma(shape, rng));
        std::sort(draws.begin(), draws.end());
        const auto cdf = testsupport::cdf_at_sorted(
            [shape](double y) { return testsupport::gamma_density(y, shape); },
            draws, 0.0);
        CHECK(testsupport::ks_against(cdf) <= 0.02);
    }
}

TEST_CASE("beta distribution against the quadrature CDF oracle") {
    for (unsigned a : {1u, 2u, 3u}) {
        for (unsigned b : {1u, 2u, 5u}) {
            RandomStream rng(200 + 10 * a + b, 0);
            std::vector<double> draws(10000);
            for (auto& v : draws) v = std::exp(sample_log_beta(a, b, rng));
            std::sort(draws.begin(), draws.end());
            const auto cdf = testsupport::cdf_at_sorted(
                [a, b](double y) { return testsupport::beta_density(y, a, b); },
                draws, 0.0);
            CHECK(testsupport::ks_against(cdf) <= 0.02);
        }
    }
}

TEST_CASE("log-domain exactness at extreme parameters") {
    RandomStream rng(17, 0);
    for (int i = 0; i < 100000; ++i)
        CHECK(sample_log_beta(1000, 2000, rng) <= 0.0);
    for (int i = 0; i < 10000; ++i)
        CHECK(std::isfinite(sample_log_gamma(1000, rng)));
}

TEST_CASE("zero parameters are rejected") {
    RandomStream rng(18, 0);
    CHECK_THROWS_AS(sample_log_gamma(0, rng), ParamError);
    CHECK_THROWS_AS(sample_log_beta(0, 1, rng), ParamError);
    CHECK_THROWS_AS(sample_log_beta(1, 0, rng), ParamError);
}
