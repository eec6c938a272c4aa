#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "prodspec/ensembles.hpp"
#include "prodspec/errors.hpp"
#include "prodspec/kernel.hpp"
#include "prodspec/oracle.hpp"
#include "prodspec/quadrature.hpp"
#include "prodspec/rng.hpp"

using namespace prodspec;
using Complex = std::complex<double>;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;
}

TEST_CASE("moment constants: closed forms") {
    const auto gin = RadialWeight::ginibre_m1();
    CHECK(compute_log_ck(gin, 0) == doctest::Approx(std::log(kPi)).epsilon(1e-14));
    CHECK(compute_log_ck(gin, 3) ==
          doctest::Approx(std::log(6.0 * kPi)).epsilon(1e-14));
    const auto tr2 = RadialWeight::truncated_m1(2);
    CHECK(compute_log_ck(tr2, 1) ==
          doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-13));
}

TEST_CASE("moment constants: quadrature agrees with the closed forms") {
    const auto gin = RadialWeight::ginibre_m1();
    const auto tr = RadialWeight::truncated_m1(3);
    for (std::uint32_t k = 0; k <= 20; ++k) {
        CHECK(std::fabs(compute_log_ck_quadrature(gin, k) -
                        compute_log_ck(gin, k)) < 1e-8);
        CHECK(std::fabs(compute_log_ck_quadrature(tr, k) -
                        compute_log_ck(tr, k)) < 1e-8);
    }
}

TEST_CASE("normalizing constant") {
    CHECK(log_normalizing_constant(1, RadialWeight::ginibre_m1()) ==
          doctest::Approx(-std::log(kPi)).epsilon(1e-13));
    CHECK(log_normalizing_constant(2, RadialWeight::ginibre_m1()) ==
          doctest::Approx(-std::log(2.0 * kPi * kPi)).epsilon(1e-13));
    CHECK(log_normalizing_constant(1, RadialWeight::truncated_m1(1)) ==
          doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("kernel evaluation") {
    const KernelSpec spec(2, RadialWeight::ginibre_m1());
    const Complex at_zero = kernel_eval(spec, 0.0, 0.0);
    CHECK(at_zero.real() == doctest::Approx(1.0 / kPi).epsilon(1e-13));
    CHECK(at_zero.imag() == doctest::Approx(0.0));
    const Complex at_one = kernel_eval(spec, 1.0, 1.0);
    CHECK(at_one.real() == doctest::Approx(2.0 / kPi).epsilon(1e-13));

    // Hermitian symmetry on random probes.
    const KernelSpec spec8(8, RadialWeight::ginibre_m1());
    RandomStream rng(41, 0);
    for (int i = 0; i < 20; ++i) {
        const Complex z(rng.normal(), rng.normal());
        const Complex w(rng.normal(), rng.normal());
        const Complex a = kernel_eval(spec8, z, w);
        const Complex b = kernel_eval(spec8, w, z);
        CHECK(std::abs(std::conj(a) - b) < 1e-12 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("kernel evaluation does not overflow at large arguments") {
    const KernelSpec spec(64, RadialWeight::ginibre_m1());
    const Complex v = kernel_eval(spec, 20.0, 20.0);
    CHECK(std::isfinite(v.real()));
    CHECK(v.real() > 0.0);
}

TEST_CASE("kernel positive semidefiniteness on probe points") {
    const KernelSpec spec(6, RadialWeight::truncated_m1(2));
    RandomStream rng(42, 0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Complex> pts(4);
        for (auto& p : pts)
            p = Complex(rng.uniform01() * 0.9, rng.uniform01() * 0.9 - 0.45);
        ComplexMatrix gram(4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                gram(i, j) = kernel_eval(spec, pts[i], pts[j]);
        const auto eig = eigenvalues(gram, 1e-8, true);
        for (const auto& lambda : eig.eigenvalues()) {
            CHECK(lambda.real() >= -1e-8);
            CHECK(std::fabs(lambda.imag()) < 1e-8);
        }
    }
}

TEST_CASE("radial mixture density: closed single-point values") {
    const KernelSpec p1(1, RadialWeight::ginibre_m1());
    CHECK(radial_density(p1, 1.0) ==
          doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-13));
    CHECK(radial_density(p1, 0.0) == 0.0);
    CHECK_THROWS_AS(radial_density(p1, -1.0), ParamError);
}

TEST_CASE("radial mixture density normalizes for all weight kinds") {
    std::vector<double> xs, phis;
    for (int i = 0; i <= 400; ++i) {
        const double x = 6.0 * i / 400.0;
        xs.push_back(x);
        phis.push_back(std::exp(-x * x) * (1.0 + 0.2 * std::sin(3.0 * x)));
    }
    const std::vector<KernelSpec> specs = {
        KernelSpec(5, RadialWeight::ginibre_m1()),
        KernelSpec(4, RadialWeight::truncated_m1(3)),
        KernelSpec(3, RadialWeight::tabulated(xs, phis)),
    };
    for (const auto& spec : specs) {
        const double upper = std::isinf(spec.weight().support_upper())
                                 ? std::sqrt(double(spec.n())) + 10.0
                                 : spec.weight().support_upper();
        const double total = integrate(
            [&](double r) { return radial_density(spec, r); }, 0.0, upper,
            {1e-10});
        CHECK(std::fabs(total - 1.0) < 1e-8);
    }
}

TEST_CASE("one-point density: rotation invariance and polar relation") {
    std::vector<double> xs, phis;
    for (int i = 0; i <= 200; ++i) {
        const double x = 4.0 * i / 200.0;
        xs.push_back(x);
        phis.push_back(1.0 / (1.0 + x * x * x * x));
    }
    const std::vector<KernelSpec> specs = {
        KernelSpec(6, RadialWeight::ginibre_m1()),
        KernelSpec(5, RadialWeight::truncated_m1(2)),
        KernelSpec(3, RadialWeight::tabulated(xs, phis)),
    };
    for (const auto& spec : specs) {
        const double upper = std::isinf(spec.weight().support_upper())
                                 ? 3.5
                                 : 0.99 * spec.weight().support_upper();
        for (int i = 1; i <= 10; ++i) {
            const double r = upper * i / 10.0;
            const double d0 = one_point_density(spec, Complex(r, 0.0));
            for (double theta : {0.7, 2.1, 4.4}) {
                const double dt = one_point_density(
                    spec, Complex(r * std::cos(theta), r * std::sin(theta)));
                CHECK(std::fabs(dt - d0) <= 1e-12 * (1.0 + d0));
            }
            CHECK(std::fabs(kTwoPi * r * d0 - radial_density(spec, r)) <
                  1e-10 * (1.0 + radial_density(spec, r)));
        }
    }
}

TEST_CASE("one-point density integrates to one over the plane") {
    const KernelSpec spec(4, RadialWeight::ginibre_m1());
    const double total = integrate(
        [&](double r) {
            return kTwoPi * r * one_point_density(spec, Complex(r, 0.0));
        },
        0.0, 12.0, {1e-9});
    CHECK(std::fabs(total - 1.0) < 1e-6);
}

TEST_CASE("sampled moduli follow the radial mixture density") {
    // Structural draws for the single-factor ensemble against P_n, counted
    // in equal-probability bins (quantile edges from the quadrature CDF).
    const std::uint32_t n = 50;
    const KernelSpec spec(n, RadialWeight::ginibre_m1());
    const auto ens = EnsembleSpec::ginibre(n, 1);

    const int bins = 25;
    const double upper = std::sqrt(double(n)) + 8.0;
    // CDF grid by cumulative quadrature, then quantile edges by bisection.
    auto cdf = [&](double r) {
        return integrate([&](double s) { return radial_density(spec, s); },
                         0.0, r, {1e-10});
    };
    std::vector<double> edges(bins + 1);
    edges[0] = 0.0;
    edges[bins] = upper;
    for (int b = 1; b < bins; ++b) {
        const double target = double(b) / bins;
        double lo = 0.0, hi = upper;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (cdf(mid) < target ? lo : hi) = mid;
        }
        edges[b] = 0.5 * (lo + hi);
    }

    const int draws = 4000; // 200000 moduli
    std::vector<int> counts(bins, 0);
    for (int d = 0; d < draws; ++d) {
        RandomStream rng(55, d);
        const auto s = sample_radii(ens, rng).log_sq_moduli();
        for (double ls : s) {
            const double r = std::exp(0.5 * ls);
            int b = int(std::upper_bound(edges.begin(), edges.end(), r) -
                        edges.begin()) -
                    1;
            if (b < 0) b = 0;
            if (b >= bins) b = bins - 1;
            ++counts[b];
        }
    }
    const double total = double(draws) * n;
    const double p = 1.0 / bins;
    const double se = std::sqrt(total * p * (1.0 - p));
    for (int b = 0; b < bins; ++b)
        CHECK(std::fabs(counts[b] - total * p) < 3.0 * se);
}

TEST_CASE("weight validation") {
    CHECK_THROWS_AS(RadialWeight::truncated_m1(0), ParamError);
    CHECK_THROWS_AS(RadialWeight::tabulated({0.0}, {1.0}), ParamError);
    CHECK_THROWS_AS(RadialWeight::tabulated({0.0, 0.0}, {1.0, 1.0}),
                    ParamError);
    CHECK_THROWS_AS(RadialWeight::tabulated({0.0, 1.0}, {1.0, -1.0}),
                    ParamError);
    // zero weight has no usable moments
    CHECK_THROWS_AS(KernelSpec(2, RadialWeight::tabulated({0.0, 1.0},
                                                          {0.0, 0.0})),
                    ParamError);
}
