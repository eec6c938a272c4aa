#ifndef PRODSPEC_KERNEL_HPP
#define PRODSPEC_KERNEL_HPP

/*
 * Determinantal-kernel utilities for rotation-invariant radial weights:
 * the monomial normalization constants c_k = 2*pi * int x^(2k+1) phi(x) dx,
 * the joint-density normalizing constant C with C^{-1} = n! c_0 ... c_{n-1},
 * the reproducing kernel K(z,w) = sum_{k<n} (z conj(w))^k / c_k, the radial
 * mixture density P_n, and the one-point density of a single eigenvalue.
 *
 * Only the single-factor weights have closed forms here; the general
 * multi-factor weights are never needed because sampling goes through the
 * Gamma/Beta product representation instead. Tabulated weights cover
 * everything else via quadrature.
 *
 * log c_k is stored rather than c_k: for the Gaussian weight c_k = pi * k!
 * overflows long before k reaches interesting sizes.
 */

#include <complex>
#include <cstdint>
#include <vector>

namespace prodspec {

enum class WeightKind { GinibreM1, TruncatedM1, Tabulated };

class RadialWeight {
public:
    // phi(x) = exp(-x^2) on [0, inf).
    static RadialWeight ginibre_m1();
    // phi(x) = (l/pi) (1 - x^2)^(l-1) on [0, 1), l >= 1.
    static RadialWeight truncated_m1(std::uint32_t l);
    // Piecewise-linear phi from strictly increasing x >= 0, phi >= 0;
    // support is [x_front, x_back].
    static RadialWeight tabulated(std::vector<double> x,
                                  std::vector<double> phi);

    WeightKind kind() const { return kind_; }
    std::uint32_t l() const { return l_; }

    double operator()(double x) const;
    double log_phi(double x) const; // -inf outside the support / where phi=0
    double support_upper() const;   // +inf for the Gaussian weight

private:
    RadialWeight() = default;

    WeightKind kind_ = WeightKind::GinibreM1;
    std::uint32_t l_ = 0;
    std::vector<double> grid_x_;
    std::vector<double> grid_phi_;
};

// log c_k. Closed forms: log(pi k!) for the Gaussian weight and
// log(l B(k+1, l)) for the truncated one; adaptive quadrature otherwise.
// ParamError when the moment integral is divergent or zero.
double compute_log_ck(const RadialWeight& weight, std::uint32_t k);

// Quadrature route regardless of weight kind (cross-check for the closed
// forms; the u = x^2 substitution tames the truncated weight's endpoint).
double compute_log_ck_quadrature(const RadialWeight& weight, std::uint32_t k);

// log C with C^{-1} = n! c_0 c_1 ... c_{n-1}.
double log_normalizing_constant(std::uint32_t n, const RadialWeight& weight);

// n points with their weight and precomputed log c_0..log c_{n-1}.
class KernelSpec {
public:
    KernelSpec(std::uint32_t n, RadialWeight weight);

    std::uint32_t n() const { return n_; }
    const RadialWeight& weight() const { return weight_; }
    double log_ck(std::uint32_t k) const;
    double log_norm_constant() const;

private:
    std::uint32_t n_;
    RadialWeight weight_;
    std::vector<double> log_c_;
};

// K(z, w) = sum_{k<n} (z conj(w))^k / c_k via a ratio recurrence with
// intermediate rescaling, so partial terms never overflow.
std::complex<double> kernel_eval(const KernelSpec& spec,
                                 std::complex<double> z,
                                 std::complex<double> w);

// Radial mixture density P_n(r) = (1/n) sum_j 2*pi r^(2j-1) phi(r) / c_{j-1},
// each term assembled in the log domain.
double radial_density(const KernelSpec& spec, double r);

// Density of a single eigenvalue at z: (1/n) K(z, z) phi(|z|). Real,
// nonnegative, rotation invariant; 2*pi*r * one_point_density = P_n(r).
double one_point_density(const KernelSpec& spec, std::complex<double> z);

} // namespace prodspec

#endif
