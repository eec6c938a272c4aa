#ifndef PRODSPEC_LIMITS_HPP
#define PRODSPEC_LIMITS_HPP

/*
 * Limiting radial profiles of the scaled eigenvalue moduli, for every
 * parameter regime of the truncated-unitary product plus the Ginibre-product
 * limit.
 *
 * A profile carries (where they exist) the scaling-limit function F, its
 * inverse F^{-1} (which is the limiting radial CDF), the radial density
 * f* = (F^{-1})', and the planar density of the limiting complex point at
 * modulus rho. Arc-law profiles expose no density: the radial limit is the
 * point mass at 1 and the CDF a step function.
 */

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "prodspec/ensembles.hpp"

namespace prodspec {

enum class Regime { GinibrePower, ArcLaw, GeneralF, CircularLaw };

class QProfile {
public:
    // q(t) = value, 0 < value < 1.
    static QProfile constant(double value);
    // q(t) = slope * t with slope in (0, 1].
    static QProfile linear(double slope);
    // Piecewise-linear interpolation of (t_i, q_i); t strictly increasing
    // spanning [0, 1], q_i in [0, 1], adjacent values close enough that the
    // tabulation is plausibly continuous.
    static QProfile tabulated(std::vector<double> t, std::vector<double> q);

    double operator()(double t) const;

private:
    QProfile() = default;
    std::function<double(double)> eval_;
};

class LimitProfile {
public:
    Regime regime() const { return regime_; }
    const std::string& support() const { return support_; }

    bool has_F() const { return static_cast<bool>(F_); }
    bool has_F_inverse() const { return static_cast<bool>(Finv_); }
    bool has_radial_density() const { return static_cast<bool>(fstar_); }
    bool has_planar_density() const { return static_cast<bool>(planar_); }

    double F(double x) const;               // x in (0,1)
    double F_inverse(double y) const;       // y in (0,1)
    double radial_density(double x) const;  // f*(x), x in (0,1)
    double planar_density(double rho) const;

    // Limiting CDF of the scaled radial coordinate, defined for all y >= 0:
    // F^{-1} clamped to [0,1] for GeneralF, the step at 1 for ArcLaw,
    // min(y,1) for the uniform radial regimes.
    double radial_cdf(double y) const;

    LimitProfile(Regime regime, std::string support,
                 std::function<double(double)> F,
                 std::function<double(double)> F_inverse,
                 std::function<double(double)> radial_density,
                 std::function<double(double)> planar_density);

private:
    Regime regime_;
    std::string support_;
    std::function<double(double)> F_;
    std::function<double(double)> Finv_;
    std::function<double(double)> fstar_;
    std::function<double(double)> planar_;
};

// Finite-n scaling function for a truncated-unitary spec:
// F_n(x) = (prod_j n_j x / (n x + l_j))^(1/gamma_n), x in [0, 1],
// with F_n(0) = 0 and F_n(1) = 1 exactly.
double fn_finite(const EnsembleSpec& spec, double gamma_n, double x);

// Limit for products of m Ginibre factors under h_n(r) = r^(2/m)/n: the
// radial coordinate is uniform on [0,1]; under the linear scaling by
// n^(m/2) the planar density is rho^(2/m - 2)/(m*pi) on the unit disk.
LimitProfile ginibre_limit(std::uint32_t m);

// Fixed m, n/n_j -> alpha_j in [0,1].  All alpha_j = 1 gives the arc law;
// otherwise F(x) = prod_j (x / (1 - alpha_j(1-x)))^(1/2) with gamma_n = 2,
// closed forms when all alpha_j are equal.
LimitProfile corollary1_limit(std::uint32_t m,
                              const std::vector<double>& alphas);

// m -> infinity with n/n_j tracking a curve q: gamma_n = m_n and
//   F(x) = x exp(-int_0^1 log(1 - q(t)(1-x)) dt),
//   f(x) = F'(x) = (F(x)/x) int_0^1 (1-q(t))/(1 - q(t)(1-x)) dt,
// radial density f*(y) = 1/f(F^{-1}(y)).
LimitProfile corollary2_limit(const QProfile& q);

// n/n_j -> 1 with sum l_j / n -> beta: beta = 0 gives the arc law;
// finite beta gives F(x) = exp(beta (x-1) / (2x)) (gamma_n = 2); pass
// +infinity for the gamma_n = sum l_j / n normalization.
LimitProfile corollary3_limit(double beta);

// n/n_j -> 0 uniformly, gamma_n = m_n: the radial coordinate
// (|Z|^2/b_n)^(1/m) is uniform on [0,1] and sqrt(R) e^{i Theta} is uniform
// on the unit disk.
LimitProfile corollary4_limit();

// Bracketing bisection for strictly increasing F on (0,1) with limits 0/1:
// returns x with |F(x) - y| <= tol. ContractError when F is not monotone on
// a probe grid.
double invert_monotone(const std::function<double(double)>& F, double y,
                       double tol);

} // namespace prodspec

#endif
