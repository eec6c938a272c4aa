#ifndef PRODSPEC_ENSEMBLES_HPP
#define PRODSPEC_ENSEMBLES_HPP

/*
 * Structural samplers for the eigenvalue moduli of the two product
 * ensembles, plus their exact moment formulas.
 *
 * The moduli of the n eigenvalues of a product of m i.i.d. Ginibre factors
 * have, as a multiset, the law of { prod_r G_{j,r} : j = 1..n } with
 * G_{j,r} ~ Gamma(j); for products of truncated Haar unitaries the Gamma
 * factors become Beta(j, l_r). Sampling those scalars costs O(n*m) instead
 * of one O(n^3) eigendecomposition per draw.
 *
 * Everything radial is kept as log |Z_j|^2: for large m the linear-domain
 * product underflows, while every statistic of interest is a function of the
 * log-moduli after scaling.
 *
 * Angles: attach_angles fills i.i.d. Uniform[0, 2*pi) angles, independent of
 * the moduli. This reproduces the single-eigenvalue marginal (modulus and
 * angle of one eigenvalue are independent, the angle uniform) and every
 * limiting empirical-measure statement, but NOT the exact joint law of the
 * n angles. Joint angular statistics must use the matrix route (oracle).
 */

#include <cstdint>
#include <vector>

#include "prodspec/rng.hpp"
#include "prodspec/stats.hpp"

namespace prodspec {

enum class EnsembleKind { GinibreProduct, TruncatedUnitaryProduct };

class EnsembleSpec {
public:
    static EnsembleSpec ginibre(std::uint32_t n, std::uint32_t m);
    static EnsembleSpec truncated(std::uint32_t n, std::uint32_t m,
                                  std::vector<std::uint32_t> gaps);

    EnsembleKind kind() const { return kind_; }
    std::uint32_t n() const { return n_; }
    std::uint32_t m() const { return m_; }

    // Truncation gaps l_1..l_m (factor r is the n x n corner of an
    // (n + l_r) x (n + l_r) Haar unitary). Empty for Ginibre.
    const std::vector<std::uint32_t>& gaps() const { return gaps_; }

    // log b_n = sum_r log(n / (n + l_r)); truncated ensembles only.
    double log_bn() const;

    // log a_n for the linear scaling r -> r / a_n:
    // sqrt(b_n) for truncated products, n^(m/2) for Ginibre products.
    double log_an() const;

private:
    EnsembleSpec(EnsembleKind kind, std::uint32_t n, std::uint32_t m,
                 std::vector<std::uint32_t> gaps);

    EnsembleKind kind_;
    std::uint32_t n_;
    std::uint32_t m_;
    std::vector<std::uint32_t> gaps_;
};

// One draw of the n eigenvalue moduli, entry j-1 holding log |Z_j|^2.
class LogRadialSample {
public:
    LogRadialSample(EnsembleSpec spec, std::vector<double> log_sq_moduli);

    const EnsembleSpec& spec() const { return spec_; }
    const std::vector<double>& log_sq_moduli() const { return log_sq_; }

    bool has_angles() const { return !angles_.empty(); }
    const std::vector<double>& angles() const; // ContractError if absent

private:
    friend LogRadialSample attach_angles(const LogRadialSample& sample,
                                         RandomStream& rng);

    EnsembleSpec spec_;
    std::vector<double> log_sq_;
    std::vector<double> angles_;
};

enum class ScalingKind { GinibrePower, TruncatedPower, Linear };

// A radial scaling h_n applied to the moduli:
//   GinibrePower:   h_n(r) = r^(2/m) / n
//   TruncatedPower: h_n(r) = (r^2 / b_n)^(1/gamma_n), gamma_n >= 1
//   Linear:         h_n(r) = r / a_n
class ScalingRule {
public:
    static ScalingRule ginibre_power(const EnsembleSpec& spec);
    static ScalingRule truncated_power(const EnsembleSpec& spec,
                                       double gamma_n);
    static ScalingRule linear(const EnsembleSpec& spec);

    ScalingKind kind() const { return kind_; }
    double gamma_n() const { return gamma_n_; }
    // log n (GinibrePower), log b_n (TruncatedPower), log a_n (Linear).
    double log_const() const { return log_const_; }
    std::uint32_t power_m() const { return power_m_; }

private:
    ScalingRule(ScalingKind kind, double gamma_n, double log_const,
                std::uint32_t power_m);

    ScalingKind kind_;
    double gamma_n_;
    double log_const_;
    std::uint32_t power_m_;
};

// Draws the radial part: entry j-1 is the sum of m independent log-Gamma(j)
// (Ginibre) or log-Beta(j, l_r) (truncated) variates. The multiset
// {exp(entries)} has exactly the law of {|Z_1|^2, ..., |Z_n|^2}.
LogRadialSample sample_radii(const EnsembleSpec& spec, RandomStream& rng);

// Returns a copy with i.i.d. Uniform[0, 2*pi) angles filled in (see the
// file comment for what that does and does not reproduce). ContractError if
// already attached; the input is never modified.
LogRadialSample attach_angles(const LogRadialSample& sample,
                              RandomStream& rng);

// log h_n(|Z_j|) per entry, in sample order. All arithmetic in log domain.
std::vector<double> scaled_log_values(const LogRadialSample& sample,
                                      const ScalingRule& rule);

// h_n(|Z_j|) as a sorted empirical measure.
EmpiricalMeasure apply_scaling(const LogRadialSample& sample,
                               const ScalingRule& rule);

// E |Z_J|^(2t) with J uniform on {1..n}:
//   (1/n) sum_j (Gamma(j+t)/Gamma(j))^m                  (Ginibre)
//   (1/n) sum_j prod_r B(j+t, l_r)/B(j, l_r)             (truncated)
// Requires t > -1.
double exact_moment(const EnsembleSpec& spec, double t);

// Single-j term of exact_moment (used by the moment tests).
double exact_moment_term(const EnsembleSpec& spec, std::uint32_t j, double t);

// E log |Z_j|^2: m*psi(j) for Ginibre, sum_r (psi(j) - psi(j+l_r)) for
// truncated. 1 <= j <= n.
double exact_log_mean(const EnsembleSpec& spec, std::uint32_t j);

} // namespace prodspec

#endif
