#ifndef PRODSPEC_STATS_HPP
#define PRODSPEC_STATS_HPP

/*
 * Empirical-distribution machinery and the special functions used by the
 * exact-moment formulas: sorted empirical measures with CDF evaluation,
 * one- and two-sample Kolmogorov-Smirnov distances, digamma, and the
 * centered fourth-moment diagnostic for half-plane counts.
 */

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace prodspec {

class EnsembleSpec; // ensembles.hpp
class RandomStream; // rng.hpp

// Sorted sample with O(log n) CDF evaluation. Rejects NaNs and empty input.
class EmpiricalMeasure {
public:
    explicit EmpiricalMeasure(std::vector<double> values);

    std::size_t count() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

    // Fraction of values <= x (right-continuous).
    double ecdf(double x) const;

    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

private:
    std::vector<double> values_;
};

// sup-distance between the sample ECDF and an analytic CDF, evaluated
// exactly at the jump points: max_i max(i/N - F(x_i), F(x_i) - (i-1)/N).
double ks_one_sample(const EmpiricalMeasure& sample,
                     const std::function<double(double)>& cdf);

// sup |ECDF_a - ECDF_b| over the merged support. Symmetric, tie-aware.
double ks_two_sample(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

// psi(x) for x > 0: upward recurrence until x >= 10, then the asymptotic
// series through the 1/x^8 term. Absolute error below 1e-12.
double digamma(double x);

// Monte Carlo estimate of E[sum_j (h(Z_j) - Eh)]^4 / n^2 where h is the
// indicator of the half-plane {arg z in [angle, angle+pi)} and Z_j are the
// joint eigenvalues of one ensemble draw (matrix route, so the angular
// dependence structure is the real one). Eh comes from a separate pilot run
// of the same size. Requires reps >= 100 and spec.n within the matrix-route
// size guard.
double fourth_moment_ratio(const EnsembleSpec& spec, double halfplane_angle,
                           std::size_t reps, RandomStream& rng);

} // namespace prodspec

#endif
