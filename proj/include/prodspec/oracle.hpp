#ifndef PRODSPEC_ORACLE_HPP
#define PRODSPEC_ORACLE_HPP

/*
 * Brute-force matrix route: sample the actual factor matrices, multiply,
 * and compute eigenvalues with a dense complex eigensolver (balancing,
 * Householder reduction to Hessenberg form, then shifted QR with Wilkinson
 * shifts and deflation). Ground truth for the structural samplers at small
 * dimension; oracle_spectrum refuses n > 64.
 *
 * Long products are accumulated with per-factor rescaling: the largest
 * entry magnitude is divided out into a running log scale, and eigenvalue
 * moduli are recovered as exp(log_scale + log |lambda of scaled product|).
 */

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "prodspec/ensembles.hpp"
#include "prodspec/rng.hpp"

namespace prodspec {

inline constexpr std::uint32_t kOracleMaxDim = 64;

class ComplexMatrix {
public:
    explicit ComplexMatrix(std::size_t n);
    static ComplexMatrix identity(std::size_t n);

    std::size_t dim() const { return n_; }

    std::complex<double>& operator()(std::size_t i, std::size_t j) {
        return data_[i * n_ + j];
    }
    const std::complex<double>& operator()(std::size_t i,
                                           std::size_t j) const {
        return data_[i * n_ + j];
    }

    bool all_finite() const;
    double max_abs() const;

private:
    std::size_t n_;
    std::vector<std::complex<double>> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

struct SpectrumResult {
    // Eigenvalues of the rescaled product; the true eigenvalues are
    // scaled_eigenvalues[i] * exp(log_scale).
    std::vector<std::complex<double>> scaled_eigenvalues;
    double log_scale = 0.0;
    // max |A V - V T| / max(1, |A|_F) over the Schur factorization;
    // NaN when the caller skipped the residual.
    double residual = 0.0;

    std::vector<std::complex<double>> eigenvalues() const;
    double log_sq_modulus(std::size_t i) const;
    double argument(std::size_t i) const; // in [0, 2*pi)
};

// Entries i.i.d. standard complex normal: real and imaginary parts
// independent N(0, 1/2), unit total variance.
ComplexMatrix sample_ginibre_matrix(std::size_t n, RandomStream& rng);

// Haar-distributed unitary: QR of a Ginibre draw with the phase correction
// that makes the factorization unique (each column of Q multiplied by the
// phase of the matching diagonal entry of R). Plain QR without the
// correction is not Haar.
ComplexMatrix sample_haar_unitary(std::size_t n, RandomStream& rng);

// Leading principal n x n block.
ComplexMatrix truncate_top_left(const ComplexMatrix& m, std::size_t n);

// All eigenvalues via balancing -> Hessenberg -> shifted QR, iteration cap
// 30n sweeps. Throws NumericError on non-convergence (the message carries
// how many eigenvalues had deflated) and when the Schur residual exceeds
// tol. Set compute_residual = false to skip the Schur-vector accumulation.
SpectrumResult eigenvalues(const ComplexMatrix& m, double tol = 1e-8,
                           bool compute_residual = true);

// |det M| via QR, used as an independent check on eigenvalue products.
double log_abs_det(const ComplexMatrix& m);

// Samples the m factor matrices for the spec (Ginibre n x n draws, or
// n x n corners of Haar unitaries of sizes n + l_r), multiplies them as
// X_m ... X_1, and returns the spectrum. Guard: spec.n() <= kOracleMaxDim.
SpectrumResult oracle_spectrum(const EnsembleSpec& spec, RandomStream& rng);

} // namespace prodspec

#endif
