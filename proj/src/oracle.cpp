#include "prodspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "prodspec/errors.hpp"

namespace prodspec {

namespace {

using Complex = std::complex<double>;

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210;
constexpr double kDeflationTol = 1e-12;

Complex phase_of(Complex v) {
    const double a = std::abs(v);
    return a == 0.0 ? Complex(1.0, 0.0) : v / a;
}

// Householder QR in place: A becomes R, Q accumulated when non-null.
void householder_qr(ComplexMatrix& A, ComplexMatrix* Q) {
    const std::size_t n = A.dim();
    std::vector<Complex> v(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double normx = 0.0;
        for (std::size_t i = k; i < n; ++i) normx += std::norm(A(i, k));
        normx = std::sqrt(normx);
        if (normx == 0.0) continue;
        const Complex alpha = -phase_of(A(k, k)) * normx;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            v[i] = A(i, k);
            if (i == k) v[i] -= alpha;
            vnorm2 += std::norm(v[i]);
        }
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        for (std::size_t j = k; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += std::conj(v[i]) * A(i, j);
            s *= beta;
            for (std::size_t i = k; i < n; ++i) A(i, j) -= s * v[i];
        }
        if (Q != nullptr) {
            for (std::size_t i = 0; i < n; ++i) {
                Complex s = 0.0;
                for (std::size_t j = k; j < n; ++j) s += (*Q)(i, j) * v[j];
                s *= beta;
                for (std::size_t j = k; j < n; ++j)
                    (*Q)(i, j) -= s * std::conj(v[j]);
            }
        }
        A(k, k) = alpha;
        for (std::size_t i = k + 1; i < n; ++i) A(i, k) = 0.0;
    }
}

// Parlett-Reinsch balancing (radix 2); B = D^{-1} A D with D = diag(scale).
void balance(ComplexMatrix& A, std::vector<double>& scale) {
    const std::size_t n = A.dim();
    scale.assign(n, 1.0);
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(A(j, i));
                r += std::abs(A(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            double g = r / 2.0;
            while (c < g) {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while (c > g) {
                f /= 2.0;
                c /= 4.0;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                scale[i] *= f;
                const double inv = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) A(i, j) *= inv;
                for (std::size_t j = 0; j < n; ++j) A(j, i) *= f;
            }
        }
    }
}

// Householder reduction to upper Hessenberg form, Q accumulated on the
// right when non-null.
void hessenberg(ComplexMatrix& A, ComplexMatrix* Q) {
    const std::size_t n = A.dim();
    if (n < 3) return;
    std::vector<Complex> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double normx = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) normx += std::norm(A(i, k));
        normx = std::sqrt(normx);
        if (normx == 0.0) continue;
        const Complex alpha = -phase_of(A(k + 1, k)) * normx;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = A(i, k);
            if (i == k + 1) v[i] -= alpha;
            vnorm2 += std::norm(v[i]);
        }
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        // A <- P A
        for (std::size_t j = k; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i)
                s += std::conj(v[i]) * A(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) A(i, j) -= s * v[i];
        }
        // A <- A P
        for (std::size_t i = 0; i < n; ++i) {
            Complex s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += A(i, j) * v[j];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j)
                A(i, j) -= s * std::conj(v[j]);
        }
        if (Q != nullptr) {
            for (std::size_t i = 0; i < n; ++i) {
                Complex s = 0.0;
                for (std::size_t j = k + 1; j < n; ++j) s += (*Q)(i, j) * v[j];
                s *= beta;
                for (std::size_t j = k + 1; j < n; ++j)
                    (*Q)(i, j) -= s * std::conj(v[j]);
            }
        }
        A(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) A(i, k) = 0.0;
    }
}

struct Givens {
    double c;
    Complex s;
};

// Rotation with [c s; -conj(s) c] [a; b] = [r; 0], c real.
Givens make_givens(Complex a, Complex b) {
    if (b == 0.0) return {1.0, 0.0};
    if (a == 0.0) return {0.0, 1.0};
    const double absa = std::abs(a);
    const double d = std::hypot(absa, std::abs(b));
    return {absa / d, (a / absa) * std::conj(b) / d};
}

Complex wilkinson_shift(const ComplexMatrix& H, std::size_t hi) {
    const Complex a = H(hi - 1, hi - 1);
    const Complex b = H(hi - 1, hi);
    const Complex c = H(hi, hi - 1);
    const Complex d = H(hi, hi);
    const Complex half = 0.5 * (a - d);
    const Complex disc = std::sqrt(half * half + b * c);
    const Complex mu1 = d + half + disc;
    const Complex mu2 = d + half - disc;
    return std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
}

// One explicit shifted QR step on the active window [lo, hi].
void qr_step(ComplexMatrix& H, std::size_t lo, std::size_t hi, Complex shift,
             ComplexMatrix* Q, std::vector<Givens>& rot) {
    const std::size_t n = H.dim();
    for (std::size_t i = lo; i <= hi; ++i) H(i, i) -= shift;
    rot.clear();
    for (std::size_t k = lo; k < hi; ++k) {
        const Givens g = make_givens(H(k, k), H(k + 1, k));
        rot.push_back(g);
        // Rows k, k+1 couple to everything right of the window too.
        for (std::size_t j = k; j < n; ++j) {
            const Complex a = H(k, j);
            const Complex b = H(k + 1, j);
            H(k, j) = g.c * a + g.s * b;
            H(k + 1, j) = -std::conj(g.s) * a + g.c * b;
        }
        H(k + 1, k) = 0.0;
    }
    // Right-multiply by the adjoints: columns (k, k+1) mix as
    // col_k <- c col_k + conj(s) col_{k+1}, col_{k+1} <- -s col_k + c col_{k+1}.
    // Rows above the window carry entries in these columns as well.
    for (std::size_t k = lo; k < hi; ++k) {
        const Givens g = rot[k - lo];
        const std::size_t last = std::min(k + 1, hi);
        for (std::size_t i = 0; i <= last; ++i) {
            const Complex a = H(i, k);
            const Complex b = H(i, k + 1);
            H(i, k) = g.c * a + std::conj(g.s) * b;
            H(i, k + 1) = -g.s * a + g.c * b;
        }
        if (Q != nullptr) {
            for (std::size_t i = 0; i < n; ++i) {
                const Complex a = (*Q)(i, k);
                const Complex b = (*Q)(i, k + 1);
                (*Q)(i, k) = g.c * a + std::conj(g.s) * b;
                (*Q)(i, k + 1) = -g.s * a + g.c * b;
            }
        }
    }
    for (std::size_t i = lo; i <= hi; ++i) H(i, i) += shift;
}

double frobenius(const ComplexMatrix& A) {
    double acc = 0.0;
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t j = 0; j < A.dim(); ++j) acc += std::norm(A(i, j));
    return std::sqrt(acc);
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {
    if (n == 0) throw ParamError("ComplexMatrix: dimension must be >= 1");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool ComplexMatrix::all_finite() const {
    for (const Complex& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double ComplexMatrix::max_abs() const {
    double best = 0.0;
    for (const Complex& v : data_) best = std::max(best, std::abs(v));
    return best;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim())
        throw ParamError("ComplexMatrix: dimension mismatch in product");
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

std::vector<Complex> SpectrumResult::eigenvalues() const {
    std::vector<Complex> out(scaled_eigenvalues);
    const double f = std::exp(log_scale);
    for (Complex& v : out) v *= f;
    return out;
}

double SpectrumResult::log_sq_modulus(std::size_t i) const {
    return 2.0 * (std::log(std::abs(scaled_eigenvalues[i])) + log_scale);
}

double SpectrumResult::argument(std::size_t i) const {
    double a = std::arg(scaled_eigenvalues[i]);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

ComplexMatrix sample_ginibre_matrix(std::size_t n, RandomStream& rng) {
    if (n == 0) throw ParamError("sample_ginibre_matrix: n must be >= 1");
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = Complex(rng.normal() * kInvSqrt2,
                              rng.normal() * kInvSqrt2);
    return m;
}

ComplexMatrix sample_haar_unitary(std::size_t n, RandomStream& rng) {
    if (n == 0) throw ParamError("sample_haar_unitary: n must be >= 1");
    for (int attempt = 0; attempt < 2; ++attempt) {
        ComplexMatrix r = sample_ginibre_matrix(n, rng);
        ComplexMatrix q = ComplexMatrix::identity(n);
        householder_qr(r, &q);
        bool ok = true;
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(r(j, j)) < 1e-290) ok = false;
        if (!ok) continue; // rank-deficient draw, retry once
        for (std::size_t j = 0; j < n; ++j) {
            const Complex lambda = phase_of(r(j, j));
            for (std::size_t i = 0; i < n; ++i) q(i, j) *= lambda;
        }
        return q;
    }
    throw NumericError("sample_haar_unitary: repeated rank-deficient draw");
}

ComplexMatrix truncate_top_left(const ComplexMatrix& m, std::size_t n) {
    if (n == 0 || n > m.dim())
        throw ParamError("truncate_top_left: block size out of range");
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = m(i, j);
    return out;
}

double log_abs_det(const ComplexMatrix& m) {
    ComplexMatrix r = m;
    householder_qr(r, nullptr);
    double acc = 0.0;
    for (std::size_t j = 0; j < r.dim(); ++j)
        acc += std::log(std::abs(r(j, j)));
    return acc;
}

SpectrumResult eigenvalues(const ComplexMatrix& m, double tol,
                           bool compute_residual) {
    if (!(tol > 0.0)) throw ParamError("eigenvalues: tol must be > 0");
    if (!m.all_finite())
        throw ParamError("eigenvalues: matrix has non-finite entries");
    const std::size_t n = m.dim();

    SpectrumResult res;
    res.scaled_eigenvalues.resize(n);
    res.residual = std::numeric_limits<double>::quiet_NaN();
    if (n == 1) {
        res.scaled_eigenvalues[0] = m(0, 0);
        res.residual = 0.0;
        return res;
    }

    ComplexMatrix H = m;
    std::vector<double> scale;
    balance(H, scale);
    ComplexMatrix q(1);
    ComplexMatrix* Q = nullptr;
    if (compute_residual) {
        q = ComplexMatrix::identity(n);
        Q = &q;
    }
    hessenberg(H, Q);

    const std::size_t max_sweeps = 30 * n;
    std::size_t sweeps = 0;
    std::size_t hi = n - 1;
    std::size_t stuck = 0;
    std::vector<Givens> rot;
    rot.reserve(n);
    while (true) {
        // Deflate converged subdiagonals.
        while (hi > 0) {
            const double sub = std::abs(H(hi, hi - 1));
            if (sub <= kDeflationTol *
                           (std::abs(H(hi - 1, hi - 1)) + std::abs(H(hi, hi)))) {
                H(hi, hi - 1) = 0.0;
                --hi;
                stuck = 0;
            } else {
                break;
            }
        }
        if (hi == 0) break;
        // Active window: walk up to the nearest zero subdiagonal.
        std::size_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(H(lo, lo - 1));
            if (sub <= kDeflationTol *
                           (std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo)))) {
                H(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (++sweeps > max_sweeps) {
            std::ostringstream os;
            os << "eigenvalues: QR iteration cap " << max_sweeps
               << " reached with " << (n - 1 - hi) << " of " << n
               << " eigenvalues deflated";
            throw NumericError(os.str());
        }
        Complex shift;
        if (stuck > 0 && stuck % 10 == 0) {
            // Exceptional shift breaks shift cycling.
            double kick = 1.5 * std::abs(H(hi, hi - 1));
            if (hi >= 2) kick += 0.75 * std::abs(H(hi - 1, hi - 2));
            shift = H(hi, hi) + kick;
        } else {
            shift = wilkinson_shift(H, hi);
        }
        qr_step(H, lo, hi, shift, Q, rot);
        ++stuck;
    }
    for (std::size_t i = 0; i < n; ++i) res.scaled_eigenvalues[i] = H(i, i);

    if (compute_residual) {
        // Undo the balancing on the Schur basis: A (D Q) = (D Q) T.
        ComplexMatrix v = q;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) v(i, j) *= scale[i];
        double worst = 0.0;
        const double denom = std::max(1.0, frobenius(m));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                Complex av = 0.0;
                for (std::size_t k = 0; k < n; ++k) av += m(i, k) * v(k, j);
                Complex vt = 0.0;
                for (std::size_t k = 0; k <= j; ++k) vt += v(i, k) * H(k, j);
                worst = std::max(worst, std::abs(av - vt));
            }
        }
        res.residual = worst / denom;
        if (res.residual > tol) {
            std::ostringstream os;
            os << "eigenvalues: Schur residual " << res.residual
               << " exceeds tolerance " << tol;
            throw NumericError(os.str());
        }
    }
    return res;
}

SpectrumResult oracle_spectrum(const EnsembleSpec& spec, RandomStream& rng) {
    if (spec.n() > kOracleMaxDim) {
        std::ostringstream os;
        os << "oracle_spectrum: n = " << spec.n() << " exceeds the guard ("
           << kOracleMaxDim
           << "); the matrix route exists for validation at small n, use the "
              "structural sampler for production draws";
        throw ParamError(os.str());
    }
    const std::size_t n = spec.n();
    const bool ginibre = spec.kind() == EnsembleKind::GinibreProduct;
    double log_scale = 0.0;

    auto draw_factor = [&](std::uint32_t r) {
        if (ginibre) return sample_ginibre_matrix(n, rng);
        const std::size_t nj = n + spec.gaps()[r];
        return truncate_top_left(sample_haar_unitary(nj, rng), n);
    };
    auto renormalize = [&](ComplexMatrix& a) {
        const double s = a.max_abs();
        if (s > 0.0 && std::isfinite(s)) {
            const double inv = 1.0 / s;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) a(i, j) *= inv;
            log_scale += std::log(s);
        }
    };

    ComplexMatrix acc = draw_factor(0);
    renormalize(acc);
    for (std::uint32_t r = 1; r < spec.m(); ++r) {
        acc = draw_factor(r) * acc;
        renormalize(acc);
    }
    SpectrumResult res = eigenvalues(acc, 1e-8, true);
    res.log_scale += log_scale;
    return res;
}

} // namespace prodspec
