#ifndef PRODSPEC_QUADRATURE_HPP
#define PRODSPEC_QUADRATURE_HPP

/*
 * Adaptive Gauss-Kronrod (G7,K15) quadrature. Intervals are refined
 * worst-error-first against a global absolute error budget, so integrable
 * endpoint singularities (x^p with p > -1) converge; endpoint nodes are
 * never evaluated.
 */

#include <cmath>
#include <cstddef>
#include <queue>
#include <sstream>
#include <vector>

#include "prodspec/errors.hpp"

namespace prodspec {

namespace detail {

// QUADPACK dqk15 abscissae/weights on [-1, 1].
inline constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod,
                 double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i)
        resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    kronrod = resk * h;
    err = std::fabs((resk - resg) * h);
}

} // namespace detail

struct QuadratureOptions {
    double abs_tol = 1e-10;
    std::size_t max_splits = 4000;
};

// Integrates f over [a, b] to the requested absolute tolerance. Throws
// NumericError when the budget is exhausted or a cell can no longer be
// split (as happens for non-integrable singularities).
template <class F>
double integrate(const F& f, double a, double b,
                 QuadratureOptions opt = {}) {
    if (!(a <= b)) throw ParamError("integrate: requires a <= b");
    if (a == b) return 0.0;

    struct Cell {
        double a, b, val, err;
        bool operator<(const Cell& o) const { return err < o.err; }
    };
    auto evaluate = [&f](double lo, double hi) {
        Cell c{lo, hi, 0.0, 0.0};
        detail::gk15(f, lo, hi, c.val, c.err);
        if (!std::isfinite(c.val)) {
            std::ostringstream os;
            os << "integrate: non-finite integrand value on [" << lo << ", "
               << hi << "]";
            throw NumericError(os.str());
        }
        return c;
    };

    std::priority_queue<Cell> cells;
    Cell root = evaluate(a, b);
    double total_val = root.val;
    double total_err = root.err;
    cells.push(root);

    std::size_t splits = 0;
    while (total_err > opt.abs_tol &&
           total_err > 1e-15 * std::fabs(total_val)) {
        const Cell worst = cells.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (splits >= opt.max_splits || mid <= worst.a || mid >= worst.b) {
            std::ostringstream os;
            os << "integrate: no convergence after " << splits
               << " refinements (estimated error " << total_err
               << ", tolerance " << opt.abs_tol << ", worst cell ["
               << worst.a << ", " << worst.b << "] with error " << worst.err
               << ")";
            throw NumericError(os.str());
        }
        cells.pop();
        total_val -= worst.val;
        total_err -= worst.err;
        const Cell left = evaluate(worst.a, mid);
        const Cell right = evaluate(mid, worst.b);
        total_val += left.val + right.val;
        total_err += left.err + right.err;
        cells.push(left);
        cells.push(right);
        ++splits;
    }
    return total_val;
}

} // namespace prodspec

#endif
