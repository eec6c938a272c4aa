#include "prodspec/limits.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "prodspec/errors.hpp"
#include "prodspec/quadrature.hpp"

namespace prodspec {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

// Central differences of F^{-1}, one-sided within 1e-4 of the endpoints
// (F^{-1} is only defined inside (0,1)).
std::function<double(double)>
finite_difference_density(std::function<double(double)> finv) {
    return [finv = std::move(finv)](double x) {
        constexpr double h = 1e-6;
        if (!(x > 0.0 && x < 1.0)) return 0.0;
        if (x < 1e-4) return (finv(x + h) - finv(x)) / h;
        if (x > 1.0 - 1e-4) return (finv(x) - finv(x - h)) / h;
        return (finv(x + h) - finv(x - h)) / (2.0 * h);
    };
}

} // namespace

QProfile QProfile::constant(double value) {
    if (!(value > 0.0 && value < 1.0))
        throw ParamError("QProfile: constant value must lie in (0,1)");
    QProfile q;
    q.eval_ = [value](double) { return value; };
    return q;
}

QProfile QProfile::linear(double slope) {
    if (!(slope > 0.0 && slope <= 1.0))
        throw ParamError("QProfile: slope must lie in (0,1]");
    QProfile q;
    q.eval_ = [slope](double t) {
        return slope * std::clamp(t, 0.0, 1.0);
    };
    return q;
}

QProfile QProfile::tabulated(std::vector<double> t, std::vector<double> q) {
    if (t.size() != q.size() || t.size() < 2)
        throw ParamError("QProfile: need matching grids with >= 2 points");
    if (!(t.front() <= 1e-9 && t.back() >= 1.0 - 1e-9))
        throw ParamError("QProfile: grid must span [0, 1]");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(q[i] >= 0.0 && q[i] <= 1.0))
            throw ParamError("QProfile: values must lie in [0, 1]");
        if (i > 0) {
            const double dt = t[i] - t[i - 1];
            if (!(dt > 0.0))
                throw ParamError("QProfile: grid must be strictly increasing");
            if (std::fabs(q[i] - q[i - 1]) >= 0.1 && dt <= 2e-3)
                throw ParamError("QProfile: tabulation jump, not continuous");
        }
    }
    QProfile out;
    out.eval_ = [t = std::move(t), q = std::move(q)](double x) {
        if (x <= t.front()) return q.front();
        if (x >= t.back()) return q.back();
        const auto it = std::upper_bound(t.begin(), t.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - t.begin());
        const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
        return q[i - 1] + w * (q[i] - q[i - 1]);
    };
    return out;
}

double QProfile::operator()(double t) const { return eval_(t); }

LimitProfile::LimitProfile(Regime regime, std::string support,
                           std::function<double(double)> F,
                           std::function<double(double)> F_inverse,
                           std::function<double(double)> radial_density,
                           std::function<double(double)> planar_density)
    : regime_(regime), support_(std::move(support)), F_(std::move(F)),
      Finv_(std::move(F_inverse)), fstar_(std::move(radial_density)),
      planar_(std::move(planar_density)) {}

double LimitProfile::F(double x) const {
    if (!F_) throw ContractError("LimitProfile: F absent in this regime");
    return F_(x);
}

double LimitProfile::F_inverse(double y) const {
    if (!Finv_)
        throw ContractError("LimitProfile: F_inverse absent in this regime");
    return Finv_(y);
}

double LimitProfile::radial_density(double x) const {
    if (!fstar_)
        throw ContractError(
            "LimitProfile: radial density absent in this regime");
    return fstar_(x);
}

double LimitProfile::planar_density(double rho) const {
    if (!planar_)
        throw ContractError(
            "LimitProfile: planar density absent in this regime");
    return planar_(rho);
}

double LimitProfile::radial_cdf(double y) const {
    if (!(y >= 0.0)) throw ParamError("radial_cdf: requires y >= 0");
    switch (regime_) {
    case Regime::ArcLaw:
        return y >= 1.0 ? 1.0 : 0.0;
    case Regime::GinibrePower:
    case Regime::CircularLaw:
        return std::min(y, 1.0);
    case Regime::GeneralF:
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 1.0;
        return Finv_(y);
    }
    return 0.0;
}

double fn_finite(const EnsembleSpec& spec, double gamma_n, double x) {
    if (spec.kind() != EnsembleKind::TruncatedUnitaryProduct)
        throw ParamError("fn_finite: defined for truncated ensembles only");
    if (!(gamma_n >= 1.0)) throw ParamError("fn_finite: gamma_n must be >= 1");
    if (!(x >= 0.0 && x <= 1.0))
        throw ParamError("fn_finite: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double n = static_cast<double>(spec.n());
    double log_sum = 0.0;
    for (std::uint32_t l : spec.gaps()) {
        const double nl = n + static_cast<double>(l);
        log_sum += std::log(nl * x) - std::log(n * x + static_cast<double>(l));
    }
    return std::exp(log_sum / gamma_n);
}

LimitProfile ginibre_limit(std::uint32_t m) {
    if (m == 0) throw ParamError("ginibre_limit: m must be >= 1");
    const double dm = static_cast<double>(m);
    auto identity = [](double v) { return v; };
    auto fstar = [](double x) { return (x > 0.0 && x < 1.0) ? 1.0 : 0.0; };
    auto planar = [dm](double rho) {
        if (!(rho > 0.0 && rho <= 1.0)) return 0.0;
        return std::pow(rho, 2.0 / dm - 2.0) / (dm * kPi);
    };
    return LimitProfile(Regime::GinibrePower, "|z| <= 1", identity, identity,
                        fstar, planar);
}

namespace {

LimitProfile arc_law_profile() {
    return LimitProfile(Regime::ArcLaw, "|z| = 1", nullptr, nullptr, nullptr,
                        nullptr);
}

LimitProfile general_profile(std::function<double(double)> F,
                             std::function<double(double)> Finv,
                             std::function<double(double)> fstar) {
    auto planar = [fstar](double rho) {
        if (!(rho > 0.0 && rho < 1.0)) return 0.0;
        return fstar(rho) / (kTwoPi * rho);
    };
    return LimitProfile(Regime::GeneralF, "0 < |z| < 1", std::move(F),
                        std::move(Finv), fstar, planar);
}

} // namespace

LimitProfile corollary1_limit(std::uint32_t m,
                              const std::vector<double>& alphas) {
    if (m == 0) throw ParamError("corollary1_limit: m must be >= 1");
    if (alphas.size() != m)
        throw ParamError("corollary1_limit: need exactly m alpha values");
    for (double a : alphas)
        if (!(a >= 0.0 && a <= 1.0))
            throw ParamError("corollary1_limit: alphas must lie in [0, 1]");

    const bool all_one =
        std::all_of(alphas.begin(), alphas.end(),
                    [](double a) { return a == 1.0; });
    if (all_one) return arc_law_profile();

    std::vector<double> al = alphas;
    auto F = [al](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        double acc = 0.0;
        for (double a : al)
            acc += std::log(x) - std::log1p(-a * (1.0 - x));
        return std::exp(0.5 * acc);
    };

    const bool all_equal =
        std::all_of(alphas.begin(), alphas.end(),
                    [&](double a) { return a == alphas.front(); });
    if (all_equal) {
        const double a = alphas.front();
        const double dm = static_cast<double>(m);
        auto finv = [a, dm](double y) {
            if (y <= 0.0) return 0.0;
            if (y >= 1.0) return 1.0;
            const double p = std::pow(y, 2.0 / dm);
            return (1.0 - a) * p / (1.0 - a * p);
        };
        auto fstar = [a, dm](double x) {
            if (!(x > 0.0 && x <= 1.0)) return 0.0;
            const double p = std::pow(x, 2.0 / dm);
            const double den = 1.0 - a * p;
            return 2.0 * (1.0 - a) / dm * p / x / (den * den);
        };
        return general_profile(F, finv, fstar);
    }

    auto finv = [F](double y) {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 1.0;
        return invert_monotone(F, y, 1e-12);
    };
    return general_profile(F, finv, finite_difference_density(finv));
}

LimitProfile corollary2_limit(const QProfile& q) {
    // Probe the open interval: meaningful profiles need 0 < q < 1 there.
    for (int i = 1; i < 64; ++i) {
        const double t = static_cast<double>(i) / 64.0;
        const double v = q(t);
        if (!(v > 0.0 && v < 1.0))
            throw ParamError("corollary2_limit: q must lie in (0,1) on (0,1)");
    }

    const QuadratureOptions quad{1e-10};
    auto F = [q, quad](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        const double one_minus_x = 1.0 - x;
        const double integral = integrate(
            [&](double t) { return std::log1p(-q(t) * one_minus_x); }, 0.0,
            1.0, quad);
        return x * std::exp(-integral);
    };
    auto density_f = [q, F, quad](double x) {
        // F'(x), positive on (0,1].
        const double one_minus_x = 1.0 - x;
        const double integral = integrate(
            [&](double t) {
                const double qt = q(t);
                return (1.0 - qt) / (1.0 - qt * one_minus_x);
            },
            0.0, 1.0, quad);
        return F(x) / x * integral;
    };
    auto finv = [F](double y) {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 1.0;
        return invert_monotone(F, y, 5e-10);
    };
    auto fstar = [density_f, finv](double y) {
        if (!(y > 0.0 && y < 1.0)) return 0.0;
        return 1.0 / density_f(finv(y));
    };
    return general_profile(F, finv, fstar);
}

LimitProfile corollary3_limit(double beta) {
    if (!(beta >= 0.0))
        throw ParamError("corollary3_limit: beta must be >= 0 or infinite");
    if (beta == 0.0) return arc_law_profile();

    // The infinite-beta normalization has the same profile shape as beta = 2.
    const double b = std::isinf(beta) ? 2.0 : beta;
    auto F = [b](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return std::exp(0.5 * b * (x - 1.0) / x);
    };
    auto finv = [b](double y) {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 1.0;
        return 1.0 / (1.0 - 2.0 / b * std::log(y));
    };
    auto fstar = [b](double y) {
        if (!(y > 0.0 && y <= 1.0)) return 0.0;
        const double den = b - 2.0 * std::log(y);
        return 2.0 * b / (y * den * den);
    };
    return general_profile(F, finv, fstar);
}

LimitProfile corollary4_limit() {
    auto identity = [](double v) { return v; };
    auto fstar = [](double x) { return (x > 0.0 && x < 1.0) ? 1.0 : 0.0; };
    auto planar = [](double rho) {
        return (rho > 0.0 && rho <= 1.0) ? 1.0 / kPi : 0.0;
    };
    return LimitProfile(Regime::CircularLaw, "|z| <= 1", nullptr, identity,
                        fstar, planar);
}

double invert_monotone(const std::function<double(double)>& F, double y,
                       double tol) {
    if (!(tol > 0.0)) throw ParamError("invert_monotone: tol must be > 0");
    if (!(y > 0.0 && y < 1.0))
        throw ParamError("invert_monotone: y must lie in (0, 1)");

    constexpr int kProbe = 16;
    double prev = 0.0;
    for (int i = 1; i <= kProbe; ++i) {
        const double x = static_cast<double>(i) / (kProbe + 1);
        const double v = F(x);
        if (v < prev - 1e-12)
            throw ContractError("invert_monotone: F not monotone on probe grid");
        prev = v;
    }

    double lo = 0.0, hi = 1.0;
    double mid = 0.5;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double v = F(mid);
        if (std::fabs(v - y) <= tol) return mid;
        if (v < y)
            lo = mid;
        else
            hi = mid;
    }
    if (std::fabs(F(mid) - y) <= tol) return mid;
    throw NumericError(
        "invert_monotone: bisection stalled; F may be discontinuous at the "
        "target level");
}

} // namespace prodspec
