#include "prodspec/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "prodspec/errors.hpp"
#include "prodspec/quadrature.hpp"

namespace prodspec {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}
} // namespace

RadialWeight RadialWeight::ginibre_m1() {
    RadialWeight w;
    w.kind_ = WeightKind::GinibreM1;
    return w;
}

RadialWeight RadialWeight::truncated_m1(std::uint32_t l) {
    if (l == 0) throw ParamError("RadialWeight: l must be >= 1");
    RadialWeight w;
    w.kind_ = WeightKind::TruncatedM1;
    w.l_ = l;
    return w;
}

RadialWeight RadialWeight::tabulated(std::vector<double> x,
                                     std::vector<double> phi) {
    if (x.size() != phi.size() || x.size() < 2)
        throw ParamError("RadialWeight: need matching grids with >= 2 points");
    if (!(x.front() >= 0.0))
        throw ParamError("RadialWeight: grid must start at x >= 0");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(phi[i] >= 0.0) || !std::isfinite(phi[i]))
            throw ParamError("RadialWeight: phi must be finite and >= 0");
        if (i > 0 && !(x[i] > x[i - 1]))
            throw ParamError("RadialWeight: grid must be strictly increasing");
    }
    RadialWeight w;
    w.kind_ = WeightKind::Tabulated;
    w.grid_x_ = std::move(x);
    w.grid_phi_ = std::move(phi);
    return w;
}

double RadialWeight::operator()(double x) const {
    switch (kind_) {
    case WeightKind::GinibreM1:
        return x < 0.0 ? 0.0 : std::exp(-x * x);
    case WeightKind::TruncatedM1: {
        if (x < 0.0 || x >= 1.0) return 0.0;
        const double l = static_cast<double>(l_);
        return l / kPi * std::pow(1.0 - x * x, l - 1.0);
    }
    case WeightKind::Tabulated: {
        if (x < grid_x_.front() || x > grid_x_.back()) return 0.0;
        const auto it =
            std::upper_bound(grid_x_.begin(), grid_x_.end(), x);
        if (it == grid_x_.begin()) return grid_phi_.front();
        if (it == grid_x_.end()) return grid_phi_.back();
        const std::size_t i = static_cast<std::size_t>(it - grid_x_.begin());
        const double w = (x - grid_x_[i - 1]) / (grid_x_[i] - grid_x_[i - 1]);
        return grid_phi_[i - 1] + w * (grid_phi_[i] - grid_phi_[i - 1]);
    }
    }
    return 0.0;
}

double RadialWeight::log_phi(double x) const {
    switch (kind_) {
    case WeightKind::GinibreM1:
        return x < 0.0 ? kNegInf : -x * x;
    case WeightKind::TruncatedM1: {
        if (x < 0.0 || x >= 1.0) return kNegInf;
        const double l = static_cast<double>(l_);
        return std::log(l / kPi) + (l - 1.0) * std::log1p(-x * x);
    }
    case WeightKind::Tabulated: {
        const double v = (*this)(x);
        return v > 0.0 ? std::log(v) : kNegInf;
    }
    }
    return kNegInf;
}

double RadialWeight::support_upper() const {
    switch (kind_) {
    case WeightKind::GinibreM1:
        return std::numeric_limits<double>::infinity();
    case WeightKind::TruncatedM1:
        return 1.0;
    case WeightKind::Tabulated:
        return grid_x_.back();
    }
    return 0.0;
}

double compute_log_ck(const RadialWeight& weight, std::uint32_t k) {
    const double dk = static_cast<double>(k);
    switch (weight.kind()) {
    case WeightKind::GinibreM1:
        // 2*pi int x^(2k+1) e^{-x^2} dx = pi * k!
        return std::log(kPi) + std::lgamma(dk + 1.0);
    case WeightKind::TruncatedM1: {
        // u = x^2 turns the moment into l * B(k+1, l).
        const double l = static_cast<double>(weight.l());
        return std::log(l) + log_beta(dk + 1.0, l);
    }
    case WeightKind::Tabulated:
        return compute_log_ck_quadrature(weight, k);
    }
    throw ParamError("compute_log_ck: unknown weight kind");
}

double compute_log_ck_quadrature(const RadialWeight& weight, std::uint32_t k) {
    const double dk = static_cast<double>(k);
    double value = 0.0;
    switch (weight.kind()) {
    case WeightKind::GinibreM1: {
        // Integrand peaks at sqrt((2k+1)/2); beyond the cutoff the Gaussian
        // tail is below 1e-60 of the mass.
        const double upper = std::sqrt(2.0 * dk + 1.0) + 12.0;
        value = integrate(
            [&](double x) {
                return 2.0 * kPi *
                       std::exp((2.0 * dk + 1.0) * std::log(x) - x * x);
            },
            0.0, upper, {1e-13});
        break;
    }
    case WeightKind::TruncatedM1: {
        const double l = static_cast<double>(weight.l());
        value = integrate(
            [&](double u) {
                return l * std::pow(u, dk) * std::pow(1.0 - u, l - 1.0);
            },
            0.0, 1.0, {1e-13});
        break;
    }
    case WeightKind::Tabulated: {
        value = integrate(
            [&](double x) {
                return 2.0 * kPi * std::pow(x, 2.0 * dk + 1.0) * weight(x);
            },
            0.0, weight.support_upper(), {1e-13});
        break;
    }
    }
    if (!std::isfinite(value) || value <= 0.0)
        throw ParamError("compute_log_ck: moment integral divergent or zero");
    return std::log(value);
}

double log_normalizing_constant(std::uint32_t n, const RadialWeight& weight) {
    if (n == 0) throw ParamError("log_normalizing_constant: n must be >= 1");
    double acc = std::lgamma(static_cast<double>(n) + 1.0);
    for (std::uint32_t k = 0; k < n; ++k) acc += compute_log_ck(weight, k);
    return -acc;
}

KernelSpec::KernelSpec(std::uint32_t n, RadialWeight weight)
    : n_(n), weight_(std::move(weight)) {
    if (n == 0) throw ParamError("KernelSpec: n must be >= 1");
    log_c_.resize(n);
    for (std::uint32_t k = 0; k < n; ++k)
        log_c_[k] = compute_log_ck(weight_, k);
}

double KernelSpec::log_ck(std::uint32_t k) const {
    if (k >= n_) throw ParamError("KernelSpec: k out of range");
    return log_c_[k];
}

double KernelSpec::log_norm_constant() const {
    double acc = std::lgamma(static_cast<double>(n_) + 1.0);
    for (double lc : log_c_) acc += lc;
    return -acc;
}

std::complex<double> kernel_eval(const KernelSpec& spec,
                                 std::complex<double> z,
                                 std::complex<double> w) {
    const std::complex<double> p = z * std::conj(w);
    // Running sum and term share a log-domain scale factor; term_{k+1} =
    // term_k * p * c_k / c_{k+1} keeps every intermediate bounded.
    double log_scale = -spec.log_ck(0);
    std::complex<double> term = 1.0;
    std::complex<double> sum = 1.0;
    for (std::uint32_t k = 1; k < spec.n(); ++k) {
        term *= p * std::exp(spec.log_ck(k - 1) - spec.log_ck(k));
        sum += term;
        const double mag = std::max(std::abs(sum), std::abs(term));
        if (mag > 1e250) {
            const double f = std::log(mag);
            sum *= std::exp(-f);
            term *= std::exp(-f);
            log_scale += f;
        }
    }
    return sum * std::exp(log_scale);
}

double radial_density(const KernelSpec& spec, double r) {
    if (!(r >= 0.0)) throw ParamError("radial_density: requires r >= 0");
    if (r == 0.0) return 0.0;
    const double lphi = spec.weight().log_phi(r);
    if (lphi == kNegInf) return 0.0;
    const double lr = std::log(r);
    double sum = 0.0;
    for (std::uint32_t j = 1; j <= spec.n(); ++j)
        sum += std::exp(kLog2Pi + (2.0 * j - 1.0) * lr + lphi -
                        spec.log_ck(j - 1));
    return sum / static_cast<double>(spec.n());
}

double one_point_density(const KernelSpec& spec, std::complex<double> z) {
    const double r = std::abs(z);
    const double lphi = spec.weight().log_phi(r);
    if (lphi == kNegInf) return 0.0;
    double sum = 0.0;
    if (r == 0.0) {
        sum = std::exp(lphi - spec.log_ck(0));
    } else {
        const double lr = std::log(r);
        for (std::uint32_t k = 0; k < spec.n(); ++k)
            sum += std::exp(2.0 * k * lr + lphi - spec.log_ck(k));
    }
    return sum / static_cast<double>(spec.n());
}

} // namespace prodspec
