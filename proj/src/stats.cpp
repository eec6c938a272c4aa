#include "prodspec/stats.hpp"

#include <algorithm>
#include <cmath>

#include "prodspec/ensembles.hpp"
#include "prodspec/errors.hpp"
#include "prodspec/oracle.hpp"
#include "prodspec/rng.hpp"

namespace prodspec {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.14159265358979323846264338328;
} // namespace

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.empty())
        throw ParamError("EmpiricalMeasure: need at least one value");
    for (double v : values_)
        if (std::isnan(v)) throw ParamError("EmpiricalMeasure: NaN value");
    std::sort(values_.begin(), values_.end());
}

double EmpiricalMeasure::ecdf(double x) const {
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) /
           static_cast<double>(values_.size());
}

double ks_one_sample(const EmpiricalMeasure& sample,
                     const std::function<double(double)>& cdf) {
    const auto& v = sample.values();
    const double n = static_cast<double>(v.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = cdf(v[i]);
        const double above = static_cast<double>(i + 1) / n - f;
        const double below = f - static_cast<double>(i) / n;
        worst = std::max(worst, std::max(above, below));
    }
    return worst;
}

double ks_two_sample(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    const auto& x = a.values();
    const auto& y = b.values();
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double worst = 0.0;
    while (i < x.size() || j < y.size()) {
        double t;
        if (i >= x.size())
            t = y[j];
        else if (j >= y.size())
            t = x[i];
        else
            t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == t) ++i;
        while (j < y.size() && y[j] == t) ++j;
        const double d =
            std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny);
        worst = std::max(worst, d);
    }
    return worst;
}

double digamma(double x) {
    if (!(x > 0.0)) throw ParamError("digamma: requires x > 0");
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // log x - 1/(2x) - 1/(12x^2) + 1/(120x^4) - 1/(252x^6) + 1/(240x^8);
    // first omitted term is below 1e-12 once x >= 10.
    const double series =
        std::log(x) - 0.5 * inv -
        inv2 * (1.0 / 12.0 -
                inv2 * (1.0 / 120.0 -
                        inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0))));
    return acc + series;
}

double fourth_moment_ratio(const EnsembleSpec& spec, double halfplane_angle,
                           std::size_t reps, RandomStream& rng) {
    if (spec.n() > kOracleMaxDim)
        throw ParamError("fourth_moment_ratio: n exceeds the matrix-route guard");
    if (reps < 100) throw ParamError("fourth_moment_ratio: reps must be >= 100");

    const double n = static_cast<double>(spec.n());
    auto halfplane_count = [&](const SpectrumResult& s) {
        double count = 0.0;
        for (std::size_t i = 0; i < s.scaled_eigenvalues.size(); ++i) {
            double rel = s.argument(i) - halfplane_angle;
            rel = std::fmod(rel, kTwoPi);
            if (rel < 0.0) rel += kTwoPi;
            if (rel < kPi) count += 1.0;
        }
        return count;
    };

    // Pilot run estimates Eh; the main run uses the pilot value so the
    // plug-in mean does not bias the centered moment.
    double pilot = 0.0;
    for (std::size_t r = 0; r < reps; ++r)
        pilot += halfplane_count(oracle_spectrum(spec, rng));
    const double eh = pilot / (static_cast<double>(reps) * n);

    double acc = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        const double s = halfplane_count(oracle_spectrum(spec, rng)) - n * eh;
        const double s2 = s * s;
        acc += s2 * s2;
    }
    return acc / static_cast<double>(reps) / (n * n);
}

} // namespace prodspec
