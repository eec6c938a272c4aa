#include "prodspec/ensembles.hpp"

#include <cmath>
#include <utility>

#include "prodspec/errors.hpp"

namespace prodspec {

EnsembleSpec::EnsembleSpec(EnsembleKind kind, std::uint32_t n,
                           std::uint32_t m, std::vector<std::uint32_t> gaps)
    : kind_(kind), n_(n), m_(m), gaps_(std::move(gaps)) {}

EnsembleSpec EnsembleSpec::ginibre(std::uint32_t n, std::uint32_t m) {
    if (n == 0) throw ParamError("EnsembleSpec: n must be >= 1");
    if (m == 0) throw ParamError("EnsembleSpec: m must be >= 1");
    return EnsembleSpec(EnsembleKind::GinibreProduct, n, m, {});
}

EnsembleSpec EnsembleSpec::truncated(std::uint32_t n, std::uint32_t m,
                                     std::vector<std::uint32_t> gaps) {
    if (n == 0) throw ParamError("EnsembleSpec: n must be >= 1");
    if (m == 0) throw ParamError("EnsembleSpec: m must be >= 1");
    if (gaps.size() != m)
        throw ParamError("EnsembleSpec: need exactly m truncation gaps");
    for (std::uint32_t l : gaps)
        if (l == 0) throw ParamError("EnsembleSpec: every gap must be >= 1");
    return EnsembleSpec(EnsembleKind::TruncatedUnitaryProduct, n, m,
                        std::move(gaps));
}

double EnsembleSpec::log_bn() const {
    if (kind_ != EnsembleKind::TruncatedUnitaryProduct)
        throw ParamError("log_bn: defined for truncated ensembles only");
    const double n = static_cast<double>(n_);
    double sum = 0.0;
    for (std::uint32_t l : gaps_) sum += std::log(n / (n + l));
    return sum;
}

double EnsembleSpec::log_an() const {
    if (kind_ == EnsembleKind::TruncatedUnitaryProduct) return 0.5 * log_bn();
    return 0.5 * static_cast<double>(m_) * std::log(static_cast<double>(n_));
}

LogRadialSample::LogRadialSample(EnsembleSpec spec,
                                 std::vector<double> log_sq_moduli)
    : spec_(std::move(spec)), log_sq_(std::move(log_sq_moduli)) {
    if (log_sq_.size() != spec_.n())
        throw ParamError("LogRadialSample: need exactly n entries");
}

const std::vector<double>& LogRadialSample::angles() const {
    if (angles_.empty())
        throw ContractError("LogRadialSample: angles not attached");
    return angles_;
}

ScalingRule::ScalingRule(ScalingKind kind, double gamma_n, double log_const,
                         std::uint32_t power_m)
    : kind_(kind), gamma_n_(gamma_n), log_const_(log_const),
      power_m_(power_m) {}

ScalingRule ScalingRule::ginibre_power(const EnsembleSpec& spec) {
    if (spec.kind() != EnsembleKind::GinibreProduct)
        throw ContractError("ScalingRule: GinibrePower needs a Ginibre spec");
    return ScalingRule(ScalingKind::GinibrePower, 1.0,
                       std::log(static_cast<double>(spec.n())), spec.m());
}

ScalingRule ScalingRule::truncated_power(const EnsembleSpec& spec,
                                         double gamma_n) {
    if (spec.kind() != EnsembleKind::TruncatedUnitaryProduct)
        throw ContractError(
            "ScalingRule: TruncatedPower needs a truncated spec");
    if (!(gamma_n >= 1.0))
        throw ParamError("ScalingRule: gamma_n must be >= 1");
    return ScalingRule(ScalingKind::TruncatedPower, gamma_n, spec.log_bn(),
                       spec.m());
}

ScalingRule ScalingRule::linear(const EnsembleSpec& spec) {
    return ScalingRule(ScalingKind::Linear, 1.0, spec.log_an(), spec.m());
}

LogRadialSample sample_radii(const EnsembleSpec& spec, RandomStream& rng) {
    const std::uint32_t n = spec.n();
    const std::uint32_t m = spec.m();
    std::vector<double> log_sq(n, 0.0);
    if (spec.kind() == EnsembleKind::GinibreProduct) {
        for (std::uint32_t j = 1; j <= n; ++j) {
            double acc = 0.0;
            for (std::uint32_t r = 0; r < m; ++r)
                acc += sample_log_gamma(j, rng);
            log_sq[j - 1] = acc;
        }
    } else {
        const auto& gaps = spec.gaps();
        for (std::uint32_t j = 1; j <= n; ++j) {
            double acc = 0.0;
            for (std::uint32_t r = 0; r < m; ++r)
                acc += sample_log_beta(j, gaps[r], rng);
            log_sq[j - 1] = acc;
        }
    }
    return LogRadialSample(spec, std::move(log_sq));
}

LogRadialSample attach_angles(const LogRadialSample& sample,
                              RandomStream& rng) {
    if (sample.has_angles())
        throw ContractError("attach_angles: angles already attached");
    LogRadialSample out = sample;
    const std::size_t n = out.log_sq_moduli().size();
    out.angles_.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.angles_[i] = sample_angle(rng);
    return out;
}

std::vector<double> scaled_log_values(const LogRadialSample& sample,
                                      const ScalingRule& rule) {
    const EnsembleKind kind = sample.spec().kind();
    if (rule.kind() == ScalingKind::GinibrePower &&
        kind != EnsembleKind::GinibreProduct)
        throw ContractError("apply_scaling: GinibrePower on non-Ginibre sample");
    if (rule.kind() == ScalingKind::TruncatedPower &&
        kind != EnsembleKind::TruncatedUnitaryProduct)
        throw ContractError(
            "apply_scaling: TruncatedPower on non-truncated sample");

    const auto& ls = sample.log_sq_moduli();
    std::vector<double> out(ls.size());
    switch (rule.kind()) {
    case ScalingKind::GinibrePower: {
        const double m = static_cast<double>(rule.power_m());
        for (std::size_t i = 0; i < ls.size(); ++i)
            out[i] = ls[i] / m - rule.log_const();
        break;
    }
    case ScalingKind::TruncatedPower:
        for (std::size_t i = 0; i < ls.size(); ++i)
            out[i] = (ls[i] - rule.log_const()) / rule.gamma_n();
        break;
    case ScalingKind::Linear:
        for (std::size_t i = 0; i < ls.size(); ++i)
            out[i] = 0.5 * ls[i] - rule.log_const();
        break;
    }
    return out;
}

EmpiricalMeasure apply_scaling(const LogRadialSample& sample,
                               const ScalingRule& rule) {
    std::vector<double> logs = scaled_log_values(sample, rule);
    for (double& v : logs) v = std::exp(v);
    return EmpiricalMeasure(std::move(logs));
}

double exact_moment_term(const EnsembleSpec& spec, std::uint32_t j,
                         double t) {
    if (j == 0 || j > spec.n())
        throw ParamError("exact_moment_term: index out of range");
    if (!(t > -1.0)) throw ParamError("exact_moment_term: requires t > -1");
    const double dj = static_cast<double>(j);
    if (spec.kind() == EnsembleKind::GinibreProduct) {
        const double per_factor = std::lgamma(dj + t) - std::lgamma(dj);
        return std::exp(static_cast<double>(spec.m()) * per_factor);
    }
    // log B(a,b) = lgamma(a) + lgamma(b) - lgamma(a+b)
    double acc = 0.0;
    for (std::uint32_t l : spec.gaps()) {
        const double dl = static_cast<double>(l);
        acc += (std::lgamma(dj + t) - std::lgamma(dj + t + dl)) -
               (std::lgamma(dj) - std::lgamma(dj + dl));
    }
    return std::exp(acc);
}

double exact_moment(const EnsembleSpec& spec, double t) {
    if (!(t > -1.0)) throw ParamError("exact_moment: requires t > -1");
    double sum = 0.0;
    for (std::uint32_t j = 1; j <= spec.n(); ++j)
        sum += exact_moment_term(spec, j, t);
    return sum / static_cast<double>(spec.n());
}

double exact_log_mean(const EnsembleSpec& spec, std::uint32_t j) {
    if (j == 0 || j > spec.n())
        throw ParamError("exact_log_mean: index out of range");
    const double dj = static_cast<double>(j);
    if (spec.kind() == EnsembleKind::GinibreProduct)
        return static_cast<double>(spec.m()) * digamma(dj);
    double sum = 0.0;
    for (std::uint32_t l : spec.gaps())
        sum += digamma(dj) - digamma(dj + static_cast<double>(l));
    return sum;
}

} // namespace prodspec
