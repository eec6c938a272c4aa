#include "prodspec.h"

#include <cmath>
#include <complex>
#include <cstring>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "prodspec/ensembles.hpp"
#include "prodspec/errors.hpp"
#include "prodspec/kernel.hpp"
#include "prodspec/limits.hpp"
#include "prodspec/oracle.hpp"
#include "prodspec/rng.hpp"
#include "prodspec/stats.hpp"

struct ps_ensemble {
    prodspec::EnsembleSpec spec;
};
struct ps_sample {
    prodspec::LogRadialSample sample;
};
struct ps_profile {
    prodspec::LimitProfile profile;
};
struct ps_kernel {
    prodspec::KernelSpec spec;
};

namespace {

thread_local std::string g_last_error;

ps_status fail(ps_status code, const char* what) {
    g_last_error = what;
    return code;
}

// Runs the body, translating exceptions into status codes. The guard
// refusal is distinguished from plain parameter errors by message content.
template <class Fn>
ps_status guarded(Fn&& fn) {
    try {
        fn();
        return PS_OK;
    } catch (const prodspec::ParamError& e) {
        const bool guard = std::strstr(e.what(), "guard") != nullptr;
        return fail(guard ? PS_ERR_GUARD : PS_ERR_PARAM, e.what());
    } catch (const prodspec::ContractError& e) {
        return fail(PS_ERR_CONTRACT, e.what());
    } catch (const prodspec::NumericError& e) {
        return fail(PS_ERR_NUMERIC, e.what());
    } catch (const std::exception& e) {
        return fail(PS_ERR_NUMERIC, e.what());
    }
}

ps_status require(bool ok, const char* what) {
    return ok ? PS_OK : fail(PS_ERR_PARAM, what);
}

} // namespace

extern "C" {

const char* ps_version(void) { return "0.3.0"; }

const char* ps_last_error(void) { return g_last_error.c_str(); }

/* ---- ensembles ------------------------------------------------------- */

ps_status ps_ensemble_ginibre(uint32_t n, uint32_t m, ps_ensemble** out) {
    if (ps_status s = require(out != nullptr, "out is NULL")) return s;
    return guarded([&] {
        *out = new ps_ensemble{prodspec::EnsembleSpec::ginibre(n, m)};
    });
}

ps_status ps_ensemble_truncated(uint32_t n, uint32_t m, const uint32_t* gaps,
                                ps_ensemble** out) {
    if (ps_status s = require(out != nullptr && gaps != nullptr,
                              "out/gaps is NULL"))
        return s;
    return guarded([&] {
        std::vector<uint32_t> g(gaps, gaps + m);
        *out = new ps_ensemble{
            prodspec::EnsembleSpec::truncated(n, m, std::move(g))};
    });
}

void ps_ensemble_free(ps_ensemble* e) { delete e; }

ps_status ps_ensemble_n(const ps_ensemble* e, uint32_t* out) {
    if (ps_status s = require(e && out, "NULL argument")) return s;
    *out = e->spec.n();
    return PS_OK;
}

ps_status ps_ensemble_m(const ps_ensemble* e, uint32_t* out) {
    if (ps_status s = require(e && out, "NULL argument")) return s;
    *out = e->spec.m();
    return PS_OK;
}

ps_status ps_ensemble_log_bn(const ps_ensemble* e, double* out) {
    if (ps_status s = require(e && out, "NULL argument")) return s;
    return guarded([&] { *out = e->spec.log_bn(); });
}

ps_status ps_ensemble_log_an(const ps_ensemble* e, double* out) {
    if (ps_status s = require(e && out, "NULL argument")) return s;
    return guarded([&] { *out = e->spec.log_an(); });
}

ps_status ps_ensemble_exact_moment(const ps_ensemble* e, double t,
                                   double* out) {
    if (ps_status s = require(e && out, "NULL argument")) return s;
    return guarded([&] { *out = prodspec::exact_moment(e->spec, t); });
}

ps_status ps_ensemble_exact_log_mean(const ps_ensemble* e, uint32_t j,
                                     double* out) {
    if (ps_status s = require(e && out, "NULL argument")) return s;
    return guarded([&] { *out = prodspec::exact_log_mean(e->spec, j); });
}

/* ---- sampling --------------------------------------------------------- */

ps_status ps_sample_radii(const ps_ensemble* e, uint64_t seed,
                          uint64_t stream_id, ps_sample** out) {
    if (ps_status s = require(e && out, "NULL argument")) return s;
    return guarded([&] {
        prodspec::RandomStream rng(seed, stream_id);
        *out = new ps_sample{prodspec::sample_radii(e->spec, rng)};
    });
}

void ps_sample_free(ps_sample* s) { delete s; }

ps_status ps_sample_size(const ps_sample* s, uint32_t* out) {
    if (ps_status st = require(s && out, "NULL argument")) return st;
    *out = static_cast<uint32_t>(s->sample.log_sq_moduli().size());
    return PS_OK;
}

ps_status ps_sample_log_sq_moduli(const ps_sample* s, double* out) {
    if (ps_status st = require(s && out, "NULL argument")) return st;
    const auto& v = s->sample.log_sq_moduli();
    std::memcpy(out, v.data(), v.size() * sizeof(double));
    return PS_OK;
}

ps_status ps_sample_attach_angles(ps_sample* s, uint64_t seed,
                                  uint64_t stream_id) {
    if (ps_status st = require(s != nullptr, "NULL argument")) return st;
    return guarded([&] {
        prodspec::RandomStream rng(seed, stream_id);
        s->sample = prodspec::attach_angles(std::move(s->sample), rng);
    });
}

ps_status ps_sample_angles(const ps_sample* s, double* out) {
    if (ps_status st = require(s && out, "NULL argument")) return st;
    return guarded([&] {
        const auto& v = s->sample.angles();
        std::memcpy(out, v.data(), v.size() * sizeof(double));
    });
}

ps_status ps_sample_scaled(const ps_sample* s, ps_scaling kind,
                           double gamma_n, double* out) {
    if (ps_status st = require(s && out, "NULL argument")) return st;
    return guarded([&] {
        const auto& spec = s->sample.spec();
        prodspec::ScalingRule rule = [&] {
            switch (kind) {
            case PS_SCALE_GINIBRE_POWER:
                return prodspec::ScalingRule::ginibre_power(spec);
            case PS_SCALE_TRUNCATED_POWER:
                return prodspec::ScalingRule::truncated_power(spec, gamma_n);
            case PS_SCALE_LINEAR:
                return prodspec::ScalingRule::linear(spec);
            }
            throw prodspec::ParamError("ps_sample_scaled: bad scaling kind");
        }();
        const auto logs = prodspec::scaled_log_values(s->sample, rule);
        for (std::size_t i = 0; i < logs.size(); ++i) out[i] = std::exp(logs[i]);
    });
}

/* ---- matrix route ------------------------------------------------------ */

ps_status ps_oracle_spectrum(const ps_ensemble* e, uint64_t seed,
                             uint64_t stream_id, double* re, double* im,
                             double* log_sq, double* arg, double* residual) {
    if (ps_status st = require(e != nullptr, "NULL argument")) return st;
    return guarded([&] {
        prodspec::RandomStream rng(seed, stream_id);
        const prodspec::SpectrumResult res =
            prodspec::oracle_spectrum(e->spec, rng);
        const auto eig = res.eigenvalues();
        for (std::size_t i = 0; i < eig.size(); ++i) {
            if (re != nullptr) re[i] = eig[i].real();
            if (im != nullptr) im[i] = eig[i].imag();
            if (log_sq != nullptr) log_sq[i] = res.log_sq_modulus(i);
            if (arg != nullptr) arg[i] = res.argument(i);
        }
        if (residual != nullptr) *residual = res.residual;
    });
}

/* ---- limiting profiles ------------------------------------------------- */

ps_status ps_profile_ginibre(uint32_t m, ps_profile** out) {
    if (ps_status s = require(out != nullptr, "out is NULL")) return s;
    return guarded([&] {
        *out = new ps_profile{prodspec::ginibre_limit(m)};
    });
}

ps_status ps_profile_cor1(uint32_t m, const double* alphas,
                          ps_profile** out) {
    if (ps_status s = require(out && alphas, "NULL argument")) return s;
    return guarded([&] {
        std::vector<double> a(alphas, alphas + m);
        *out = new ps_profile{prodspec::corollary1_limit(m, a)};
    });
}

ps_status ps_profile_cor2_const(double q, ps_profile** out) {
    if (ps_status s = require(out != nullptr, "out is NULL")) return s;
    return guarded([&] {
        *out = new ps_profile{
            prodspec::corollary2_limit(prodspec::QProfile::constant(q))};
    });
}

ps_status ps_profile_cor2_linear(double slope, ps_profile** out) {
    if (ps_status s = require(out != nullptr, "out is NULL")) return s;
    return guarded([&] {
        *out = new ps_profile{
            prodspec::corollary2_limit(prodspec::QProfile::linear(slope))};
    });
}

ps_status ps_profile_cor2_tabulated(const double* t, const double* q,
                                    size_t len, ps_profile** out) {
    if (ps_status s = require(out && t && q, "NULL argument")) return s;
    return guarded([&] {
        std::vector<double> tv(t, t + len), qv(q, q + len);
        *out = new ps_profile{prodspec::corollary2_limit(
            prodspec::QProfile::tabulated(std::move(tv), std::move(qv)))};
    });
}

ps_status ps_profile_cor3(double beta, ps_profile** out) {
    if (ps_status s = require(out != nullptr, "out is NULL")) return s;
    return guarded([&] {
        *out = new ps_profile{prodspec::corollary3_limit(beta)};
    });
}

ps_status ps_profile_cor4(ps_profile** out) {
    if (ps_status s = require(out != nullptr, "out is NULL")) return s;
    return guarded([&] { *out = new ps_profile{prodspec::corollary4_limit()}; });
}

void ps_profile_free(ps_profile* p) { delete p; }

ps_status ps_profile_regime(const ps_profile* p, ps_regime* out) {
    if (ps_status s = require(p && out, "NULL argument")) return s;
    switch (p->profile.regime()) {
    case prodspec::Regime::GinibrePower:
        *out = PS_REGIME_GINIBRE_POWER;
        break;
    case prodspec::Regime::ArcLaw:
        *out = PS_REGIME_ARC_LAW;
        break;
    case prodspec::Regime::GeneralF:
        *out = PS_REGIME_GENERAL_F;
        break;
    case prodspec::Regime::CircularLaw:
        *out = PS_REGIME_CIRCULAR_LAW;
        break;
    }
    return PS_OK;
}

ps_status ps_profile_F(const ps_profile* p, double x, double* out) {
    if (ps_status s = require(p && out, "NULL argument")) return s;
    return guarded([&] { *out = p->profile.F(x); });
}

ps_status ps_profile_F_inverse(const ps_profile* p, double y, double* out) {
    if (ps_status s = require(p && out, "NULL argument")) return s;
    return guarded([&] { *out = p->profile.F_inverse(y); });
}

ps_status ps_profile_radial_density(const ps_profile* p, double x,
                                    double* out) {
    if (ps_status s = require(p && out, "NULL argument")) return s;
    return guarded([&] { *out = p->profile.radial_density(x); });
}

ps_status ps_profile_planar_density(const ps_profile* p, double rho,
                                    double* out) {
    if (ps_status s = require(p && out, "NULL argument")) return s;
    return guarded([&] { *out = p->profile.planar_density(rho); });
}

ps_status ps_profile_radial_cdf(const ps_profile* p, double y, double* out) {
    if (ps_status s = require(p && out, "NULL argument")) return s;
    return guarded([&] { *out = p->profile.radial_cdf(y); });
}

ps_status ps_fn_finite(const ps_ensemble* e, double gamma_n, double x,
                       double* out) {
    if (ps_status s = require(e && out, "NULL argument")) return s;
    return guarded([&] { *out = prodspec::fn_finite(e->spec, gamma_n, x); });
}

/* ---- determinantal kernel ---------------------------------------------- */

ps_status ps_kernel_ginibre_m1(uint32_t n, ps_kernel** out) {
    if (ps_status s = require(out != nullptr, "out is NULL")) return s;
    return guarded([&] {
        *out = new ps_kernel{
            prodspec::KernelSpec(n, prodspec::RadialWeight::ginibre_m1())};
    });
}

ps_status ps_kernel_truncated_m1(uint32_t n, uint32_t l, ps_kernel** out) {
    if (ps_status s = require(out != nullptr, "out is NULL")) return s;
    return guarded([&] {
        *out = new ps_kernel{
            prodspec::KernelSpec(n, prodspec::RadialWeight::truncated_m1(l))};
    });
}

ps_status ps_kernel_tabulated(uint32_t n, const double* x, const double* phi,
                              size_t len, ps_kernel** out) {
    if (ps_status s = require(out && x && phi, "NULL argument")) return s;
    return guarded([&] {
        std::vector<double> xv(x, x + len), pv(phi, phi + len);
        *out = new ps_kernel{prodspec::KernelSpec(
            n, prodspec::RadialWeight::tabulated(std::move(xv),
                                                 std::move(pv)))};
    });
}

void ps_kernel_free(ps_kernel* k) { delete k; }

ps_status ps_kernel_log_ck(const ps_kernel* k, uint32_t idx, double* out) {
    if (ps_status s = require(k && out, "NULL argument")) return s;
    return guarded([&] { *out = k->spec.log_ck(idx); });
}

ps_status ps_kernel_log_norm_const(const ps_kernel* k, double* out) {
    if (ps_status s = require(k && out, "NULL argument")) return s;
    return guarded([&] { *out = k->spec.log_norm_constant(); });
}

ps_status ps_kernel_eval(const ps_kernel* k, double z_re, double z_im,
                         double w_re, double w_im, double* out_re,
                         double* out_im) {
    if (ps_status s = require(k && out_re && out_im, "NULL argument"))
        return s;
    return guarded([&] {
        const std::complex<double> v = prodspec::kernel_eval(
            k->spec, {z_re, z_im}, {w_re, w_im});
        *out_re = v.real();
        *out_im = v.imag();
    });
}

ps_status ps_kernel_radial_density(const ps_kernel* k, double r, double* out) {
    if (ps_status s = require(k && out, "NULL argument")) return s;
    return guarded([&] { *out = prodspec::radial_density(k->spec, r); });
}

ps_status ps_kernel_one_point_density(const ps_kernel* k, double z_re,
                                      double z_im, double* out) {
    if (ps_status s = require(k && out, "NULL argument")) return s;
    return guarded(
        [&] { *out = prodspec::one_point_density(k->spec, {z_re, z_im}); });
}

/* ---- statistics --------------------------------------------------------- */

ps_status ps_ks_two_sample(const double* a, size_t na, const double* b,
                           size_t nb, double* out) {
    if (ps_status s = require(a && b && out, "NULL argument")) return s;
    return guarded([&] {
        prodspec::EmpiricalMeasure ma(std::vector<double>(a, a + na));
        prodspec::EmpiricalMeasure mb(std::vector<double>(b, b + nb));
        *out = prodspec::ks_two_sample(ma, mb);
    });
}

ps_status ps_ks_uniform(const double* v, size_t n, double lo, double hi,
                        double* out) {
    if (ps_status s = require(v && out, "NULL argument")) return s;
    if (ps_status s = require(hi > lo, "ps_ks_uniform: need hi > lo"))
        return s;
    return guarded([&] {
        prodspec::EmpiricalMeasure m(std::vector<double>(v, v + n));
        const double width = hi - lo;
        *out = prodspec::ks_one_sample(m, [lo, width](double x) {
            const double u = (x - lo) / width;
            return u < 0.0 ? 0.0 : (u > 1.0 ? 1.0 : u);
        });
    });
}

ps_status ps_ks_vs_profile_radial(const ps_profile* p, const double* v,
                                  size_t n, double* out) {
    if (ps_status s = require(p && v && out, "NULL argument")) return s;
    return guarded([&] {
        prodspec::EmpiricalMeasure m(std::vector<double>(v, v + n));
        const prodspec::LimitProfile& prof = p->profile;
        *out = prodspec::ks_one_sample(
            m, [&prof](double y) { return prof.radial_cdf(y < 0 ? 0 : y); });
    });
}

ps_status ps_digamma(double x, double* out) {
    if (ps_status s = require(out != nullptr, "out is NULL")) return s;
    return guarded([&] { *out = prodspec::digamma(x); });
}

ps_status ps_fourth_moment_ratio(const ps_ensemble* e, double halfplane_angle,
                                 uint32_t reps, uint64_t seed,
                                 uint64_t stream_id, double* out) {
    if (ps_status s = require(e && out, "NULL argument")) return s;
    return guarded([&] {
        prodspec::RandomStream rng(seed, stream_id);
        *out = prodspec::fourth_moment_ratio(e->spec, halfplane_angle, reps,
                                             rng);
    });
}

} /* extern "C" */
