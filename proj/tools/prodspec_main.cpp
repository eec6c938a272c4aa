/*
 * prodspec CLI: reproducible sampling/validation experiments on the two
 * product ensembles, driven entirely through the shared library's C API.
 *
 * Subcommands: sample | limit | validate | kstest | kernel.
 * Exit codes:  0 ok/pass, 1 threshold fail, 2 usage error, 3 numeric error.
 *
 * Every output file embeds (seed, version, full parameter echo); re-running
 * the echoed command reproduces the file byte for byte. Stream layout for
 * replicate r: radii use stream_id r, angles r + 2^32, matrix-route draws
 * r + 2^33.
 */

#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "prodspec.h"

namespace {

using json = nlohmann::json;

constexpr std::uint64_t kAngleStreamBase = 1ull << 32;
constexpr std::uint64_t kOracleStreamBase = 1ull << 33;

struct UsageExit {
    int code;
    std::string message;
};

void fail_usage(int code, const std::string& msg) {
    throw UsageExit{code, msg};
}

int exit_code_for(ps_status st) {
    switch (st) {
    case PS_OK:
        return 0;
    case PS_ERR_NUMERIC:
        return 3;
    default:
        return 2;
    }
}

// Aborts the command when a C API call fails.
void check(ps_status st) {
    if (st != PS_OK) fail_usage(exit_code_for(st), ps_last_error());
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Options {
    // global
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned threads = 1;
    std::string out;
    std::string format = "csv";

    // ensemble
    std::string ensemble = "ginibre";
    std::uint32_t n = 0;
    std::uint32_t m = 1;
    std::vector<std::uint32_t> gaps;
    std::uint32_t gap_fill = 0; // --gap l: use l for all m factors

    // sampling
    std::string method = "structural";
    std::string scaling = "none";
    double gamma = 2.0;
    std::string gamma_rule = "fixed"; // fixed | m | mean-gaps
    std::uint64_t reps = 1;
    bool angles = false;

    // limits
    std::string regime;
    std::vector<double> alphas;
    std::string beta = "1";
    double q_const = 0.0;
    double q_slope = 0.0;
    std::string q_table;
    std::uint32_t grid_points = 1001;

    // validate / kstest
    std::uint64_t draws = 4000;
    double threshold = -1.0; // default depends on command
    std::string oracle_ensemble; // validate: override the matrix-route spec
    std::vector<std::uint32_t> oracle_gaps;

    // kernel
    std::string weight = "ginibre-m1";
    std::uint32_t l = 1;
    std::string weight_table;
    double pn_rmax = 0.0;
    std::uint32_t pn_points = 512;
};

class EnsembleHandle {
public:
    EnsembleHandle() = default;
    explicit EnsembleHandle(ps_ensemble* e) : e_(e) {}
    EnsembleHandle(const EnsembleHandle&) = delete;
    EnsembleHandle& operator=(const EnsembleHandle&) = delete;
    EnsembleHandle(EnsembleHandle&& o) noexcept : e_(o.e_) { o.e_ = nullptr; }
    ~EnsembleHandle() { ps_ensemble_free(e_); }
    ps_ensemble* get() const { return e_; }

private:
    ps_ensemble* e_ = nullptr;
};

class ProfileHandle {
public:
    ProfileHandle() = default;
    explicit ProfileHandle(ps_profile* p) : p_(p) {}
    ProfileHandle(const ProfileHandle&) = delete;
    ProfileHandle& operator=(const ProfileHandle&) = delete;
    ~ProfileHandle() { ps_profile_free(p_); }
    ps_profile* get() const { return p_; }

private:
    ps_profile* p_ = nullptr;
};

std::vector<std::uint32_t> effective_gaps(const Options& opt,
                                          const std::vector<std::uint32_t>& gaps,
                                          std::uint32_t gap_fill) {
    if (!gaps.empty()) return gaps;
    if (gap_fill > 0) return std::vector<std::uint32_t>(opt.m, gap_fill);
    return {};
}

EnsembleHandle make_ensemble(const Options& opt, const std::string& kind,
                             const std::vector<std::uint32_t>& gaps) {
    if (opt.n == 0) fail_usage(2, "missing or zero --n (dimension must be >= 1)");
    ps_ensemble* e = nullptr;
    if (kind == "ginibre") {
        check(ps_ensemble_ginibre(opt.n, opt.m, &e));
    } else if (kind == "truncated") {
        if (gaps.size() != opt.m)
            fail_usage(2, "truncated ensemble needs m gaps (--gaps l1,l2,... "
                          "or --gap l)");
        check(ps_ensemble_truncated(opt.n, opt.m, gaps.data(), &e));
    } else {
        fail_usage(2, "unknown --ensemble '" + kind +
                          "' (expected ginibre or truncated)");
    }
    return EnsembleHandle(e);
}

double resolve_gamma(const Options& opt) {
    if (opt.gamma_rule == "fixed") return opt.gamma;
    if (opt.gamma_rule == "m") return static_cast<double>(opt.m);
    if (opt.gamma_rule == "mean-gaps") {
        const auto gaps = effective_gaps(opt, opt.gaps, opt.gap_fill);
        double acc = 0.0;
        for (std::uint32_t g : gaps) acc += g;
        return acc / static_cast<double>(opt.n);
    }
    fail_usage(2, "unknown --gamma-rule '" + opt.gamma_rule + "'");
    return 0.0;
}

ps_scaling parse_scaling(const std::string& name) {
    if (name == "ginibre-power") return PS_SCALE_GINIBRE_POWER;
    if (name == "truncated-power") return PS_SCALE_TRUNCATED_POWER;
    if (name == "linear") return PS_SCALE_LINEAR;
    fail_usage(2, "unknown --scaling '" + name + "'");
    return PS_SCALE_LINEAR;
}

ProfileHandle make_profile(const Options& opt) {
    ps_profile* p = nullptr;
    if (opt.regime == "ginibre") {
        check(ps_profile_ginibre(opt.m, &p));
    } else if (opt.regime == "cor1") {
        if (opt.alphas.size() != opt.m)
            fail_usage(2, "cor1 needs m alpha values (--alphas a1,a2,...)");
        check(ps_profile_cor1(opt.m, opt.alphas.data(), &p));
    } else if (opt.regime == "cor2") {
        if (!opt.q_table.empty()) {
            std::ifstream in(opt.q_table);
            if (!in) fail_usage(2, "cannot open q table: " + opt.q_table);
            std::vector<double> ts, qs;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#' || line[0] == 't') continue;
                double t, q;
                if (std::sscanf(line.c_str(), "%lf,%lf", &t, &q) == 2) {
                    ts.push_back(t);
                    qs.push_back(q);
                }
            }
            check(ps_profile_cor2_tabulated(ts.data(), qs.data(), ts.size(),
                                            &p));
        } else if (opt.q_slope > 0.0) {
            check(ps_profile_cor2_linear(opt.q_slope, &p));
        } else if (opt.q_const > 0.0) {
            check(ps_profile_cor2_const(opt.q_const, &p));
        } else {
            fail_usage(2, "cor2 needs --q-const, --q-slope or --q-table");
        }
    } else if (opt.regime == "cor3") {
        double beta;
        if (opt.beta == "inf" || opt.beta == "infinity") {
            beta = std::numeric_limits<double>::infinity();
        } else {
            try {
                beta = std::stod(opt.beta);
            } catch (const std::exception&) {
                fail_usage(2, "bad --beta value '" + opt.beta + "'");
                return ProfileHandle();
            }
        }
        check(ps_profile_cor3(beta, &p));
    } else if (opt.regime == "cor4") {
        check(ps_profile_cor4(&p));
    } else {
        fail_usage(2, "unknown --regime '" + opt.regime +
                          "' (ginibre|cor1|cor2|cor3|cor4)");
    }
    return ProfileHandle(p);
}

// Replicates dispatched over a small worker pool; work(r) writes only into
// its own slot, so the merged result is independent of scheduling.
void parallel_replicates(unsigned threads, std::uint64_t reps,
                         const std::function<void(std::uint64_t)>& work) {
    if (threads <= 1 || reps <= 1) {
        for (std::uint64_t r = 0; r < reps; ++r) work(r);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::mutex err_mutex;
    std::string first_error;
    int first_code = 0;
    auto runner = [&] {
        for (;;) {
            const std::uint64_t r = next.fetch_add(1);
            if (r >= reps) return;
            try {
                work(r);
            } catch (const UsageExit& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error.empty()) {
                    first_error = e.message;
                    first_code = e.code;
                }
                next.store(reps);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = std::min<unsigned>(threads, 64);
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(runner);
    for (auto& th : pool) th.join();
    if (!first_error.empty()) fail_usage(first_code, first_error);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) fail_usage(2, "cannot open output file: " + path);
    return out;
}

void write_metadata_csv(std::ostream& out,
                        const std::map<std::string, std::string>& meta) {
    out << "# prodspec " << ps_version() << "\n";
    for (const auto& [k, v] : meta) out << "# " << k << "=" << v << "\n";
}

json metadata_json(const std::map<std::string, std::string>& meta) {
    json j;
    j["version"] = ps_version();
    for (const auto& [k, v] : meta) j[k] = v;
    return j;
}

std::string gaps_to_string(const std::vector<std::uint32_t>& gaps) {
    std::ostringstream os;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (i) os << ",";
        os << gaps[i];
    }
    return os.str();
}

/* ---- sample ------------------------------------------------------------ */

int cmd_sample(const Options& opt) {
    if (!opt.seed_given) fail_usage(2, "sample requires --seed");
    if (opt.reps < 1) fail_usage(2, "--reps must be >= 1");
    if (opt.out.empty()) fail_usage(2, "sample requires --out");

    const auto gaps = effective_gaps(opt, opt.gaps, opt.gap_fill);
    const EnsembleHandle ens = make_ensemble(opt, opt.ensemble, gaps);
    const bool scaled = opt.scaling != "none";
    const bool oracle = opt.method == "oracle";
    if (oracle && scaled)
        fail_usage(2, "--method oracle emits raw spectra; drop --scaling");
    if (!oracle && opt.method != "structural")
        fail_usage(2, "unknown --method '" + opt.method + "'");

    const double gamma = resolve_gamma(opt);
    const auto t0 = std::chrono::steady_clock::now();

    const std::uint32_t n = opt.n;
    std::vector<std::vector<double>> col_a(opt.reps), col_b(opt.reps),
        col_c(opt.reps), col_d(opt.reps);

    parallel_replicates(opt.threads, opt.reps, [&](std::uint64_t r) {
        if (oracle) {
            col_a[r].resize(n);
            col_b[r].resize(n);
            col_c[r].resize(n);
            col_d[r].resize(n);
            check(ps_oracle_spectrum(ens.get(), opt.seed,
                                     kOracleStreamBase + r, col_a[r].data(),
                                     col_b[r].data(), col_c[r].data(),
                                     col_d[r].data(), nullptr));
            return;
        }
        ps_sample* s = nullptr;
        check(ps_sample_radii(ens.get(), opt.seed, r, &s));
        if (opt.angles)
            check(ps_sample_attach_angles(s, opt.seed, kAngleStreamBase + r));
        if (scaled) {
            col_a[r].resize(n);
            check(ps_sample_scaled(s, parse_scaling(opt.scaling), gamma,
                                   col_a[r].data()));
        } else {
            col_a[r].resize(n);
            check(ps_sample_log_sq_moduli(s, col_a[r].data()));
        }
        if (opt.angles) {
            col_b[r].resize(n);
            check(ps_sample_angles(s, col_b[r].data()));
        }
        ps_sample_free(s);
    });

    const auto t1 = std::chrono::steady_clock::now();
    const double wall = std::chrono::duration<double>(t1 - t0).count();

    std::map<std::string, std::string> meta{
        {"command", "sample"},
        {"ensemble", opt.ensemble},
        {"n", std::to_string(opt.n)},
        {"m", std::to_string(opt.m)},
        {"method", opt.method},
        {"scaling", opt.scaling},
        {"reps", std::to_string(opt.reps)},
        {"seed", std::to_string(opt.seed)},
    };
    if (!gaps.empty()) meta["gaps"] = gaps_to_string(gaps);
    if (opt.scaling == "truncated-power") meta["gamma"] = fmt17(gamma);
    if (opt.angles) meta["angles"] = "true";

    double log_scale_const = 0.0;
    std::string scale_name;
    if (opt.ensemble == "truncated") {
        check(ps_ensemble_log_bn(ens.get(), &log_scale_const));
        scale_name = "log_bn";
    } else {
        check(ps_ensemble_log_an(ens.get(), &log_scale_const));
        scale_name = "log_an";
    }
    meta[scale_name] = fmt17(log_scale_const);

    std::ofstream out = open_output(opt.out);
    if (opt.format == "csv") {
        write_metadata_csv(out, meta);
        if (oracle) {
            out << "replicate,re,im,log_sq_modulus,argument\n";
            for (std::uint64_t r = 0; r < opt.reps; ++r)
                for (std::uint32_t j = 0; j < n; ++j)
                    out << r << "," << fmt17(col_a[r][j]) << ","
                        << fmt17(col_b[r][j]) << "," << fmt17(col_c[r][j])
                        << "," << fmt17(col_d[r][j]) << "\n";
        } else if (scaled) {
            out << "replicate,j,scaled_radius\n";
            for (std::uint64_t r = 0; r < opt.reps; ++r)
                for (std::uint32_t j = 0; j < n; ++j)
                    out << r << "," << (j + 1) << "," << fmt17(col_a[r][j])
                        << "\n";
        } else {
            out << "replicate,j,log_sq_modulus,angle\n";
            for (std::uint64_t r = 0; r < opt.reps; ++r)
                for (std::uint32_t j = 0; j < n; ++j) {
                    out << r << "," << (j + 1) << "," << fmt17(col_a[r][j])
                        << ",";
                    if (opt.angles) out << fmt17(col_b[r][j]);
                    out << "\n";
                }
        }
    } else {
        json doc;
        doc["meta"] = metadata_json(meta);
        json rows = json::array();
        for (std::uint64_t r = 0; r < opt.reps; ++r) {
            json block;
            block["replicate"] = r;
            if (oracle) {
                block["re"] = col_a[r];
                block["im"] = col_b[r];
                block["log_sq_modulus"] = col_c[r];
                block["argument"] = col_d[r];
            } else if (scaled) {
                block["scaled_radius"] = col_a[r];
            } else {
                block["log_sq_modulus"] = col_a[r];
                if (opt.angles) block["angle"] = col_b[r];
            }
            rows.push_back(std::move(block));
        }
        doc["replicates"] = std::move(rows);
        out << doc.dump(2) << "\n";
    }
    out.close();

    const double points = static_cast<double>(opt.reps) * n;
    std::printf("sample: n=%u m=%u %s=%s reps=%" PRIu64
                " wall=%.3fs points/sec=%.3g\n",
                opt.n, opt.m, scale_name.c_str(),
                fmt17(log_scale_const).c_str(), opt.reps, wall,
                points / (wall > 0 ? wall : 1e-9));
    return 0;
}

/* ---- limit -------------------------------------------------------------- */

int cmd_limit(const Options& opt) {
    if (opt.regime.empty()) fail_usage(2, "limit requires --regime");
    if (opt.out.empty()) fail_usage(2, "limit requires --out");
    if (opt.grid_points < 2) fail_usage(2, "--grid-points must be >= 2");
    const ProfileHandle prof = make_profile(opt);

    ps_regime regime;
    check(ps_profile_regime(prof.get(), &regime));
    const char* regime_names[] = {"ginibre-power", "arc-law", "general-f",
                                  "circular-law"};

    const std::uint32_t pts = opt.grid_points;
    json grid;
    json xs = json::array(), fs = json::array(), finvs = json::array(),
         fstars = json::array(), planars = json::array();
    auto push = [](json& arr, ps_status st, double v) {
        if (st == PS_OK && std::isfinite(v))
            arr.push_back(v);
        else
            arr.push_back(nullptr);
    };
    for (std::uint32_t i = 0; i < pts; ++i) {
        const double x =
            static_cast<double>(i) / static_cast<double>(pts - 1);
        xs.push_back(x);
        double v = 0.0;
        ps_status st = ps_profile_F(prof.get(), x, &v);
        push(fs, st, v);
        st = ps_profile_F_inverse(prof.get(), x, &v);
        push(finvs, st, v);
        st = ps_profile_radial_density(prof.get(), x, &v);
        push(fstars, st, v);
        st = ps_profile_planar_density(prof.get(), x, &v);
        push(planars, st, v);
    }
    grid["x"] = std::move(xs);
    grid["F"] = std::move(fs);
    grid["F_inverse"] = std::move(finvs);
    grid["f_star"] = std::move(fstars);
    grid["planar_density"] = std::move(planars);

    std::map<std::string, std::string> meta{{"command", "limit"},
                                            {"regime", opt.regime}};
    if (opt.regime == "ginibre" || opt.regime == "cor1")
        meta["m"] = std::to_string(opt.m);
    if (opt.regime == "cor1") {
        std::ostringstream os;
        for (std::size_t i = 0; i < opt.alphas.size(); ++i) {
            if (i) os << ",";
            os << fmt17(opt.alphas[i]);
        }
        meta["alphas"] = os.str();
    }
    if (opt.regime == "cor3") meta["beta"] = opt.beta;
    if (opt.regime == "cor2") {
        if (!opt.q_table.empty())
            meta["q_table"] = opt.q_table;
        else if (opt.q_slope > 0.0)
            meta["q_slope"] = fmt17(opt.q_slope);
        else
            meta["q_const"] = fmt17(opt.q_const);
    }

    json doc;
    doc["meta"] = metadata_json(meta);
    doc["regime"] = regime_names[regime];
    doc["numerics"] = {{"grid_points", pts},
                       {"grid_step", 1.0 / static_cast<double>(pts - 1)},
                       {"quadrature_abs_tol", 1e-10},
                       {"inversion_tol", 5e-10}};
    doc["grid"] = std::move(grid);

    std::ofstream out = open_output(opt.out);
    out << doc.dump(2) << "\n";
    std::printf("limit: regime=%s grid_points=%u -> %s\n",
                regime_names[regime], pts, opt.out.c_str());
    return 0;
}

/* ---- validate ------------------------------------------------------------ */

int cmd_validate(const Options& opt) {
    if (!opt.seed_given) fail_usage(2, "validate requires --seed");
    if (opt.draws < 1) fail_usage(2, "--draws must be >= 1");
    const double threshold = opt.threshold > 0 ? opt.threshold : 0.03;

    const auto gaps = effective_gaps(opt, opt.gaps, opt.gap_fill);
    const EnsembleHandle ens = make_ensemble(opt, opt.ensemble, gaps);
    const std::string oracle_kind =
        opt.oracle_ensemble.empty() ? opt.ensemble : opt.oracle_ensemble;
    const auto oracle_gaps = opt.oracle_gaps.empty()
                                 ? effective_gaps(opt, gaps, opt.gap_fill)
                                 : opt.oracle_gaps;
    const EnsembleHandle oracle_ens =
        make_ensemble(opt, oracle_kind, oracle_gaps);

    const std::uint32_t n = opt.n;
    const std::uint64_t draws = opt.draws;
    std::vector<double> structural(draws * n), matrix_route(draws * n);

    parallel_replicates(opt.threads, draws, [&](std::uint64_t r) {
        ps_sample* s = nullptr;
        check(ps_sample_radii(ens.get(), opt.seed, r, &s));
        check(ps_sample_log_sq_moduli(s, &structural[r * n]));
        ps_sample_free(s);
        check(ps_oracle_spectrum(oracle_ens.get(), opt.seed,
                                 kOracleStreamBase + r, nullptr, nullptr,
                                 &matrix_route[r * n], nullptr, nullptr));
    });

    double stat = 0.0;
    check(ps_ks_two_sample(structural.data(), structural.size(),
                           matrix_route.data(), matrix_route.size(), &stat));
    const bool pass = stat <= threshold;

    json doc;
    std::map<std::string, std::string> meta{
        {"command", "validate"},
        {"ensemble", opt.ensemble},
        {"oracle_ensemble", oracle_kind},
        {"n", std::to_string(opt.n)},
        {"m", std::to_string(opt.m)},
        {"draws", std::to_string(draws)},
        {"seed", std::to_string(opt.seed)},
    };
    if (!gaps.empty()) meta["gaps"] = gaps_to_string(gaps);
    if (!oracle_gaps.empty()) meta["oracle_gaps"] = gaps_to_string(oracle_gaps);
    doc["meta"] = metadata_json(meta);
    doc["statistic"] = stat;
    doc["sample_sizes"] = {structural.size(), matrix_route.size()};
    doc["seed"] = opt.seed;
    doc["threshold"] = threshold;
    doc["pass"] = pass;

    if (!opt.out.empty()) {
        std::ofstream out = open_output(opt.out);
        out << doc.dump(2) << "\n";
    }
    std::printf("validate: ks=%.6f threshold=%.6f %s\n", stat, threshold,
                pass ? "pass" : "FAIL");
    return pass ? 0 : 1;
}

/* ---- kstest ---------------------------------------------------------------- */

int cmd_kstest(const Options& opt) {
    if (!opt.seed_given) fail_usage(2, "kstest requires --seed");
    if (opt.regime.empty()) fail_usage(2, "kstest requires --regime");
    if (opt.scaling == "none")
        fail_usage(2, "kstest requires --scaling (the scaled radii are "
                      "compared against the limit)");
    const double threshold = opt.threshold > 0 ? opt.threshold : 0.05;

    // Pairing rules: the Ginibre power scaling goes with the Ginibre regime,
    // the truncated power scaling with the cor1..cor4 regimes.
    const ps_scaling scaling = parse_scaling(opt.scaling);
    if (opt.regime == "ginibre") {
        if (opt.ensemble != "ginibre" || scaling != PS_SCALE_GINIBRE_POWER)
            fail_usage(2, "regime ginibre pairs with --ensemble ginibre "
                          "--scaling ginibre-power");
    } else {
        if (opt.ensemble != "truncated" || scaling != PS_SCALE_TRUNCATED_POWER)
            fail_usage(2, "regimes cor1..cor4 pair with --ensemble truncated "
                          "--scaling truncated-power");
    }

    const auto gaps = effective_gaps(opt, opt.gaps, opt.gap_fill);
    const EnsembleHandle ens = make_ensemble(opt, opt.ensemble, gaps);
    const ProfileHandle prof = make_profile(opt);
    const double gamma = resolve_gamma(opt);
    const std::uint32_t n = opt.n;
    const std::uint64_t reps = opt.reps;

    std::vector<double> radial(reps * n), angular(reps * n);
    parallel_replicates(opt.threads, reps, [&](std::uint64_t r) {
        ps_sample* s = nullptr;
        check(ps_sample_radii(ens.get(), opt.seed, r, &s));
        check(ps_sample_attach_angles(s, opt.seed, kAngleStreamBase + r));
        check(ps_sample_scaled(s, scaling, gamma, &radial[r * n]));
        check(ps_sample_angles(s, &angular[r * n]));
        ps_sample_free(s);
    });

    double radial_stat = 0.0, angular_stat = 0.0;
    check(ps_ks_vs_profile_radial(prof.get(), radial.data(), radial.size(),
                                  &radial_stat));
    check(ps_ks_uniform(angular.data(), angular.size(), 0.0,
                        6.283185307179586476925286766559, &angular_stat));
    const bool pass = radial_stat <= threshold && angular_stat <= threshold;

    std::map<std::string, std::string> meta{
        {"command", "kstest"},   {"ensemble", opt.ensemble},
        {"regime", opt.regime},  {"n", std::to_string(opt.n)},
        {"m", std::to_string(opt.m)}, {"scaling", opt.scaling},
        {"reps", std::to_string(reps)}, {"seed", std::to_string(opt.seed)},
    };
    if (!gaps.empty()) meta["gaps"] = gaps_to_string(gaps);
    if (scaling == PS_SCALE_TRUNCATED_POWER) meta["gamma"] = fmt17(gamma);

    json doc;
    doc["meta"] = metadata_json(meta);
    doc["statistic"] = radial_stat;
    doc["radial_statistic"] = radial_stat;
    doc["angular_statistic"] = angular_stat;
    doc["sample_sizes"] = {radial.size(), angular.size()};
    doc["seed"] = opt.seed;
    doc["threshold"] = threshold;
    doc["pass"] = pass;

    if (!opt.out.empty()) {
        std::ofstream out = open_output(opt.out);
        out << doc.dump(2) << "\n";
    }
    std::printf("kstest: radial_ks=%.6f angular_ks=%.6f threshold=%.6f %s\n",
                radial_stat, angular_stat, threshold, pass ? "pass" : "FAIL");
    return pass ? 0 : 1;
}

/* ---- kernel ------------------------------------------------------------------ */

int cmd_kernel(const Options& opt) {
    if (opt.n == 0) fail_usage(2, "kernel requires --n");
    if (opt.out.empty()) fail_usage(2, "kernel requires --out");

    ps_kernel* k = nullptr;
    double support_upper = 1.0;
    std::map<std::string, std::string> meta{{"command", "kernel"},
                                            {"weight", opt.weight},
                                            {"n", std::to_string(opt.n)}};
    if (opt.weight == "ginibre-m1") {
        check(ps_kernel_ginibre_m1(opt.n, &k));
    } else if (opt.weight == "truncated-m1") {
        check(ps_kernel_truncated_m1(opt.n, opt.l, &k));
        meta["l"] = std::to_string(opt.l);
    } else if (opt.weight == "table") {
        if (opt.weight_table.empty())
            fail_usage(2, "--weight table needs --weight-table FILE");
        std::ifstream in(opt.weight_table);
        if (!in) fail_usage(2, "cannot open weight table: " + opt.weight_table);
        std::vector<double> xs, phis;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
            double x, phi;
            if (std::sscanf(line.c_str(), "%lf,%lf", &x, &phi) == 2) {
                xs.push_back(x);
                phis.push_back(phi);
            }
        }
        check(ps_kernel_tabulated(opt.n, xs.data(), phis.data(), xs.size(),
                                  &k));
        if (!xs.empty()) support_upper = xs.back();
        meta["weight_table"] = opt.weight_table;
    } else {
        fail_usage(2, "unknown --weight '" + opt.weight +
                          "' (ginibre-m1|truncated-m1|table)");
    }

    double log_c = 0.0;
    check(ps_kernel_log_norm_const(k, &log_c));
    double rmax = opt.pn_rmax;
    if (rmax <= 0.0) {
        rmax = opt.weight == "ginibre-m1"
                   ? std::sqrt(static_cast<double>(opt.n)) + 6.0
                   : support_upper;
    }

    const std::string ck_path = opt.out + ".ck.csv";
    const std::string pn_path = opt.out + ".pn.csv";
    {
        std::ofstream out = open_output(ck_path);
        auto m = meta;
        m["log_C"] = fmt17(log_c);
        write_metadata_csv(out, m);
        out << "k,log_ck,ck\n";
        for (std::uint32_t i = 0; i < opt.n; ++i) {
            double lc = 0.0;
            check(ps_kernel_log_ck(k, i, &lc));
            out << i << "," << fmt17(lc) << "," << fmt17(std::exp(lc)) << "\n";
        }
    }
    {
        std::ofstream out = open_output(pn_path);
        auto m = meta;
        m["r_max"] = fmt17(rmax);
        m["points"] = std::to_string(opt.pn_points);
        write_metadata_csv(out, m);
        out << "r,radial_density\n";
        for (std::uint32_t i = 0; i < opt.pn_points; ++i) {
            const double r = rmax * static_cast<double>(i) /
                             static_cast<double>(opt.pn_points - 1);
            double v = 0.0;
            check(ps_kernel_radial_density(k, r, &v));
            out << fmt17(r) << "," << fmt17(v) << "\n";
        }
    }
    ps_kernel_free(k);
    std::printf("kernel: weight=%s n=%u log_C=%s -> %s, %s\n",
                opt.weight.c_str(), opt.n, fmt17(log_c).c_str(),
                ck_path.c_str(), pn_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"prodspec: eigenvalue-radius sampling for product random "
                 "matrix ensembles"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "flat key=value file; flags override it");

    Options opt;
    auto* seed_opt =
        app.add_option("--seed", opt.seed, "base seed (echoed in outputs)");
    app.add_option("--threads", opt.threads, "worker threads for replicates");
    app.add_option("--out", opt.out, "output file path");
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    app.add_option("--ensemble", opt.ensemble, "ginibre | truncated");
    app.add_option("--n", opt.n, "matrix dimension n");
    app.add_option("--m", opt.m, "number of factors m");
    app.add_option("--gaps", opt.gaps, "truncation gaps l_1,...,l_m")
        ->delimiter(',');
    app.add_option("--gap", opt.gap_fill, "use one gap value for all factors");

    app.add_option("--method", opt.method, "structural | oracle");
    app.add_option("--scaling", opt.scaling,
                   "none | ginibre-power | truncated-power | linear");
    app.add_option("--gamma", opt.gamma, "gamma_n for truncated-power");
    app.add_option("--gamma-rule", opt.gamma_rule,
                   "fixed | m | mean-gaps (how gamma_n is chosen)");
    app.add_option("--reps", opt.reps, "replicate count");
    app.add_flag("--angles", opt.angles, "attach uniform angles");

    app.add_option("--regime", opt.regime,
                   "ginibre | cor1 | cor2 | cor3 | cor4");
    app.add_option("--alphas", opt.alphas, "cor1 limits of n/n_j")
        ->delimiter(',');
    app.add_option("--beta", opt.beta, "cor3 limit of sum(l_j)/n, or 'inf'");
    app.add_option("--q-const", opt.q_const, "cor2 constant q");
    app.add_option("--q-slope", opt.q_slope, "cor2 linear q(t) = slope*t");
    app.add_option("--q-table", opt.q_table, "cor2 tabulated q, CSV t,q");
    app.add_option("--grid-points", opt.grid_points,
                   "limit export grid size");

    app.add_option("--draws", opt.draws, "validate: draws per route");
    app.add_option("--threshold", opt.threshold,
                   "pass/fail threshold (default 0.03 validate, 0.05 kstest)");
    app.add_option("--oracle-ensemble", opt.oracle_ensemble,
                   "validate: override the matrix-route ensemble kind");
    app.add_option("--oracle-gaps", opt.oracle_gaps,
                   "validate: override the matrix-route gaps")
        ->delimiter(',');

    app.add_option("--weight", opt.weight,
                   "kernel weight: ginibre-m1 | truncated-m1 | table");
    app.add_option("--l", opt.l, "truncated-m1 weight parameter");
    app.add_option("--weight-table", opt.weight_table,
                   "tabulated weight CSV x,phi");
    app.add_option("--pn-rmax", opt.pn_rmax, "radial grid upper end");
    app.add_option("--pn-points", opt.pn_points, "radial grid size");

    auto* sub_sample =
        app.add_subcommand("sample", "draw radii via the structural sampler");
    auto* sub_limit =
        app.add_subcommand("limit", "export a limiting profile grid");
    auto* sub_validate = app.add_subcommand(
        "validate", "two-sample KS: structural sampler vs matrix route");
    auto* sub_kstest = app.add_subcommand(
        "kstest", "one-sample KS of scaled radii against a limit");
    auto* sub_kernel =
        app.add_subcommand("kernel", "export kernel constants and P_n grid");
    for (auto* s :
         {sub_sample, sub_limit, sub_validate, sub_kstest, sub_kernel})
        s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    opt.seed_given = seed_opt->count() > 0;

    try {
        if (sub_sample->parsed()) return cmd_sample(opt);
        if (sub_limit->parsed()) return cmd_limit(opt);
        if (sub_validate->parsed()) return cmd_validate(opt);
        if (sub_kstest->parsed()) return cmd_kstest(opt);
        if (sub_kernel->parsed()) return cmd_kernel(opt);
    } catch (const UsageExit& e) {
        std::fprintf(stderr, "prodspec: %s\n", e.message.c_str());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "prodspec: %s\n", e.what());
        return 3;
    }
    return 2;
}
