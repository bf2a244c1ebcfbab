#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cblasso/blasso.hpp"
#include "cblasso/cblasso.hpp"
#include "cblasso/noise.hpp"
#include "cblasso/rng.hpp"

namespace cblasso {

enum class AmplitudeScheme { pm_one, complex_unit, custom };

struct ExperimentConfig {
    int n = 161;  // odd; fc = (n-1)/2
    int s0 = 3;
    AmplitudeScheme scheme = AmplitudeScheme::pm_one;
    std::vector<Complex> custom_amplitudes;
    double sigma0 = 1.0;
    double lambda_frac = 0.5;
    double delta_min = -1.0;  // < 0: default 2/n
    double near_c1 = 0.5;     // success radius c1/fc
    int replicas = 100;
    std::uint64_t seed = 42;
    // replication defaults: the published amplitude update and a solver
    // tolerance sized for support extraction rather than KKT audits
    static CBLassoConfig replication_solver() {
        CBLassoConfig c;
        c.paper_shrink = true;
        c.conic.tol = 1e-6;
        return c;
    }
    CBLassoConfig solver = replication_solver();

    int fc() const {
        if (n < 3 || n % 2 == 0) throw std::invalid_argument("ExperimentConfig: n must be odd >= 3");
        return (n - 1) / 2;
    }
    double resolved_delta() const { return delta_min < 0.0 ? 2.0 / double(n) : delta_min; }
};

struct Instance {
    AtomicMeasure mu0;
    Eigen::VectorXcd y;
    Eigen::VectorXcd eps;
};

/// Rejection-sample s0 separated positions, draw amplitudes, and form
/// y = F_n(mu0) + eps. Deterministic under a fixed rng state.
inline Instance generate_instance(const ExperimentConfig& cfg, Rng& rng) {
    const FourierOperator op(cfg.fc());
    const double delta = cfg.resolved_delta();
    if (double(cfg.s0) * delta >= 1.0)
        throw std::invalid_argument("generate_instance: infeasible placement (s0 * delta_min >= 1)");
    if (cfg.scheme == AmplitudeScheme::custom && long(cfg.custom_amplitudes.size()) != cfg.s0)
        throw std::invalid_argument("generate_instance: custom amplitude count mismatch");

    std::vector<double> pos(cfg.s0);
    bool placed = cfg.s0 == 0;
    for (int round = 0; round < 100000 && !placed; ++round) {
        for (auto& p : pos) p = rng.uniform();
        placed = true;
        for (int i = 0; i < cfg.s0 && placed; ++i)
            for (int j = i + 1; j < cfg.s0; ++j)
                if (torus_distance(TorusPoint(pos[i]), TorusPoint(pos[j])) < delta) {
                    placed = false;
                    break;
                }
    }
    if (!placed) throw std::runtime_error("generate_instance: placement failed after 1e5 rounds");

    Instance inst;
    for (int i = 0; i < cfg.s0; ++i) {
        Complex a;
        switch (cfg.scheme) {
            case AmplitudeScheme::pm_one: a = rng.uniform() < 0.5 ? -1.0 : 1.0; break;
            case AmplitudeScheme::complex_unit: a = std::polar(1.0, kTwoPi * rng.uniform()); break;
            case AmplitudeScheme::custom: a = cfg.custom_amplitudes[i]; break;
        }
        inst.mu0.add(TorusPoint(pos[i]), a);
    }
    if (cfg.sigma0 > 0.0)
        inst.eps = sample_noise(op, cfg.sigma0, rng);
    else
        inst.eps = Eigen::VectorXcd::Zero(op.n());
    inst.y = fourier_coefficients(op, inst.mu0) + inst.eps;
    return inst;
}

struct ExperimentRecord {
    int replica = 0;
    AtomicMeasure mu0;
    AtomicMeasure mu_hat;
    Eigen::VectorXcd blasso_amps;
    double sigma_hat = 0.0;
    double sigma_blasso = 0.0;
    double lambda = 0.0;
    double lambda_max = 0.0;
    Regime regime = Regime::null;
    bool support_success = false;
    double max_support_dist = 0.0;  // worst nearest-estimate distance over true spikes
    double amp_err_cb = 0.0;        // mean over true spikes of |sum_{near} a_hat - a0|
    double amp_err_bl = 0.0;
    int s_hat = 0;
    int alt_iterations = 0;
    int sdp_iterations = 0;
    double kkt_residual = 0.0;
    double runtime_ms = 0.0;
    std::string error;
};

struct ExperimentSummary {
    int replicas = 0;
    int failures = 0;
    double support_success_rate = 0.0;
    double median_sigma_hat = 0.0;
    double median_sigma_over_sqrt2 = 0.0;
    double median_sigma_blasso = 0.0;
    double median_amp_err_cb = 0.0;
    double median_amp_err_bl = 0.0;
    double median_sigma_err_cb = 0.0;  // |sigma_hat - sqrt2 sigma0|
    double median_sigma_err_bl = 0.0;  // |sigma_blasso - sqrt2 sigma0|
    double q1_sigma_hat = 0.0, q3_sigma_hat = 0.0;
    double total_runtime_s = 0.0;
};

namespace detail {

inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * double(v.size() - 1);
    const std::size_t lo = std::size_t(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - double(lo)) * (v[hi] - v[lo]);
}

inline int thread_budget() {
    if (const char* env = std::getenv("CBLASSO_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) return t;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

}  // namespace detail

/// One paired CBLasso/BLasso replica on a shared instance and support.
inline ExperimentRecord run_replica(const ExperimentConfig& cfg, int replica) {
    const FourierOperator op(cfg.fc());
    ExperimentRecord rec;
    rec.replica = replica;
    Rng rng = Rng::substream(cfg.seed, std::uint64_t(replica));
    const auto t0 = std::chrono::steady_clock::now();
    try {
        Instance inst = generate_instance(cfg, rng);
        rec.mu0 = inst.mu0;

        CBLassoConfig scfg = cfg.solver;
        scfg.lambda.reset();
        scfg.lambda_frac = cfg.lambda_frac;
        CBLassoResult res = solve_pipeline(op, inst.y, scfg);
        rec.mu_hat = res.mu_hat;
        rec.sigma_hat = res.sigma_hat;
        rec.lambda = res.lambda_used;
        rec.lambda_max = res.lambda_max;
        rec.regime = res.regime;
        rec.s_hat = int(res.mu_hat.size());
        rec.alt_iterations = res.alt_iterations;
        rec.sdp_iterations = res.dual ? res.dual->conic.iterations : 0;
        rec.kkt_residual = res.kkt_residual;

        // paired BLasso on the same support, sigma fixed to the truth
        AtomicMeasure mu_bl;
        if (!res.mu_hat.empty() && res.dual) {
            std::vector<TorusPoint> pts;
            Eigen::VectorXcd zeta(long(res.mu_hat.size()));
            long j = 0;
            for (const auto& atom : res.mu_hat.atoms()) {
                pts.push_back(atom.position);
                const Complex pv = res.dual->p_hat.eval(atom.position.t);
                zeta(j++) = pv / std::abs(pv);
            }
            BLassoResult bl = blasso_amplitudes(op, inst.y, pts,
                                                zeta, blasso_lambda_max(op, inst.y) / 2.0,
                                                cfg.sigma0);
            rec.blasso_amps = bl.amplitudes;
            for (std::size_t i = 0; i < pts.size(); ++i) mu_bl.add(pts[i], bl.amplitudes(i));
            rec.sigma_blasso = blasso_sigma_heuristic(op, inst.y, mu_bl, int(pts.size()));
        } else {
            rec.sigma_blasso = inst.y.norm() / std::sqrt(double(op.n()));
        }

        // localization / amplitude metrics
        const double radius = cfg.near_c1 / double(cfg.fc());
        rec.support_success = true;
        double amp_cb = 0.0, amp_bl = 0.0;
        for (const auto& truth : rec.mu0.atoms()) {
            double dmin = 0.5;
            Complex near_cb(0.0, 0.0), near_bl(0.0, 0.0);
            long j = 0;
            for (const auto& est : rec.mu_hat.atoms()) {
                const double d = torus_distance(truth.position, est.position);
                dmin = std::min(dmin, d);
                if (d <= radius) {
                    near_cb += est.amplitude;
                    if (rec.blasso_amps.size() > j) near_bl += rec.blasso_amps(j);
                }
                ++j;
            }
            rec.max_support_dist = std::max(rec.max_support_dist, dmin);
            if (dmin > radius) rec.support_success = false;
            amp_cb += std::abs(near_cb - truth.amplitude);
            amp_bl += std::abs(near_bl - truth.amplitude);
        }
        if (!rec.mu0.empty()) {
            rec.amp_err_cb = amp_cb / double(rec.mu0.size());
            rec.amp_err_bl = amp_bl / double(rec.mu0.size());
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    rec.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

/// Replica study with a paired BLasso baseline. Replicas run on
/// independent RNG substreams; results are ordered by replica index, so
/// output is independent of scheduling.
inline std::pair<std::vector<ExperimentRecord>, ExperimentSummary>
run_experiment(const ExperimentConfig& cfg) {
    std::vector<ExperimentRecord> records(cfg.replicas);
    const int threads = std::min(detail::thread_budget(), std::max(1, cfg.replicas));
    const auto t0 = std::chrono::steady_clock::now();
    if (threads <= 1) {
        for (int r = 0; r < cfg.replicas; ++r) records[r] = run_replica(cfg, r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&]() {
                for (int r = next.fetch_add(1); r < cfg.replicas; r = next.fetch_add(1))
                    records[r] = run_replica(cfg, r);
            });
        for (auto& th : pool) th.join();
    }

    ExperimentSummary sum;
    sum.replicas = cfg.replicas;
    std::vector<double> sh, sb, acb, abl, ecb, ebl;
    int ok = 0, success = 0;
    const double target = std::sqrt(2.0) * cfg.sigma0;
    for (const auto& r : records) {
        if (!r.error.empty()) {
            ++sum.failures;
            continue;
        }
        ++ok;
        if (r.support_success) ++success;
        sh.push_back(r.sigma_hat);
        sb.push_back(r.sigma_blasso);
        acb.push_back(r.amp_err_cb);
        abl.push_back(r.amp_err_bl);
        ecb.push_back(std::abs(r.sigma_hat - target));
        ebl.push_back(std::abs(r.sigma_blasso - target));
    }
    if (ok > 0) sum.support_success_rate = double(success) / double(ok);
    sum.median_sigma_hat = detail::quantile(sh, 0.5);
    sum.median_sigma_over_sqrt2 = sum.median_sigma_hat / std::sqrt(2.0);
    sum.median_sigma_blasso = detail::quantile(sb, 0.5);
    sum.median_amp_err_cb = detail::quantile(acb, 0.5);
    sum.median_amp_err_bl = detail::quantile(abl, 0.5);
    sum.median_sigma_err_cb = detail::quantile(ecb, 0.5);
    sum.median_sigma_err_bl = detail::quantile(ebl, 0.5);
    sum.q1_sigma_hat = detail::quantile(sh, 0.25);
    sum.q3_sigma_hat = detail::quantile(sh, 0.75);
    sum.total_runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(records), sum};
}

/// Compatibility-condition diagnostic for nu_eps = delta_eps - delta_{-eps}:
/// value(eps) = (1/n) sum_k 4 sin^2(2 pi k eps).
inline std::vector<std::pair<double, double>> compatibility_curve(const FourierOperator& op,
                                                                  const std::vector<double>& eps_list) {
    std::vector<std::pair<double, double>> out;
    for (double e : eps_list) {
        if (e <= 0.0) throw std::invalid_argument("compatibility_curve: eps must be positive");
        double s = 0.0;
        for (int k = -op.fc; k <= op.fc; ++k) {
            const double v = std::sin(kTwoPi * k * e);
            s += 4.0 * v * v;
        }
        out.emplace_back(e, s / double(op.n()));
    }
    return out;
}

}  // namespace cblasso
