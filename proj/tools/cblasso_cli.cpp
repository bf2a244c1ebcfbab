#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "cblasso/serialize.hpp"

namespace {

using namespace cblasso;

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    json j;
    in >> j;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << text;
}

int cmd_solve(const std::string& input, double lambda_frac, double lambda, bool has_lambda,
              bool compute_lambda_min, const std::string& out) {
    auto [fc, y] = vector_from_json(read_json_file(input));
    const FourierOperator op(fc);
    CBLassoConfig cfg;
    if (has_lambda)
        cfg.lambda = lambda;
    else
        cfg.lambda_frac = lambda_frac;
    cfg.compute_lambda_min = compute_lambda_min;
    CBLassoResult res = solve_pipeline(op, y, cfg);
    write_text(out, to_json(res).dump(2) + "\n");
    if (res.dual && res.dual->conic.status != ConicStatus::converged) {
        std::cerr << "solver did not converge (primal residual "
                  << res.dual->conic.primal_residual << ")\n";
        return kExitSolver;
    }
    std::cout << "regime=" << regime_name(res.regime) << " sigma_hat=" << res.sigma_hat
              << " atoms=" << res.mu_hat.size() << "\n";
    return 0;
}

int cmd_simulate(int n, int spikes, double sigma0, double lambda_frac, int replicas,
                 std::uint64_t seed, const std::string& out, const std::string& summary_path) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.s0 = spikes;
    cfg.sigma0 = sigma0;
    cfg.lambda_frac = lambda_frac;
    cfg.replicas = replicas;
    cfg.seed = seed;
    auto [records, summary] = run_experiment(cfg);
    std::ostringstream csv;
    csv << experiment_csv_header() << "\n";
    for (const auto& r : records) csv << experiment_csv_row(r) << "\n";
    write_text(out, csv.str());
    if (!summary_path.empty()) write_text(summary_path, to_json(summary).dump(2) + "\n");
    std::cout << "replicas=" << summary.replicas << " failures=" << summary.failures
              << " median_sigma_hat=" << summary.median_sigma_hat
              << " support_success_rate=" << summary.support_success_rate << "\n";
    return summary.failures == 0 ? 0 : kExitSolver;
}

int cmd_certify(const std::vector<double>& node_list, int fc, const std::string& kind,
                const std::string& out) {
    const FourierOperator op(fc);
    std::vector<TorusPoint> nodes;
    for (double t : node_list) nodes.emplace_back(t);
    const long s = long(nodes.size());
    Certificate cert;
    if (kind == "q1") {
        cert = build_interpolant(op, nodes, Eigen::VectorXcd::Ones(s));
    } else if (kind == "q01") {
        Eigen::VectorXcd targets = Eigen::VectorXcd::Zero(s);
        targets(0) = 1.0;
        cert = build_interpolant(op, nodes, targets);
    } else if (kind == "q0") {
        cert = build_derivative_interpolant(op, nodes, Eigen::VectorXcd::Ones(s));
    } else {
        throw std::invalid_argument("kind must be q1, q01, or q0");
    }
    CertReport rep = verify_certificate(cert);
    write_text(out, to_json(cert, rep).dump(2) + "\n");
    std::cout << "kind=" << kind << " sup=" << rep.sup_modulus << " far_margin=" << rep.far_margin
              << " interp_residual=" << rep.interp_residual << "\n";
    return rep.pass_interp ? 0 : kExitSolver;
}

int cmd_ricecheck(int fc, int samples, const std::vector<double>& levels, std::uint64_t seed,
                  const std::string& out) {
    const FourierOperator op(fc);
    const int n = op.n();
    std::vector<int> exceed(levels.size(), 0);
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        const Eigen::VectorXcd eps = sample_noise(op, 1.0, rng);
        const double stat =
            sup_modulus(adjoint_polynomial(op, eps)).value / (std::sqrt(double(n)) * eps.norm());
        for (std::size_t j = 0; j < levels.size(); ++j)
            if (stat > levels[j]) ++exceed[j];
    }
    std::ostringstream csv;
    csv << "u,empirical,stderr,bound_simple,bound_sharp\n";
    csv.precision(10);
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const double u = levels[j];
        const double p = double(exceed[j]) / double(samples);
        const double se = std::sqrt(std::max(p * (1.0 - p), 1.0 / double(samples)) / double(samples));
        csv << u << ',' << p << ',' << se << ','
            << (u <= 1.0 ? normalized_sup_bound(u, fc, SupBoundVariant::simple)
                         : std::numeric_limits<double>::quiet_NaN())
            << ',' << normalized_sup_bound(u, fc, SupBoundVariant::sharp) << "\n";
    }
    write_text(out, csv.str());
    std::cout << csv.str();
    return 0;
}

int cmd_compat(int fc, const std::vector<double>& eps_list, const std::string& out) {
    const FourierOperator op(fc);
    auto curve = compatibility_curve(op, eps_list);
    std::ostringstream csv;
    csv << "eps,value\n";
    csv.precision(12);
    for (const auto& [e, v] : curve) csv << e << ',' << v << "\n";
    write_text(out, csv.str());
    std::cout << csv.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid-less sparse spike deconvolution with concomitant noise estimation"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Run the full pipeline on an observation vector");
    std::string in_path, out_path = "result.json";
    double lambda_frac = 0.5, lambda_val = 0.0;
    bool want_lmin = false;
    solve->add_option("--input", in_path, "Observation JSON {fc, entries}")->required();
    auto* fopt = solve->add_option("--lambda-frac", lambda_frac, "lambda as a fraction of lambda_max");
    auto* lopt = solve->add_option("--lambda", lambda_val, "absolute lambda (overrides --lambda-frac)");
    solve->add_flag("--compute-lambda-min", want_lmin, "also solve the BME dual for lambda_min");
    solve->add_option("--out", out_path, "Result JSON path");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Replica study with a paired BLasso baseline");
    int n = 161, spikes = 3, replicas = 100;
    double sigma0 = 1.0 / std::sqrt(2.0), sim_frac = 0.5;
    std::uint64_t seed = 42;
    std::string runs_path = "runs.csv", summary_path;
    sim->add_option("--n", n, "number of observations (odd)");
    sim->add_option("--spikes", spikes, "number of true spikes");
    sim->add_option("--sigma0", sigma0, "per-coordinate noise level");
    sim->add_option("--lambda-frac", sim_frac, "lambda as a fraction of lambda_max");
    sim->add_option("--replicas", replicas, "number of replicas");
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_option("--out", runs_path, "per-replica CSV path");
    sim->add_option("--summary", summary_path, "summary JSON path");

    // certify
    auto* cert = app.add_subcommand("certify", "Build and verify a dual certificate");
    std::vector<double> nodes;
    int cert_fc = 80;
    std::string kind = "q1", cert_out = "cert.json";
    cert->add_option("--nodes", nodes, "node positions in [0,1)")->required()->delimiter(',');
    cert->add_option("--fc", cert_fc, "frequency cutoff");
    cert->add_option("--kind", kind, "q1 | q01 | q0");
    cert->add_option("--out", cert_out, "certificate JSON path");

    // ricecheck
    auto* rice = app.add_subcommand("ricecheck", "Monte Carlo check of the sup-norm tail bounds");
    int rice_fc = 80, rice_samples = 100000;
    std::vector<double> levels{0.3, 0.4, 0.5};
    std::uint64_t rice_seed = 7;
    std::string rice_out = "tail.csv";
    rice->add_option("--fc", rice_fc, "frequency cutoff");
    rice->add_option("--samples", rice_samples, "number of MC samples");
    rice->add_option("--u", levels, "levels to check")->delimiter(',');
    rice->add_option("--seed", rice_seed, "RNG seed");
    rice->add_option("--out", rice_out, "CSV path");

    // compat
    auto* compat = app.add_subcommand("compat", "Compatibility-condition diagnostic curve");
    int compat_fc = 80;
    std::vector<double> eps_list{1e-1, 1e-2, 1e-3, 1e-4};
    std::string compat_out = "compat.csv";
    compat->add_option("--fc", compat_fc, "frequency cutoff");
    compat->add_option("--eps", eps_list, "spacings to evaluate")->delimiter(',');
    compat->add_option("--out", compat_out, "CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (solve->parsed()) {
            (void)fopt;
            return cmd_solve(in_path, lambda_frac, lambda_val, lopt->count() > 0, want_lmin,
                             out_path);
        }
        if (sim->parsed())
            return cmd_simulate(n, spikes, sigma0, sim_frac, replicas, seed, runs_path, summary_path);
        if (cert->parsed()) return cmd_certify(nodes, cert_fc, kind, cert_out);
        if (rice->parsed()) return cmd_ricecheck(rice_fc, rice_samples, levels, rice_seed, rice_out);
        if (compat->parsed()) return cmd_compat(compat_fc, eps_list, compat_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitConfig;
}
