#pragma once

#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cblasso/cblasso.hpp"
#include "cblasso/certificates.hpp"
#include "cblasso/experiment.hpp"
#include "cblasso/noise.hpp"

namespace cblasso {

using json = nlohmann::json;

inline json to_json(const AtomicMeasure& mu) {
    json atoms = json::array();
    for (const auto& a : mu.atoms())
        atoms.push_back({{"t", a.position.t}, {"re", a.amplitude.real()}, {"im", a.amplitude.imag()}});
    return json{{"atoms", atoms}};
}

inline AtomicMeasure measure_from_json(const json& j) {
    if (!j.contains("atoms") || !j.at("atoms").is_array())
        throw std::invalid_argument("measure_from_json: missing \"atoms\" array");
    AtomicMeasure mu;
    for (const auto& a : j.at("atoms"))
        mu.add(TorusPoint(a.at("t").get<double>()),
               Complex(a.at("re").get<double>(), a.at("im").get<double>()));
    return mu;
}

/// Complex vector of length 2 fc + 1 indexed by k = -fc..fc ascending.
inline json to_json(int fc, const Eigen::VectorXcd& v) {
    if (v.size() != 2L * fc + 1) throw std::invalid_argument("to_json: length != 2 fc + 1");
    json entries = json::array();
    for (long i = 0; i < v.size(); ++i) entries.push_back({v(i).real(), v(i).imag()});
    return json{{"fc", fc}, {"entries", entries}};
}

inline std::pair<int, Eigen::VectorXcd> vector_from_json(const json& j) {
    const int fc = j.at("fc").get<int>();
    const auto& entries = j.at("entries");
    if (fc < 0 || !entries.is_array() || long(entries.size()) != 2L * fc + 1)
        throw std::invalid_argument("vector_from_json: entries length != 2 fc + 1");
    Eigen::VectorXcd v(2L * fc + 1);
    for (long i = 0; i < v.size(); ++i) {
        const auto& e = entries[i];
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("vector_from_json: entry is not [re, im]");
        v(i) = Complex(e[0].get<double>(), e[1].get<double>());
    }
    return {fc, v};
}

inline json to_json(const RootSet& roots) {
    json pts = json::array(), res = json::array();
    for (const auto& p : roots.points) pts.push_back(p.t);
    for (double r : roots.residuals) res.push_back(r);
    return json{{"points", pts},
                {"residuals", res},
                {"constant_modulus", roots.constant_modulus},
                {"dropped_seeds", roots.dropped_seeds}};
}

inline json to_json(const CBLassoResult& res) {
    json j{{"regime", regime_name(res.regime)},
           {"lambda", res.lambda_used},
           {"lambda_hat", res.lambda_hat},
           {"lambda_max", res.lambda_max},
           {"sigma_hat", res.sigma_hat},
           {"kkt_residual", res.kkt_residual},
           {"alt_iterations", res.alt_iterations},
           {"measure", to_json(res.mu_hat)}};
    if (res.lambda_min) j["lambda_min"] = *res.lambda_min;
    if (res.dual) {
        j["dual"] = {{"objective", res.dual->objective},
                     {"sup_p", res.dual->sup_p},
                     {"iterations", res.dual->conic.iterations},
                     {"primal_residual", res.dual->conic.primal_residual},
                     {"dual_residual", res.dual->conic.dual_residual},
                     {"converged", res.dual->conic.status == ConicStatus::converged}};
    }
    json sr = json::array();
    for (double r : res.support_residuals) sr.push_back(r);
    j["support_residuals"] = sr;
    return j;
}

inline json to_json(const Certificate& cert, const CertReport& rep) {
    json nodes = json::array();
    for (const auto& nd : cert.nodes) nodes.push_back(nd.t);
    json targets = json::array();
    for (long i = 0; i < cert.targets.size(); ++i)
        targets.push_back({cert.targets(i).real(), cert.targets(i).imag()});
    const char* kind = cert.kind == CertKind::q1 ? "q1" : cert.kind == CertKind::q01 ? "q01" : "q0";
    return json{{"kind", kind},
                {"fc", cert.fc},
                {"nodes", nodes},
                {"targets", targets},
                {"coefficients", to_json(cert.poly.degree(), cert.poly.coeffs())},
                {"report",
                 {{"interp_residual", rep.interp_residual},
                  {"sup_modulus", rep.sup_modulus},
                  {"far_sup", rep.far_sup},
                  {"far_margin", rep.far_margin},
                  {"near_kappa", rep.near_kappa},
                  {"l1", rep.l1},
                  {"pass_interp", rep.pass_interp},
                  {"pass_far", rep.pass_far},
                  {"pass_near", rep.pass_near}}}};
}

inline json to_json(const Prop4Check& c) {
    return json{{"lambda", c.lambda},       {"eta", c.eta},
                {"alpha", c.alpha},         {"n", c.n},
                {"mu0_tv", c.mu0_tv},       {"sigma0", c.sigma0},
                {"R", c.R},                 {"sigma_lower", c.sigma_lower},
                {"cond_lambda", c.cond_lambda}, {"cond_snr", c.cond_snr},
                {"prob_bound", c.prob_bound}};
}

inline json to_json(const ExperimentSummary& s) {
    return json{{"replicas", s.replicas},
                {"failures", s.failures},
                {"support_success_rate", s.support_success_rate},
                {"median_sigma_hat", s.median_sigma_hat},
                {"median_sigma_over_sqrt2", s.median_sigma_over_sqrt2},
                {"median_sigma_blasso", s.median_sigma_blasso},
                {"median_amp_err_cblasso", s.median_amp_err_cb},
                {"median_amp_err_blasso", s.median_amp_err_bl},
                {"median_sigma_err_cblasso", s.median_sigma_err_cb},
                {"median_sigma_err_blasso", s.median_sigma_err_bl},
                {"q1_sigma_hat", s.q1_sigma_hat},
                {"q3_sigma_hat", s.q3_sigma_hat},
                {"total_runtime_s", s.total_runtime_s}};
}

inline std::string experiment_csv_header() {
    return "replica,regime,s_hat,sigma_hat,sigma_blasso,lambda,lambda_max,"
           "support_success,max_support_dist,amp_err_cblasso,amp_err_blasso,"
           "alt_iterations,sdp_iterations,kkt_residual,runtime_ms,error";
}

inline std::string experiment_csv_row(const ExperimentRecord& r) {
    std::ostringstream os;
    os.precision(12);
    os << r.replica << ',' << regime_name(r.regime) << ',' << r.s_hat << ',' << r.sigma_hat << ','
       << r.sigma_blasso << ',' << r.lambda << ',' << r.lambda_max << ','
       << (r.support_success ? 1 : 0) << ',' << r.max_support_dist << ',' << r.amp_err_cb << ','
       << r.amp_err_bl << ',' << r.alt_iterations << ',' << r.sdp_iterations << ','
       << r.kkt_residual << ',' << r.runtime_ms << ',' << r.error;
    return os.str();
}

}  // namespace cblasso
