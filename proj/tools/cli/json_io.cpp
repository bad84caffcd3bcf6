#include "cli/json_io.hpp"

#include <cmath>
#include <stdexcept>

#include "gcpc/angle.hpp"

namespace gcpc_cli {

using gcpc::pi;
using gcpc::two_pi;

std::vector<double> ingest_angles(const std::vector<double>& raw,
                                  const AngleColumnSpec& spec) {
    const double scale = spec.unit == "degrees" ? pi / 180.0 : 1.0;
    std::vector<double> out;
    out.reserve(raw.size());
    for (double v : raw) out.push_back(gcpc::canonicalize_radians(v * scale));
    return out;
}

double express_angle(double radians, const AngleColumnSpec& spec) {
    double v = gcpc::canonicalize_radians(radians);
    if (spec.range == "zero-two-pi" && v < 0.0) v += two_pi;
    if (spec.unit == "degrees") v *= 180.0 / pi;
    return v;
}

json envelope(const std::string& command, const json& inputs, const json& outputs,
              const std::vector<std::string>& warnings) {
    return json{{"schema", kResultSchema}, {"version", kVersion},
                {"command", command},      {"inputs", inputs},
                {"outputs", outputs},      {"warnings", warnings}};
}

json params_to_json(const gcpc::GcpcParams& p) {
    return json{{"omega", p.omega.radians()},
                {"gamma", p.gamma},
                {"lambda", p.lambda},
                {"delta", gcpc::gamma_to_delta(p.gamma)}};
}

json fit_to_json(const gcpc::FitResult& fit, const AngleColumnSpec& spec) {
    json starts = json::array();
    for (const auto& s : fit.starts_tried)
        starts.push_back(json{{"start", params_to_json(s.start)},
                              {"loglik", s.loglik},
                              {"converged", s.converged}});
    json se = nullptr;
    if (fit.se_available) {
        se = json{{"omega", fit.std_errors[0]}, {"gamma", fit.std_errors[1]}};
        if (fit.family == gcpc::Family::Gcpc) se["lambda"] = fit.std_errors[2];
    }
    return json{{"family", fit.family == gcpc::Family::Gcpc ? "gcpc" : "cipc"},
                {"params", params_to_json(fit.params)},
                {"omega_in_input_unit", express_angle(fit.params.omega.radians(), spec)},
                {"loglik", fit.loglik},
                {"std_errors", se},
                {"converged", fit.converged},
                {"near_uniform", fit.near_uniform},
                {"n_starts", fit.n_starts},
                {"starts_tried", starts}};
}

json lrt_to_json(const gcpc::LrtResult& lrt, const AngleColumnSpec& spec) {
    json h0 = json::array(), h1 = json::array();
    for (const auto& f : lrt.fit_h0) h0.push_back(fit_to_json(f, spec));
    for (const auto& f : lrt.fit_h1) h1.push_back(fit_to_json(f, spec));
    return json{{"statistic", lrt.statistic},
                {"df", lrt.df},
                {"p_value", lrt.p_value},
                {"fit_h0", h0},
                {"fit_h1", h1}};
}

json verdict_to_json(const gcpc::UnimodalityVerdict& v) {
    json modes = json::array();
    for (const auto& a : v.mode_angles) modes.push_back(a.radians());
    return json{{"unimodal", v.unimodal},
                {"case", gcpc::to_string(v.case_label)},
                {"critical_roots", v.critical_roots},
                {"mode_angles", modes}};
}

json regression_to_json(const gcpc::RegressionFit& fit) {
    json coef = json::array(), se = nullptr;
    for (Eigen::Index j = 0; j < fit.coef.rows(); ++j)
        coef.push_back(json::array({fit.coef(j, 0), fit.coef(j, 1)}));
    if (fit.se_available) {
        se = json::array();
        for (Eigen::Index j = 0; j < fit.coef_se.rows(); ++j)
            se.push_back(json::array({fit.coef_se(j, 0), fit.coef_se(j, 1)}));
    }
    return json{{"family", fit.family == gcpc::Family::Gcpc ? "gcpc" : "cipc"},
                {"columns", fit.column_names},
                {"coef", coef},
                {"coef_se", se},
                {"lambda", fit.lambda},
                {"lambda_se", fit.se_available ? json(fit.lambda_se) : json(nullptr)},
                {"loglik", fit.loglik},
                {"rho_hat", fit.rho_hat},
                {"rho_hat_se", fit.rho_hat_se},
                {"converged", fit.converged}};
}

json campaign_to_json(const gcpc::sim::SimCampaign& c) {
    json j{{"schema", kCampaignSchema},
           {"study", gcpc::sim::to_string(c.study)},
           {"replicates", c.replicates},
           {"alpha", c.alpha},
           {"seed", c.seed},
           {"parallelism", c.parallelism},
           {"fit_starts", c.fit_starts}};
    switch (c.study) {
        case gcpc::sim::Study::Type1OneSample:
            j["sample_sizes"] = c.sample_sizes;
            j["true_params"] = params_to_json(c.true_params);
            j["omega0"] = c.omega0;
            break;
        case gcpc::sim::Study::Type1TwoSample: {
            json pairs = json::array();
            for (auto [a, b] : c.sample_size_pairs) pairs.push_back(json::array({a, b}));
            j["sample_size_pairs"] = pairs;
            j["smaller_params"] = params_to_json(c.smaller_params);
            j["larger_params"] = params_to_json(c.larger_params);
            break;
        }
        case gcpc::sim::Study::ConvergenceRate: {
            j["sample_sizes"] = c.sample_sizes;
            j["scenario"] = gcpc::sim::to_string(c.scenario);
            j["rate_lambda"] = c.rate_lambda;
            const Eigen::MatrixXd b = c.true_coef.size() > 0
                                          ? c.true_coef
                                          : gcpc::sim::default_rate_coefficients(c.scenario);
            json coef = json::array();
            for (Eigen::Index r = 0; r < b.rows(); ++r)
                coef.push_back(json::array({b(r, 0), b(r, 1)}));
            j["true_coef"] = coef;
            j["vm_location"] = c.vm_location;
            j["vm_concentration"] = c.vm_concentration;
            j["exp_mean"] = c.exp_mean;
            break;
        }
    }
    return j;
}

json report_to_json(const gcpc::sim::SimReport& r) {
    json cells = json::array();
    for (const auto& c : r.cells) {
        json cell{{"n1", c.n1},     {"rate", c.rate},
                  {"mc_se", c.mc_se}, {"failures", c.failures}};
        if (c.n2 > 0) {
            cell["n2"] = c.n2;
            cell["rate_cipc"] = c.rate_cipc;
            cell["mc_se_cipc"] = c.mc_se_cipc;
        }
        cells.push_back(cell);
    }
    json frob = json::array();
    for (const auto& c : r.frob_cells)
        frob.push_back(json{{"n", c.n},
                            {"mean_sq_frobenius", c.mean_sq_frobenius},
                            {"mc_se", c.mc_se},
                            {"failures", c.failures}});
    json j{{"config", campaign_to_json(r.config)},
           {"cells", cells},
           {"frob_cells", frob},
           {"warnings", r.warnings},
           {"runtime_seconds", r.runtime_seconds}};
    if (!r.frob_cells.empty()) {
        j["slope"] = r.slope;
        j["slope_se"] = r.slope_se;
        j["intercept"] = r.intercept;
    }
    return j;
}

std::string report_cells_csv(const gcpc::sim::SimReport& r) {
    std::string out;
    char buf[256];
    if (!r.cells.empty()) {
        const bool two = r.cells.front().n2 > 0;
        out = two ? "n1,n2,rate_gcpc,mc_se_gcpc,rate_cipc,mc_se_cipc,failures\n"
                  : "n,rate,mc_se,failures\n";
        for (const auto& c : r.cells) {
            if (two)
                std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%d\n", c.n1,
                              c.n2, c.rate, c.mc_se, c.rate_cipc, c.mc_se_cipc,
                              c.failures);
            else
                std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d\n", c.n1, c.rate,
                              c.mc_se, c.failures);
            out += buf;
        }
    } else {
        out = "n,mean_sq_frobenius,mc_se,failures\n";
        for (const auto& c : r.frob_cells) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d\n", c.n,
                          c.mean_sq_frobenius, c.mc_se, c.failures);
            out += buf;
        }
    }
    return out;
}

namespace {

[[noreturn]] void config_error(const std::string& what) {
    throw std::invalid_argument("campaign config: " + what);
}

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) config_error(std::string(key) + " (number) required");
    return j[key].get<double>();
}

gcpc::GcpcParams parse_params(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_object()) config_error(std::string(key) + " (object) required");
    const json& p = j[key];
    return {require_number(p, "omega"), require_number(p, "gamma"),
            require_number(p, "lambda")};
}

}  // namespace

gcpc::sim::SimCampaign parse_campaign(const json& config) {
    using gcpc::sim::RateScenario;
    using gcpc::sim::Study;
    if (!config.is_object()) config_error("top level must be an object");
    if (!config.contains("schema") || config["schema"] != kCampaignSchema)
        config_error(std::string("schema must be \"") + kCampaignSchema + "\"");
    if (!config.contains("study") || !config["study"].is_string())
        config_error("study (string) required");

    gcpc::sim::SimCampaign c;
    const std::string study = config["study"].get<std::string>();
    if (study == "type1-one-sample")
        c.study = Study::Type1OneSample;
    else if (study == "type1-two-sample")
        c.study = Study::Type1TwoSample;
    else if (study == "convergence-rate")
        c.study = Study::ConvergenceRate;
    else
        config_error("unknown study '" + study + "'");

    if (config.contains("replicates")) c.replicates = config["replicates"].get<int>();
    if (config.contains("alpha")) c.alpha = config["alpha"].get<double>();
    if (config.contains("seed")) c.seed = config["seed"].get<std::uint64_t>();
    if (config.contains("parallelism")) c.parallelism = config["parallelism"].get<int>();
    if (config.contains("fit_starts")) c.fit_starts = config["fit_starts"].get<int>();
    if (c.replicates < 1) config_error("replicates must be >= 1");
    if (!(c.alpha > 0.0 && c.alpha <= 1.0)) config_error("alpha must lie in (0, 1]");

    switch (c.study) {
        case Study::Type1OneSample:
            if (config.contains("sample_sizes"))
                c.sample_sizes = config["sample_sizes"].get<std::vector<int>>();
            if (config.contains("true_params"))
                c.true_params = parse_params(config, "true_params");
            if (config.contains("omega0")) c.omega0 = config["omega0"].get<double>();
            if (c.sample_sizes.empty()) config_error("sample_sizes must be non-empty");
            break;
        case Study::Type1TwoSample: {
            if (config.contains("sample_size_pairs")) {
                c.sample_size_pairs.clear();
                for (const auto& p : config["sample_size_pairs"]) {
                    if (!p.is_array() || p.size() != 2)
                        config_error("sample_size_pairs entries must be [n1, n2]");
                    c.sample_size_pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
                }
            }
            if (config.contains("smaller_params"))
                c.smaller_params = parse_params(config, "smaller_params");
            if (config.contains("larger_params"))
                c.larger_params = parse_params(config, "larger_params");
            if (c.sample_size_pairs.empty())
                config_error("sample_size_pairs must be non-empty");
            break;
        }
        case Study::ConvergenceRate: {
            if (config.contains("sample_sizes"))
                c.sample_sizes = config["sample_sizes"].get<std::vector<int>>();
            if (config.contains("scenario")) {
                const std::string s = config["scenario"].get<std::string>();
                if (s == "circular")
                    c.scenario = RateScenario::Circular;
                else if (s == "continuous")
                    c.scenario = RateScenario::Continuous;
                else if (s == "both")
                    c.scenario = RateScenario::Both;
                else
                    config_error("unknown scenario '" + s + "'");
            }
            if (config.contains("rate_lambda"))
                c.rate_lambda = config["rate_lambda"].get<double>();
            if (config.contains("true_coef")) {
                const auto& rows = config["true_coef"];
                if (!rows.is_array() || rows.empty()) config_error("true_coef must be a non-empty array");
                c.true_coef.resize(static_cast<Eigen::Index>(rows.size()), 2);
                for (Eigen::Index r = 0; r < c.true_coef.rows(); ++r) {
                    const auto& row = rows[static_cast<std::size_t>(r)];
                    if (!row.is_array() || row.size() != 2)
                        config_error("true_coef rows must be [b1, b2]");
                    c.true_coef(r, 0) = row[0].get<double>();
                    c.true_coef(r, 1) = row[1].get<double>();
                }
            }
            if (config.contains("vm_location")) c.vm_location = config["vm_location"].get<double>();
            if (config.contains("vm_concentration"))
                c.vm_concentration = config["vm_concentration"].get<double>();
            if (config.contains("exp_mean")) c.exp_mean = config["exp_mean"].get<double>();
            if (c.sample_sizes.empty()) config_error("sample_sizes must be non-empty");
            if (!(c.rate_lambda > 0.0)) config_error("rate_lambda must be > 0");
            break;
        }
    }
    return c;
}

}  // namespace gcpc_cli
