#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cli/csv.hpp"
#include "cli/digest.hpp"
#include "cli/json_io.hpp"
#include "gcpc/density.hpp"
#include "gcpc/diagnostics.hpp"
#include "gcpc/sampling.hpp"

namespace {

using namespace gcpc_cli;

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitUsage = 64;
constexpr int kExitConfig = 65;

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> g_warnings;

void capture_diagnostics() {
    gcpc::set_log_handler([](const std::string& msg) { g_warnings.push_back(msg); });
}

void emit(const json& result) { std::cout << result.dump(2) << '\n'; }

json file_input(const std::string& path, std::size_t rows) {
    return json{{"path", path}, {"sha256", sha256_file(path)}, {"rows", rows}};
}

std::vector<double> load_angles(const std::string& path, const AngleColumnSpec& spec,
                                json& files) {
    CsvTable table;
    try {
        table = read_csv(path);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
    const std::vector<double>* col;
    try {
        col = &table.column(spec.column);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
    if (col->empty()) throw DataError("'" + path + "' contains no data rows");
    files.push_back(file_input(path, col->size()));
    return ingest_angles(*col, spec);
}

gcpc::GcpcParams checked_params(double omega, double gamma, double lambda) {
    if (!(lambda > 0.0)) throw UsageError("--lambda must be > 0");
    if (!(gamma >= 0.0)) throw UsageError("--gamma must be >= 0");
    return {omega, gamma, lambda};
}

// ---- subcommand bodies ------------------------------------------------------

int run_fit(const std::string& input, const AngleColumnSpec& spec,
            const std::string& family, int starts) {
    json files = json::array();
    const auto data = load_angles(input, spec, files);
    gcpc::FitOptions opts;
    opts.n_starts = starts;
    gcpc::FitResult fit;
    try {
        fit = family == "cipc" ? gcpc::fit_cipc(data, opts) : gcpc::fit_gcpc(data, opts);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
    const json inputs{{"files", files},
                      {"options", {{"family", family},
                                   {"starts", starts},
                                   {"column", spec.column},
                                   {"unit", spec.unit},
                                   {"range", spec.range}}}};
    emit(envelope("fit", inputs, fit_to_json(fit, spec), g_warnings));
    return fit.converged ? kExitOk : kExitNoConvergence;
}

int run_test(const std::string& input_a, const std::string& input_b, bool has_omega0,
             double omega0, const AngleColumnSpec& spec, const std::string& family) {
    json files = json::array();
    const bool two_sample = !input_b.empty();
    if (!two_sample && !has_omega0)
        throw UsageError("one-sample test requires --omega0 (or pass two files)");
    if (!two_sample && family == "cipc")
        throw UsageError("the one-sample location test is defined for --family gcpc");

    gcpc::LrtResult lrt;
    json options{{"family", family}, {"column", spec.column}, {"unit", spec.unit}};
    try {
        if (two_sample) {
            const auto a = load_angles(input_a, spec, files);
            const auto b = load_angles(input_b, spec, files);
            lrt = gcpc::lrt_two_locations(
                a, b, family == "cipc" ? gcpc::Family::Cipc : gcpc::Family::Gcpc);
            options["kind"] = "two-locations";
        } else {
            const auto a = load_angles(input_a, spec, files);
            const double om0 = spec.unit == "degrees" ? omega0 * gcpc::pi / 180.0 : omega0;
            lrt = gcpc::lrt_one_location(a, gcpc::Angle(om0));
            options["kind"] = "one-location";
            options["omega0"] = omega0;
        }
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
    emit(envelope("test", json{{"files", files}, {"options", options}},
                  lrt_to_json(lrt, spec), g_warnings));
    bool converged = true;
    for (const auto& f : lrt.fit_h0) converged = converged && f.converged;
    for (const auto& f : lrt.fit_h1) converged = converged && f.converged;
    return converged ? kExitOk : kExitNoConvergence;
}

int run_sample(double omega, double gamma, double lambda, std::size_t n,
               std::uint64_t seed, const std::string& out) {
    const auto params = checked_params(omega, gamma, lambda);
    if (n < 1) throw UsageError("--n must be >= 1");
    const auto draws = gcpc::sample_radians(params, n, seed);
    if (out.empty() || out == "-") {
        std::cout << format_csv({"theta"}, {draws});
        return kExitOk;
    }
    write_csv(out, {"theta"}, {draws});
    const json inputs{{"files", json::array()},
                      {"options", {{"omega", omega},
                                   {"gamma", gamma},
                                   {"lambda", lambda},
                                   {"n", n},
                                   {"seed", seed}}}};
    emit(envelope("sample", inputs,
                  json{{"output_file", out}, {"n", n}, {"params", params_to_json(params)}},
                  g_warnings));
    return kExitOk;
}

int run_summary(double omega, double gamma, double lambda) {
    const auto params = checked_params(omega, gamma, lambda);
    const auto s = gcpc::circular_summary(params);
    const auto v = gcpc::classify_unimodality(params);
    const double kl = gcpc::kl_gcpc_from_cipc(params);
    const json inputs{{"files", json::array()},
                      {"options", {{"omega", omega}, {"gamma", gamma}, {"lambda", lambda}}}};
    const json outputs{{"params", params_to_json(params)},
                       {"rho", s.rho},
                       {"circ_variance", s.circ_variance},
                       {"circ_sd", std::isinf(s.circ_sd) ? json(nullptr) : json(s.circ_sd)},
                       {"entropy", s.entropy},
                       {"kl_from_cipc", kl},
                       {"unimodality", verdict_to_json(v)}};
    emit(envelope("summary", inputs, outputs, g_warnings));
    return kExitOk;
}

int run_prob(double omega, double gamma, double lambda, double from, double to) {
    const auto params = checked_params(omega, gamma, lambda);
    double p;
    try {
        p = gcpc::interval_probability(gcpc::Angle(from), gcpc::Angle(to), params);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const json inputs{{"files", json::array()},
                      {"options", {{"omega", omega},
                                   {"gamma", gamma},
                                   {"lambda", lambda},
                                   {"from", from},
                                   {"to", to}}}};
    emit(envelope("prob", inputs,
                  json{{"from", from}, {"to", to}, {"probability", p}}, g_warnings));
    return kExitOk;
}

int run_grid(double omega, double gamma, double lambda, int points,
             const std::string& out) {
    const auto params = checked_params(omega, gamma, lambda);
    if (points < 2) throw UsageError("--points must be >= 2");
    std::vector<double> theta(points), dens(points);
    for (int k = 0; k < points; ++k) {
        theta[k] = -gcpc::pi + gcpc::two_pi * k / points;
        dens[k] = gcpc::pdf_polar(theta[k], params);
    }
    if (out.empty() || out == "-") {
        std::cout << format_csv({"theta", "density"}, {theta, dens});
        return kExitOk;
    }
    write_csv(out, {"theta", "density"}, {theta, dens});
    const json inputs{{"files", json::array()},
                      {"options", {{"omega", omega},
                                   {"gamma", gamma},
                                   {"lambda", lambda},
                                   {"points", points}}}};
    emit(envelope("grid", inputs,
                  json{{"output_file", out}, {"points", points}}, g_warnings));
    return kExitOk;
}

gcpc::Predictor parse_predictor(const std::string& spec, const CsvTable& table) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw UsageError("--pred expects kind:column[,column...], got '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    auto fetch = [&](const std::string& name) {
        try {
            return table.column(name);
        } catch (const std::exception& e) {
            throw DataError(e.what());
        }
    };
    if (kind == "continuous" || kind == "circular") {
        const auto& col = fetch(rest);
        Eigen::MatrixXd m(col.size(), 1);
        for (std::size_t i = 0; i < col.size(); ++i) m(i, 0) = col[i];
        return {kind == "continuous" ? gcpc::PredictorKind::Continuous
                                     : gcpc::PredictorKind::Circular,
                rest, m};
    }
    if (kind == "simplex") {
        std::vector<std::string> names;
        std::string cur;
        for (char ch : rest + ",") {
            if (ch == ',') {
                if (!cur.empty()) names.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (names.size() < 2) throw UsageError("simplex predictor needs >= 2 parts");
        Eigen::MatrixXd m(table.rows(), names.size());
        for (std::size_t j = 0; j < names.size(); ++j) {
            const auto& col = fetch(names[j]);
            for (std::size_t i = 0; i < col.size(); ++i)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
        }
        std::string label = names.front();
        for (std::size_t j = 1; j < names.size(); ++j) label += "." + names[j];
        return {gcpc::PredictorKind::SimplexAlr, label, m};
    }
    throw UsageError("unknown predictor kind '" + kind + "'");
}

int run_regress(const std::string& input, const std::string& response,
                const std::vector<std::string>& pred_specs, const AngleColumnSpec& spec,
                const std::string& family) {
    json files = json::array();
    CsvTable table;
    try {
        table = read_csv(input);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
    AngleColumnSpec resp_spec = spec;
    resp_spec.column = response;
    std::vector<double> y;
    try {
        y = ingest_angles(table.column(response), resp_spec);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
    files.push_back(file_input(input, y.size()));

    std::vector<gcpc::Predictor> predictors;
    for (const auto& s : pred_specs) predictors.push_back(parse_predictor(s, table));

    gcpc::Design design;
    try {
        design = gcpc::build_design(predictors);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }

    json outputs;
    bool converged = true;
    try {
        if (family == "gcpc" || family == "both") {
            const auto g = gcpc::fit_regression(design, y, gcpc::Family::Gcpc);
            outputs["gcpc"] = regression_to_json(g);
            converged = converged && g.converged;
            if (family == "both") {
                const auto c = gcpc::fit_regression(design, y, gcpc::Family::Cipc);
                outputs["cipc"] = regression_to_json(c);
                converged = converged && c.converged;
                const auto lrt = gcpc::compare_regressions(g, c);
                outputs["comparison"] = json{{"statistic", lrt.statistic},
                                             {"df", lrt.df},
                                             {"p_value", lrt.p_value}};
            }
        } else {
            const auto c = gcpc::fit_regression(design, y, gcpc::Family::Cipc);
            outputs["cipc"] = regression_to_json(c);
            converged = converged && c.converged;
        }
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    } catch (const std::domain_error& e) {
        throw DataError(e.what());
    }
    const json inputs{{"files", files},
                      {"options", {{"response", response},
                                   {"pred", pred_specs},
                                   {"family", family},
                                   {"unit", spec.unit}}}};
    emit(envelope("regress", inputs, outputs, g_warnings));
    return converged ? kExitOk : kExitNoConvergence;
}

int run_simulate(const std::string& config_path, const std::string& out_dir, int jobs) {
    json config;
    {
        std::ifstream in(config_path);
        if (!in) throw DataError("cannot open '" + config_path + "'");
        try {
            in >> config;
        } catch (const std::exception& e) {
            throw std::invalid_argument(std::string("campaign config: not valid JSON: ") +
                                        e.what());
        }
    }
    gcpc::sim::SimCampaign campaign = parse_campaign(config);  // throws -> exit 65
    if (jobs > 0) campaign.parallelism = jobs;

    const auto report = gcpc::sim::run_campaign(campaign);

    std::filesystem::create_directories(out_dir);
    const auto report_path = std::filesystem::path(out_dir) / "report.json";
    const auto cells_path = std::filesystem::path(out_dir) / "cells.csv";
    {
        std::ofstream out(report_path);
        out << report_to_json(report).dump(2) << '\n';
        std::ofstream cells(cells_path);
        cells << report_cells_csv(report);
    }
    const json inputs{{"files", json::array({file_input(config_path, 0)})},
                      {"options", {{"out", out_dir}, {"jobs", jobs}}}};
    json summary{{"study", gcpc::sim::to_string(campaign.study)},
                 {"report_file", report_path.string()},
                 {"cells_file", cells_path.string()},
                 {"runtime_seconds", report.runtime_seconds},
                 {"warnings", report.warnings}};
    emit(envelope("simulate", inputs, summary, g_warnings));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    capture_diagnostics();
    CLI::App app{"generalized circular projected Cauchy distributions: fitting, "
                 "testing, sampling and simulation"};
    app.require_subcommand(1);

    AngleColumnSpec spec;
    std::string input_a, input_b, family = "gcpc", out, response, config_path;
    std::string sim_out = "sim-out";
    std::vector<std::string> pred_specs;
    double omega = 0.0, gamma = 0.0, lambda = 1.0, from = 0.0, to = 0.0, omega0 = 0.0;
    std::uint64_t seed = 1;
    std::size_t n = 100;
    int starts = 12, points = 360, jobs = 0;

    auto add_column_flags = [&](CLI::App* cmd) {
        cmd->add_option("--column", spec.column, "angle column name or 0-based index");
        cmd->add_option("--unit", spec.unit, "angle unit of the input")
            ->check(CLI::IsMember({"radians", "degrees"}));
        cmd->add_option("--range", spec.range, "input range convention")
            ->check(CLI::IsMember({"pmpi", "zero-two-pi"}));
    };
    auto add_params = [&](CLI::App* cmd) {
        cmd->add_option("--omega", omega, "location")->required();
        cmd->add_option("--gamma", gamma, "concentration")->required();
        cmd->add_option("--lambda", lambda, "anisotropy")->required();
    };

    auto* fit = app.add_subcommand("fit", "maximum likelihood fit of a sample");
    fit->add_option("input", input_a, "CSV file")->required();
    fit->add_option("--family", family, "gcpc or cipc")
        ->check(CLI::IsMember({"gcpc", "cipc"}));
    fit->add_option("--starts", starts, "number of multistart points");
    add_column_flags(fit);

    auto* test = app.add_subcommand("test", "location likelihood-ratio tests");
    test->add_option("input", input_a, "CSV file (sample 1)")->required();
    test->add_option("input2", input_b, "CSV file (sample 2, two-sample test)");
    auto* omega0_opt = test->add_option("--omega0", omega0, "null location (one-sample)");
    test->add_option("--family", family, "gcpc or cipc (two-sample)")
        ->check(CLI::IsMember({"gcpc", "cipc"}));
    add_column_flags(test);

    auto* sample_cmd = app.add_subcommand("sample", "draw from a GCPC distribution");
    add_params(sample_cmd);
    sample_cmd->add_option("--n", n, "number of draws");
    sample_cmd->add_option("--seed", seed, "RNG seed");
    sample_cmd->add_option("--out", out, "CSV output file ('-' for stdout)");

    auto* summary_cmd = app.add_subcommand("summary", "distribution summaries");
    add_params(summary_cmd);

    auto* prob = app.add_subcommand("prob", "interval probability");
    add_params(prob);
    prob->add_option("--from", from, "interval start (radians)")->required();
    prob->add_option("--to", to, "interval end (radians)")->required();

    auto* grid = app.add_subcommand("grid", "density grid for plotting");
    add_params(grid);
    grid->add_option("--points", points, "grid size");
    grid->add_option("--out", out, "CSV output file ('-' for stdout)");

    auto* regress = app.add_subcommand("regress", "circular regression");
    regress->add_option("input", input_a, "CSV file")->required();
    regress->add_option("--response", response, "response angle column")->required();
    regress->add_option("--pred", pred_specs,
                        "predictor spec kind:column (continuous:, circular:, simplex:a,b,c)")
        ->required();
    regress->add_option("--family", family, "gcpc, cipc or both")
        ->check(CLI::IsMember({"gcpc", "cipc", "both"}));
    add_column_flags(regress);

    auto* simulate = app.add_subcommand("simulate", "run a simulation campaign");
    simulate->add_option("config", config_path, "campaign config JSON")->required();
    simulate->add_option("--out", sim_out, "output directory");
    simulate->add_option("--jobs", jobs, "parallel worker count override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (fit->parsed()) return run_fit(input_a, spec, family, starts);
        if (test->parsed())
            return run_test(input_a, input_b, omega0_opt->count() > 0, omega0, spec,
                            family);
        if (sample_cmd->parsed()) return run_sample(omega, gamma, lambda, n, seed, out);
        if (summary_cmd->parsed()) return run_summary(omega, gamma, lambda);
        if (prob->parsed()) return run_prob(omega, gamma, lambda, from, to);
        if (grid->parsed()) return run_grid(omega, gamma, lambda, points, out);
        if (regress->parsed())
            return run_regress(input_a, response, pred_specs, spec, family);
        if (simulate->parsed()) return run_simulate(config_path, sim_out, jobs);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
