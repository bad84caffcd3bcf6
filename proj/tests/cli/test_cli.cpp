#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "schema_check.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

std::string cli_path() {
    const char* p = std::getenv("GCPC_CLI");
    REQUIRE_MESSAGE(p != nullptr, "GCPC_CLI must point at the gcpc binary");
    return p;
}

std::string schema_dir() {
    const char* p = std::getenv("GCPC_SCHEMAS");
    REQUIRE_MESSAGE(p != nullptr, "GCPC_SCHEMAS must point at the schema directory");
    return p;
}

std::string config_dir() {
    const char* p = std::getenv("GCPC_CONFIGS");
    REQUIRE_MESSAGE(p != nullptr, "GCPC_CONFIGS must point at the configs directory");
    return p;
}

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe))
        out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json parse_envelope(const RunResult& r) {
    const json j = json::parse(r.out);
    schema_check::validate(j, schema_check::load(schema_dir() + "/command_result.schema.json"),
                           "envelope");
    return j;
}

void check_outputs(const json& envelope, const std::string& schema_name) {
    schema_check::validate(envelope["outputs"],
                           schema_check::load(schema_dir() + "/" + schema_name),
                           "outputs");
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "gcpc_cli_tests";
    fs::create_directories(dir);
    return dir;
}

// One reference dataset reused across cases, generated by the CLI itself.
const fs::path& sample_csv() {
    static fs::path path = [] {
        const fs::path p = temp_dir() / "sample232.csv";
        const auto r = run("sample --omega 2 --gamma 3 --lambda 2 --n 400 --seed 77 --out " +
                           p.string());
        REQUIRE(r.exit_code == 0);
        return p;
    }();
    return path;
}

}  // namespace

TEST_CASE("sample writes csv and a valid envelope") {
    const auto r = run("sample --omega 2 --gamma 3 --lambda 2 --n 10 --seed 5 --out " +
                       (temp_dir() / "s.csv").string());
    CHECK(r.exit_code == 0);
    const json env = parse_envelope(r);
    check_outputs(env, "sample_outputs.schema.json");

    std::ifstream in(temp_dir() / "s.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "theta");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 10);
}

TEST_CASE("sample to stdout emits csv") {
    const auto r = run("sample --omega 0 --gamma 1 --lambda 1 --n 3 --seed 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("theta\n", 0) == 0);
}

TEST_CASE("fit on sampled data recovers the parameters end to end") {
    const auto r = run("fit " + sample_csv().string() + " --column theta --family gcpc");
    CHECK(r.exit_code == 0);
    const json env = parse_envelope(r);
    check_outputs(env, "fit_outputs.schema.json");
    const auto& params = env["outputs"]["params"];
    CHECK(std::abs(params["omega"].get<double>() - 2.0) < 0.25);
    CHECK(std::abs(params["gamma"].get<double>() - 3.0) / 3.0 < 0.35);
    CHECK(std::abs(params["lambda"].get<double>() - 2.0) / 2.0 < 0.5);
    CHECK(env["inputs"]["files"][0]["sha256"].get<std::string>().size() == 64);
}

TEST_CASE("degrees and radians ingestion agree") {
    // rewrite the sample in degrees
    const fs::path deg_csv = temp_dir() / "deg.csv";
    {
        std::ifstream in(sample_csv());
        std::ofstream out(deg_csv);
        std::string line;
        std::getline(in, line);
        out << "theta\n";
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            out << std::stod(line) * 180.0 / M_PI << "\n";
        }
    }
    const auto rad = parse_envelope(run("fit " + sample_csv().string() + " --column theta"));
    const auto deg = parse_envelope(
        run("fit " + deg_csv.string() + " --column theta --unit degrees"));
    const double om_rad = rad["outputs"]["params"]["omega"].get<double>();
    const double om_deg = deg["outputs"]["params"]["omega"].get<double>();
    CHECK(std::abs(om_rad - om_deg) < 1e-4);
    CHECK(std::abs(deg["outputs"]["omega_in_input_unit"].get<double>() -
                   om_deg * 180.0 / M_PI) < 1e-6);
    CHECK(std::abs(rad["outputs"]["loglik"].get<double>() -
                   deg["outputs"]["loglik"].get<double>()) < 1e-4);
}

TEST_CASE("fit error paths") {
    CHECK(run("fit /nonexistent.csv").exit_code == 1);

    const fs::path empty = temp_dir() / "empty.csv";
    std::ofstream(empty) << "theta\n";
    CHECK(run("fit " + empty.string()).exit_code == 1);

    CHECK(run("fit").exit_code == 64);
    CHECK(run("fit x.csv --family nonsense").exit_code == 64);
}

TEST_CASE("one-sample test against the generating location") {
    const auto r = run("test " + sample_csv().string() + " --column theta --omega0 2.0");
    CHECK(r.exit_code == 0);
    const json env = parse_envelope(r);
    check_outputs(env, "test_outputs.schema.json");
    CHECK(env["outputs"]["p_value"].get<double>() > 0.001);
    CHECK(env["outputs"]["fit_h0"][0]["params"]["omega"].get<double>() ==
          doctest::Approx(2.0));
}

TEST_CASE("two-sample test on identical files gives Lambda ~ 0") {
    for (const std::string fam : {"gcpc", "cipc"}) {
        const auto r = run("test " + sample_csv().string() + " " + sample_csv().string() +
                           " --column theta --family " + fam);
        CHECK(r.exit_code == 0);
        const json env = parse_envelope(r);
        CHECK(env["outputs"]["statistic"].get<double>() < 1e-4);
    }
}

TEST_CASE("test usage errors") {
    CHECK(run("test " + sample_csv().string()).exit_code == 64);  // no --omega0, one file
}

TEST_CASE("summary of the uniform distribution") {
    const auto r = run("summary --omega 0 --gamma 0 --lambda 1");
    CHECK(r.exit_code == 0);
    const json env = parse_envelope(r);
    check_outputs(env, "summary_outputs.schema.json");
    CHECK(env["outputs"]["rho"].get<double>() == 0.0);
    CHECK(env["outputs"]["entropy"].get<double>() == doctest::Approx(std::log(2 * M_PI)));
    CHECK(env["outputs"]["unimodality"]["unimodal"].get<bool>());
}

TEST_CASE("summary rejects invalid parameters with the usage exit code") {
    CHECK(run("summary --omega 0 --gamma 0 --lambda -1").exit_code == 64);
    CHECK(run("summary --omega 0 --gamma -2 --lambda 1").exit_code == 64);
}

TEST_CASE("prob covers the full circle") {
    const auto r = run("prob --omega 0.5 --gamma 2 --lambda 3 --from -3.14159265358979312"
                       " --to 3.14159265358979312");
    CHECK(r.exit_code == 0);
    const json env = parse_envelope(r);
    check_outputs(env, "prob_outputs.schema.json");
    CHECK(env["outputs"]["probability"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("grid emits two maxima for the bimodal reference parameters") {
    const fs::path grid_csv = temp_dir() / "grid.csv";
    const auto r = run("grid --points 360 --omega 0.873 --gamma 0.238 --lambda 0.155 --out " +
                       grid_csv.string());
    CHECK(r.exit_code == 0);
    check_outputs(parse_envelope(r), "grid_outputs.schema.json");

    std::ifstream in(grid_csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "theta,density");
    std::vector<double> dens;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        dens.push_back(std::stod(line.substr(comma + 1)));
    }
    REQUIRE(dens.size() == 360);
    int maxima = 0;
    for (std::size_t i = 0; i < dens.size(); ++i) {
        const double prev = dens[(i + dens.size() - 1) % dens.size()];
        const double next = dens[(i + 1) % dens.size()];
        if (dens[i] > prev && dens[i] > next) ++maxima;
    }
    CHECK(maxima == 2);
}

TEST_CASE("regress: intercept-only matches fit") {
    // constant predictor column is rank deficient next to the intercept, so
    // regress on a noise covariate with a negligible slope instead
    const fs::path csv = temp_dir() / "reg.csv";
    {
        std::ifstream in(sample_csv());
        std::ofstream out(csv);
        std::string line;
        std::getline(in, line);
        out << "direction,x\n";
        int i = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            out << line << "," << (i % 7) * 0.1 << "\n";
            ++i;
        }
    }
    const auto rf = parse_envelope(
        run("regress " + csv.string() + " --response direction --pred continuous:x --family both"));
    check_outputs(rf, "regress_outputs.schema.json");
    CHECK(rf["outputs"].contains("comparison"));
    const auto fit = parse_envelope(run("fit " + csv.string() + " --column direction"));
    // the x slope is nearly zero so the likelihoods should be close
    CHECK(std::abs(rf["outputs"]["gcpc"]["loglik"].get<double>() -
                   fit["outputs"]["loglik"].get<double>()) < 3.0);
}

TEST_CASE("regress rejects unknown columns and zero compositions") {
    const fs::path csv = temp_dir() / "comp.csv";
    std::ofstream(csv) << "direction,a,b,c\n0.5,0.2,0.3,0.5\n1.0,0.5,0.5,0.0\n"
                          "0.7,0.1,0.4,0.5\n0.9,0.3,0.3,0.4\n-0.5,0.25,0.25,0.5\n"
                          "0.2,0.2,0.2,0.6\n0.4,0.1,0.2,0.7\n1.2,0.3,0.2,0.5\n"
                          "0.1,0.15,0.35,0.5\n0.8,0.4,0.1,0.5\n";
    CHECK(run("regress " + csv.string() + " --response direction --pred continuous:missing")
              .exit_code == 1);
    const auto r = run("regress " + csv.string() +
                       " --response direction --pred simplex:a,b,c");
    CHECK(r.exit_code == 1);
}

TEST_CASE("simulate smoke campaign and report schema") {
    const fs::path out_dir = temp_dir() / "sim";
    const auto r = run("simulate " + config_dir() + "/smoke.json --out " + out_dir.string());
    CHECK(r.exit_code == 0);
    const json env = parse_envelope(r);
    check_outputs(env, "simulate_outputs.schema.json");

    const json report = schema_check::load((out_dir / "report.json").string());
    schema_check::validate(report, schema_check::load(schema_dir() + "/report.schema.json"),
                           "report");
    CHECK(report["cells"].size() == 1);

    std::ifstream cells(out_dir / "cells.csv");
    std::string header;
    std::getline(cells, header);
    CHECK(header == "n,rate,mc_se,failures");
}

TEST_CASE("simulate config errors exit 65") {
    const fs::path bad = temp_dir() / "bad.json";
    std::ofstream(bad) << "{\"schema\": \"gcpc-campaign/1\", \"study\": \"nope\"}";
    CHECK(run("simulate " + bad.string()).exit_code == 65);

    const fs::path notjson = temp_dir() / "notjson.json";
    std::ofstream(notjson) << "study = nope";
    CHECK(run("simulate " + notjson.string()).exit_code == 65);
}

TEST_CASE("campaign configs bundled with the repo validate") {
    for (const std::string name :
         {"table1.json", "table1_full.json", "table2.json", "table2_full.json",
          "rates.json", "rates_full.json", "smoke.json"}) {
        const json config = schema_check::load(config_dir() + "/" + name);
        schema_check::validate(config,
                               schema_check::load(schema_dir() + "/campaign.schema.json"),
                               name);
    }
}

TEST_CASE("sample -> fit round trip through files") {
    const fs::path csv = temp_dir() / "roundtrip.csv";
    REQUIRE(run("sample --omega -1.2 --gamma 1.5 --lambda 0.7 --n 1500 --seed 3 --out " +
                csv.string())
                .exit_code == 0);
    const auto env = parse_envelope(run("fit " + csv.string() + " --column theta"));
    CHECK(std::abs(env["outputs"]["params"]["omega"].get<double>() + 1.2) < 0.15);
    CHECK(std::abs(env["outputs"]["params"]["gamma"].get<double>() - 1.5) < 0.45);
    CHECK(std::abs(env["outputs"]["params"]["lambda"].get<double>() - 0.7) < 0.35);
}
