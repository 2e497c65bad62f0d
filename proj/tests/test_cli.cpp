#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "helpers.hpp"
#include "mss/panel.hpp"
#include "mss/rng.hpp"
#include "mss/simulation.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kTmp = "cli_tmp";

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_cli(const std::string& args) {
    const fs::path out_file = kTmp / "stdout.txt";
    const std::string command =
        std::string(MSS_CLI_PATH) + " " + args + " > " + out_file.string() + " 2>&1";
    const int status = std::system(command.c_str());

    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    result.output = buffer.str();
    return result;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// A seeded simulated panel written to CSV once per process.
fs::path panel_csv() {
    static const fs::path path = [] {
        fs::create_directories(kTmp);
        mss::SimConfig config;
        config.benchmark_count = 3;
        config.redundant_count = 5;
        config.T = 300;
        auto rng = mss::rng::make_stream(2718, mss::rng::StreamKind::Panel, 0);
        const auto panel = mss::simulate_var_garch(config, rng);
        const fs::path csv = kTmp / "panel.csv";
        mss::save_panel_file(panel, csv.string());
        return csv;
    }();
    return path;
}

}  // namespace

TEST_CASE("estimate writes a replayable JSON report") {
    const auto result = run_cli("estimate --input " + panel_csv().string() +
                                " --boot 300 --seed 5 --threads 2");
    REQUIRE(result.exit_code == 0);

    const json report = json::parse(result.output);
    CHECK(report["level"] == 0.05);
    CHECK(report["B"] == 300);
    CHECK(report["variant"] == "mss");
    CHECK(report["config"]["seed"] == 5);
    CHECK(report["per_asset"].size() == 8);

    // the three benchmark assets drive the frontier in this seeded panel
    std::vector<std::string> selected = report["selected_labels"];
    for (const auto& label : {"K1", "K2", "K3"})
        CHECK(std::find(selected.begin(), selected.end(), label) != selected.end());
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
    const std::string base = "estimate --input " + panel_csv().string() + " --boot 200 --seed 9";
    const auto once = run_cli(base + " --threads 1");
    const auto twice = run_cli(base + " --threads 1");
    const auto wide = run_cli(base + " --threads 4");
    REQUIRE(once.exit_code == 0);
    CHECK(once.output == twice.output);
    CHECK(once.output == wide.output);
}

TEST_CASE("usage errors exit with code 2 and a machine-readable object") {
    SUBCASE("invalid level") {
        const auto result =
            run_cli("estimate --input " + panel_csv().string() + " --level 1.5");
        CHECK(result.exit_code == 2);
        const json error = json::parse(result.output);
        CHECK(error["error"]["type"] == "usage");
    }
    SUBCASE("unknown variant") {
        const auto result =
            run_cli("estimate --input " + panel_csv().string() + " --variant frontier");
        CHECK(result.exit_code == 2);
    }
    SUBCASE("boot below the floor") {
        const auto result =
            run_cli("estimate --input " + panel_csv().string() + " --boot 10");
        CHECK(result.exit_code == 2);
    }
}

TEST_CASE("missing input file exits with the data code") {
    const auto result = run_cli("estimate --input no_such_file.csv");
    CHECK(result.exit_code == 3);
    const json error = json::parse(result.output);
    CHECK(error["error"]["type"] == "data");
}

TEST_CASE("spanning reports the redundancy verdict") {
    const auto result = run_cli("spanning --input " + panel_csv().string() +
                                " --benchmark K1,K2,K3 --additional N1,N2,N3,N4,N5"
                                " --boot 300 --seed 5 --threads 2");
    REQUIRE(result.exit_code == 0);
    const json report = json::parse(result.output);
    CHECK(report["variant"] == "nonredundant");
    // N assets are exact combinations of the benchmark by construction
    CHECK(report["benchmark_spans_additional"] == true);
    CHECK(report["selected_labels"].empty());

    SUBCASE("additional list must be present") {
        const auto bad = run_cli("spanning --input " + panel_csv().string() +
                                 " --benchmark K1,K2,K3");
        CHECK(bad.exit_code == 2);
    }
    SUBCASE("sets must cover the panel") {
        const auto bad = run_cli("spanning --input " + panel_csv().string() +
                                 " --benchmark K1,K2,K3 --additional N1,N2");
        CHECK(bad.exit_code == 2);
    }
    SUBCASE("unknown label") {
        const auto bad = run_cli("spanning --input " + panel_csv().string() +
                                 " --benchmark K1,K2,XX --additional N1,N2,N3,N4,N5");
        CHECK(bad.exit_code == 2);
    }
}

TEST_CASE("diagnose emits one sorted row per asset, consistent with estimate") {
    const std::string common =
        " --input " + panel_csv().string() + " --boot 300 --seed 5 --threads 2";
    const auto csv = run_cli("diagnose" + common);
    REQUIRE(csv.exit_code == 0);

    std::istringstream lines(csv.output);
    std::string line;
    std::getline(lines, line);
    CHECK(line ==
          "rank,label,m_stat,alpha_abs,alpha_bound,beta_abs,beta_bound,exceed_source,in_mss");

    int rows = 0;
    double last_m = std::numeric_limits<double>::infinity();
    std::vector<std::string> in_mss_labels;
    while (std::getline(lines, line)) {
        ++rows;
        std::istringstream fields(line);
        std::string rank, label, m_stat, rest;
        std::getline(fields, rank, ',');
        std::getline(fields, label, ',');
        std::getline(fields, m_stat, ',');
        const double m = std::stod(m_stat);
        CHECK(m <= last_m);
        last_m = m;
        if (line.back() == '1') in_mss_labels.push_back(label);
    }
    CHECK(rows == 8);

    const auto est = run_cli("estimate" + common);
    const json report = json::parse(est.output);
    std::vector<std::string> selected = report["selected_labels"];
    std::sort(selected.begin(), selected.end());
    std::sort(in_mss_labels.begin(), in_mss_labels.end());
    if (report["adjusted"] == false) CHECK(selected == in_mss_labels);
}

TEST_CASE("simulate consumes a grid and is reproducible") {
    fs::create_directories(kTmp);
    const fs::path grid = kTmp / "grid.jsonl";
    {
        std::ofstream out(grid);
        out << R"({"K":1,"N":2,"T":60,"reps":25,"B":120,"seed":3})" << "\n";
        out << R"({"K":2,"N":1,"T":60,"reps":25,"B":120,"seed":3})" << "\n";
    }

    const auto first = run_cli("simulate --grid " + grid.string() + " --threads 2");
    REQUIRE(first.exit_code == 0);

    std::istringstream lines(first.output);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 1 + 2 * 2);  // header + 2 experiments x 2 estimators

    const auto second = run_cli("simulate --grid " + grid.string() + " --threads 1");
    CHECK(first.output == second.output);

    SUBCASE("zero replications is a usage error") {
        const auto bad = run_cli("simulate --K 1 --N 2 --T 60 --reps 0");
        CHECK(bad.exit_code == 2);
    }
    SUBCASE("grid and inline flags are mutually exclusive") {
        const auto bad = run_cli("simulate --grid " + grid.string() + " --K 2");
        CHECK(bad.exit_code == 2);
    }
}

TEST_CASE("percent units rescale on ingest without changing the selection") {
    const auto decimal_panel = mss::load_panel_file(panel_csv().string());
    Eigen::MatrixXd percent_values = decimal_panel.values() * 100.0;
    const mss::ReturnPanel percent_panel(percent_values, decimal_panel.asset_labels(),
                                         decimal_panel.period_labels());
    const fs::path percent_csv = kTmp / "panel_percent.csv";
    mss::save_panel_file(percent_panel, percent_csv.string());

    const auto decimal_run =
        run_cli("estimate --input " + panel_csv().string() + " --boot 200 --seed 12");
    const auto percent_run = run_cli("estimate --input " + percent_csv.string() +
                                     " --units percent --boot 200 --seed 12");
    REQUIRE(decimal_run.exit_code == 0);
    REQUIRE(percent_run.exit_code == 0);

    const json a = json::parse(decimal_run.output);
    const json b = json::parse(percent_run.output);
    CHECK(a["selected_labels"] == b["selected_labels"]);
    CHECK(b["config"]["units"] == "percent");
}

TEST_CASE("bands recomputed from the dumped report reproduce the selection") {
    const auto result = run_cli("estimate --input " + panel_csv().string() +
                                " --boot 300 --seed 6 --threads 2");
    REQUIRE(result.exit_code == 0);
    const json report = json::parse(result.output);
    if (report["adjusted"] == true) return;

    std::vector<std::string> recomputed;
    for (const auto& row : report["per_asset"]) {
        const double alpha_abs = std::abs(row["alpha_hat"].get<double>());
        const double beta_abs = std::abs(row["beta_sum_hat"].get<double>() - 1.0);
        if (alpha_abs > row["alpha_bound"].get<double>() ||
            beta_abs > row["beta_bound"].get<double>())
            recomputed.push_back(row["label"]);
    }
    std::vector<std::string> selected = report["selected_labels"];
    std::sort(selected.begin(), selected.end());
    std::sort(recomputed.begin(), recomputed.end());
    CHECK(recomputed == selected);
}

TEST_CASE("draws dump has one row per bootstrap replication") {
    const fs::path dump = kTmp / "draws.csv";
    const auto result = run_cli("estimate --input " + panel_csv().string() +
                                " --boot 100 --seed 4 --dump-draws " + dump.string());
    REQUIRE(result.exit_code == 0);
    const auto text = read_file(dump);
    const auto rows = std::count(text.begin(), text.end(), '\n');
    CHECK(rows == 101);  // header + B
}
