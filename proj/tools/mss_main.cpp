#include "mss/errors.hpp"
#include "mss/panel.hpp"
#include "mss/report.hpp"
#include "mss/simulation.hpp"
#include "mss/variants.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct CommonOptions {
    std::vector<std::string> inputs;
    double level = 0.05;
    int block_len = 0;  // 0 -> bandwidth rule
    int boot = 1000;
    std::uint64_t seed = 42;
    std::string units = "decimal";
    std::string date_column = "date";
    std::string out;
    int threads = 0;
    std::string dump_draws;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--input", opt.inputs, "Input CSV file(s); several are aligned on their common periods")
        ->required();
    cmd->add_option("--level", opt.level, "Significance level p");
    cmd->add_option("--block-len", opt.block_len, "Moving-block length (0 = bandwidth rule)");
    cmd->add_option("--boot", opt.boot, "Bootstrap replications B");
    cmd->add_option("--seed", opt.seed, "Root seed");
    cmd->add_option("--units", opt.units, "Return units: decimal | percent");
    cmd->add_option("--date-column", opt.date_column, "Name of the CSV date column");
    cmd->add_option("--out", opt.out, "Output path (default: stdout)");
    cmd->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--dump-draws", opt.dump_draws, "Write the bootstrap draws matrix to this CSV");
}

void check_common(const CommonOptions& opt) {
    if (!(opt.level > 0.0 && opt.level < 1.0))
        throw mss::UsageError("--level must lie strictly between 0 and 1");
    if (opt.boot < 50) throw mss::UsageError("--boot must be at least 50");
    if (opt.units != "decimal" && opt.units != "percent")
        throw mss::UsageError("--units must be 'decimal' or 'percent'");
    if (opt.threads < 0) throw mss::UsageError("--threads must be >= 0");
    if (opt.block_len < 0) throw mss::UsageError("--block-len must be >= 0");
}

mss::ReturnPanel load_inputs(const CommonOptions& opt) {
    mss::CsvOptions csv;
    csv.date_column = opt.date_column;
    csv.scale = opt.units == "percent" ? 0.01 : 1.0;

    std::vector<mss::ReturnPanel> panels;
    panels.reserve(opt.inputs.size());
    for (const auto& path : opt.inputs) panels.push_back(mss::load_panel_file(path, csv));
    if (panels.size() == 1) return std::move(panels.front());
    return mss::align_common_sample(panels);
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mss::DataError("cannot open output file: " + path);
    out << text;
}

std::vector<int> labels_to_indices(const mss::ReturnPanel& panel,
                                   const std::vector<std::string>& labels) {
    std::vector<int> indices;
    indices.reserve(labels.size());
    for (const auto& label : labels) {
        try {
            indices.push_back(panel.column_of(label));
        } catch (const mss::DataError& e) {
            throw mss::UsageError(e.what());
        }
    }
    return indices;
}

mss::RunSettings make_settings(const std::string& command, const CommonOptions& opt,
                               const mss::VariantSpec& spec, int resolved_block_len) {
    mss::RunSettings settings;
    settings.command = command;
    settings.inputs = opt.inputs;
    settings.level = opt.level;
    settings.block_len = resolved_block_len;
    settings.B = opt.boot;
    settings.seed = opt.seed;
    settings.variant = spec.kind;
    settings.units = opt.units;
    settings.date_column = opt.date_column;
    return settings;
}

struct RunArtifacts {
    mss::MssEstimate estimate;
    std::vector<mss::ConfidenceBand> bands;
    mss::RunSettings settings;
    mss::ReturnPanel panel;
};

RunArtifacts run_pipeline(const std::string& command, const CommonOptions& opt,
                          mss::VariantSpec spec) {
    check_common(opt);
    mss::ReturnPanel panel = load_inputs(opt);
    const int block_len =
        opt.block_len > 0 ? opt.block_len : mss::default_block_len(panel.T());

    const auto plan = mss::make_statistic_plan(spec, panel.d());
    const auto block = mss::make_block_plan(panel.T(), block_len);
    const auto stats = mss::plan_statistics(panel, plan);
    const auto draws =
        mss::bootstrap_draws(panel, block, opt.boot, opt.seed, plan, opt.threads);
    auto estimate = mss::stepdown_core(stats, draws, opt.level,
                                       spec.kind == mss::VariantKind::Mss);
    auto bands = mss::variant_confidence_bands(estimate, panel.T(), spec.kind);

    if (!opt.dump_draws.empty())
        write_output(mss::draws_csv(draws, panel.asset_labels()), opt.dump_draws);

    RunArtifacts artifacts{std::move(estimate), std::move(bands),
                           make_settings(command, opt, spec, block_len), std::move(panel)};
    return artifacts;
}

int cmd_estimate(const CommonOptions& opt, const std::string& variant) {
    mss::VariantSpec spec;
    spec.kind = mss::variant_from_name(variant);
    if (spec.kind == mss::VariantKind::Nonredundant)
        throw mss::UsageError("use the 'spanning' command for the nonredundant variant");
    auto artifacts = run_pipeline("estimate", opt, spec);
    write_output(mss::estimate_report_json(artifacts.panel, artifacts.estimate,
                                           artifacts.bands, artifacts.settings),
                 opt.out);
    return 0;
}

int cmd_spanning(const CommonOptions& opt, const std::vector<std::string>& benchmark,
                 const std::vector<std::string>& additional) {
    if (benchmark.empty()) throw mss::UsageError("--benchmark must name at least one asset");
    if (additional.empty()) throw mss::UsageError("--additional must name at least one asset");
    check_common(opt);

    mss::ReturnPanel panel = load_inputs(opt);
    mss::VariantSpec spec;
    spec.kind = mss::VariantKind::Nonredundant;
    spec.benchmark = labels_to_indices(panel, benchmark);
    spec.additional = labels_to_indices(panel, additional);
    spec.validate(panel.d());

    const int block_len =
        opt.block_len > 0 ? opt.block_len : mss::default_block_len(panel.T());
    const auto plan = mss::make_statistic_plan(spec, panel.d());
    const auto block = mss::make_block_plan(panel.T(), block_len);
    const auto stats = mss::plan_statistics(panel, plan);
    const auto draws =
        mss::bootstrap_draws(panel, block, opt.boot, opt.seed, plan, opt.threads);
    const auto estimate = mss::stepdown_core(stats, draws, opt.level, false);
    const auto bands = mss::variant_confidence_bands(estimate, panel.T(), spec.kind);

    if (!opt.dump_draws.empty())
        write_output(mss::draws_csv(draws, panel.asset_labels()), opt.dump_draws);

    auto settings = make_settings("spanning", opt, spec, block_len);
    settings.benchmark_labels = benchmark;
    settings.additional_labels = additional;
    write_output(mss::spanning_report_json(panel, estimate, bands, settings), opt.out);
    return 0;
}

int cmd_diagnose(const CommonOptions& opt, const std::string& variant) {
    mss::VariantSpec spec;
    spec.kind = mss::variant_from_name(variant);
    if (spec.kind == mss::VariantKind::Nonredundant)
        throw mss::UsageError("use the 'spanning' command for the nonredundant variant");
    auto artifacts = run_pipeline("diagnose", opt, spec);
    write_output(mss::diagnostics_csv(artifacts.panel, artifacts.estimate, artifacts.bands),
                 opt.out);
    return 0;
}

struct SimulateOptions {
    std::string grid;
    std::string out;
    int threads = 0;
    mss::SimConfig single;
    bool inline_config = false;
};

int cmd_simulate(const SimulateOptions& opt) {
    std::vector<mss::SimConfig> grid;
    if (!opt.grid.empty() && opt.inline_config)
        throw mss::UsageError("give either --grid or inline experiment flags, not both");
    if (!opt.grid.empty()) {
        grid = mss::load_sim_grid_file(opt.grid);
    } else if (opt.inline_config) {
        opt.single.validate();
        grid.push_back(opt.single);
    } else {
        throw mss::UsageError("simulate needs --grid or inline experiment flags (--K, --N, ...)");
    }

    std::vector<mss::SimResult> results;
    results.reserve(grid.size());
    for (const auto& config : grid) results.push_back(mss::run_experiment(config, opt.threads));

    write_output(mss::simulate_csv(results), opt.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum spanning-set estimation for asset return panels"};
    app.require_subcommand(1);

    CommonOptions est_opt;
    std::string est_variant = "mss";
    auto* estimate = app.add_subcommand(
        "estimate", "Estimate the minimum spanning set of a returns panel");
    add_common_flags(estimate, est_opt);
    estimate->add_option("--variant", est_variant, "mss | tan | gmv | tan-plus");

    CommonOptions span_opt;
    std::vector<std::string> benchmark_labels;
    std::vector<std::string> additional_labels;
    auto* spanning = app.add_subcommand(
        "spanning", "Test an additional asset set against a benchmark set");
    add_common_flags(spanning, span_opt);
    spanning->add_option("--benchmark", benchmark_labels, "Benchmark asset labels")
        ->delimiter(',');
    spanning->add_option("--additional", additional_labels, "Additional asset labels")
        ->delimiter(',');

    CommonOptions diag_opt;
    std::string diag_variant = "mss";
    auto* diagnose = app.add_subcommand(
        "diagnose", "Emit per-asset statistics and confidence bands as CSV");
    add_common_flags(diagnose, diag_opt);
    diagnose->add_option("--variant", diag_variant, "mss | tan | gmv | tan-plus");

    SimulateOptions sim_opt;
    auto* simulate = app.add_subcommand(
        "simulate", "Run Monte Carlo experiments and report containment rates");
    simulate->add_option("--grid", sim_opt.grid, "Experiment grid file (one JSON object per line)");
    simulate->add_option("--out", sim_opt.out, "Output CSV path (default: stdout)");
    simulate->add_option("--threads", sim_opt.threads, "Worker threads (0 = all cores)");
    std::vector<CLI::Option*> inline_opts = {
        simulate->add_option("--K", sim_opt.single.benchmark_count, "Benchmark asset count"),
        simulate->add_option("--N", sim_opt.single.redundant_count, "Redundant asset count"),
        simulate->add_option("--T", sim_opt.single.T, "Sample length"),
        simulate->add_option("--reps", sim_opt.single.reps, "Monte Carlo replications"),
        simulate->add_option("--level", sim_opt.single.level, "Significance level p"),
        simulate->add_option("--boot", sim_opt.single.B, "Bootstrap replications B"),
        simulate->add_option("--seed", sim_opt.single.seed, "Root seed"),
        simulate->add_option("--burn-in", sim_opt.single.burn_in, "Burn-in periods"),
        simulate->add_option("--rho", sim_opt.single.rho, "Autoregression base"),
        simulate->add_option("--mu", sim_opt.single.mu_level, "Benchmark mean level"),
        simulate->add_option("--block-len", sim_opt.single.block_len, "Block length (0 = rule)"),
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cout << mss::error_json("usage", e.what());
        return 2;
    }

    try {
        if (estimate->parsed()) return cmd_estimate(est_opt, est_variant);
        if (spanning->parsed()) return cmd_spanning(span_opt, benchmark_labels, additional_labels);
        if (diagnose->parsed()) return cmd_diagnose(diag_opt, diag_variant);
        if (simulate->parsed()) {
            for (const auto* option : inline_opts)
                if (option->count() > 0) sim_opt.inline_config = true;
            return cmd_simulate(sim_opt);
        }
        throw mss::UsageError("no command given");
    } catch (const mss::UsageError& e) {
        std::cout << mss::error_json("usage", e.what());
        return 2;
    } catch (const mss::DataError& e) {
        std::cout << mss::error_json("data", e.what());
        return 3;
    } catch (const mss::NumericalError& e) {
        std::cout << mss::error_json("numerical", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::cout << mss::error_json("internal", e.what());
        return 4;
    }
}
