#include "mss/report.hpp"

#include "mss/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace mss {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json settings_json(const RunSettings& settings) {
    json j;
    j["command"] = settings.command;
    j["inputs"] = settings.inputs;
    j["level"] = settings.level;
    j["block_len"] = settings.block_len;
    j["B"] = settings.B;
    j["seed"] = settings.seed;
    j["variant"] = variant_name(settings.variant);
    j["units"] = settings.units;
    j["date_column"] = settings.date_column;
    if (!settings.benchmark_labels.empty()) j["benchmark"] = settings.benchmark_labels;
    if (!settings.additional_labels.empty()) j["additional"] = settings.additional_labels;
    return j;
}

json report_body(const ReturnPanel& panel, const MssEstimate& estimate,
                 const std::vector<ConfidenceBand>& bands, const RunSettings& settings) {
    const auto& labels = panel.asset_labels();
    auto label_of = [&](int asset) { return labels[static_cast<std::size_t>(asset)]; };

    json j;
    j["level"] = estimate.level;
    j["block_len"] = settings.block_len;
    j["B"] = settings.B;
    j["seed"] = settings.seed;
    j["variant"] = variant_name(settings.variant);
    j["final_cv"] = estimate.final_cv;
    j["adjusted"] = estimate.adjusted;

    json selected = json::array();
    for (int asset : estimate.selected) selected.push_back(label_of(asset));
    j["selected_labels"] = selected;

    json trace = json::array();
    for (const auto& step : estimate.trace) {
        json entry;
        entry["iteration"] = step.iteration;
        entry["cv"] = step.cv;
        json sel = json::array();
        for (int asset : step.selected) sel.push_back(label_of(asset));
        entry["selected_labels"] = sel;
        trace.push_back(entry);
    }
    j["trace"] = trace;

    json per_asset = json::array();
    for (std::size_t k = 0; k < estimate.stats.size(); ++k) {
        const auto& stat = estimate.stats[k];
        const auto& band = bands[k];
        json row;
        row["label"] = label_of(stat.asset_index);
        row["alpha_hat"] = stat.alpha_hat;
        row["beta_sum_hat"] = stat.beta_sum_hat;
        row["s1"] = stat.s1;
        row["s2"] = stat.s2;
        row["m_stat"] = stat.m_stat;
        row["alpha_bound"] = band.alpha_bound;
        row["beta_bound"] = band.beta_bound;
        row["exceed_source"] = exceed_source_name(band.exceed_source);
        per_asset.push_back(row);
    }
    j["per_asset"] = per_asset;
    j["config"] = settings_json(settings);
    return j;
}

std::vector<std::size_t> rank_order(const std::vector<SpanningStat>& stats) {
    std::vector<std::size_t> order(stats.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (stats[a].m_stat != stats[b].m_stat) return stats[a].m_stat > stats[b].m_stat;
        return stats[a].asset_index < stats[b].asset_index;
    });
    return order;
}

}  // namespace

const char* exceed_source_name(ExceedSource source) {
    switch (source) {
        case ExceedSource::None: return "none";
        case ExceedSource::Alpha: return "alpha";
        case ExceedSource::Beta: return "beta";
        case ExceedSource::Both: return "both";
    }
    return "none";
}

std::string estimate_report_json(const ReturnPanel& panel, const MssEstimate& estimate,
                                 const std::vector<ConfidenceBand>& bands,
                                 const RunSettings& settings) {
    return report_body(panel, estimate, bands, settings).dump(2) + "\n";
}

std::string spanning_report_json(const ReturnPanel& panel, const MssEstimate& estimate,
                                 const std::vector<ConfidenceBand>& bands,
                                 const RunSettings& settings) {
    json j = report_body(panel, estimate, bands, settings);
    j["benchmark_spans_additional"] = estimate.selected.empty();
    return j.dump(2) + "\n";
}

std::string diagnostics_csv(const ReturnPanel& panel, const MssEstimate& estimate,
                            const std::vector<ConfidenceBand>& bands) {
    const auto& labels = panel.asset_labels();
    const auto order = rank_order(estimate.stats);

    std::string out =
        "rank,label,m_stat,alpha_abs,alpha_bound,beta_abs,beta_bound,exceed_source,in_mss\n";
    int rank = 0;
    for (std::size_t k : order) {
        const auto& stat = estimate.stats[k];
        const auto& band = bands[k];
        ++rank;
        out += std::to_string(rank);
        out += ',';
        out += labels[static_cast<std::size_t>(stat.asset_index)];
        out += ',';
        out += fmt(stat.m_stat);
        out += ',';
        out += fmt(band.alpha_abs);
        out += ',';
        out += fmt(band.alpha_bound);
        out += ',';
        out += fmt(band.beta_abs);
        out += ',';
        out += fmt(band.beta_bound);
        out += ',';
        out += exceed_source_name(band.exceed_source);
        out += ',';
        out += band.in_mss ? "1" : "0";
        out += '\n';
    }
    return out;
}

std::string draws_csv(const BootstrapDraws& draws, const std::vector<std::string>& labels) {
    std::string out = "b";
    for (int asset : draws.assets) {
        out += ',';
        out += labels[static_cast<std::size_t>(asset)];
    }
    out += '\n';
    for (int b = 0; b < draws.B; ++b) {
        out += std::to_string(b + 1);
        for (int c = 0; c < draws.m_boot.cols(); ++c) {
            out += ',';
            out += fmt(draws.m_boot(b, c));
        }
        out += '\n';
    }
    return out;
}

std::string simulate_csv(const std::vector<SimResult>& results) {
    char buf[64];
    std::string out = "panel,T,estimator,p_contain,p_exact\n";
    for (const auto& result : results) {
        for (const char* name : {"proposed", "oracle"}) {
            const auto& outcome =
                std::string(name) == "proposed" ? result.proposed : result.oracle;
            std::snprintf(buf, sizeof(buf), "%s,%d,%s,%.6f,%.6f\n",
                          result.config.panel_id().c_str(), result.config.T, name,
                          outcome.p_contain, outcome.p_exact);
            out += buf;
        }
    }
    return out;
}

std::vector<SimConfig> load_sim_grid(std::istream& in) {
    std::vector<SimConfig> grid;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError("grid line " + std::to_string(line_no) + ": " + e.what());
        }
        SimConfig config;
        for (const auto& [key, value] : j.items()) {
            if (key == "K") config.benchmark_count = value.get<int>();
            else if (key == "N") config.redundant_count = value.get<int>();
            else if (key == "T") config.T = value.get<int>();
            else if (key == "rho") config.rho = value.get<double>();
            else if (key == "mu") config.mu_level = value.get<double>();
            else if (key == "reps") config.reps = value.get<int>();
            else if (key == "level") config.level = value.get<double>();
            else if (key == "B") config.B = value.get<int>();
            else if (key == "seed") config.seed = value.get<std::uint64_t>();
            else if (key == "burn_in") config.burn_in = value.get<int>();
            else if (key == "block_len") config.block_len = value.get<int>();
            else
                throw DataError("grid line " + std::to_string(line_no) + ": unknown key '" +
                                key + "'");
        }
        config.validate();
        grid.push_back(config);
    }
    if (grid.empty()) throw DataError("experiment grid is empty");
    return grid;
}

std::vector<SimConfig> load_sim_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open grid file: " + path);
    return load_sim_grid(in);
}

std::string error_json(const std::string& type, const std::string& message) {
    json j;
    j["error"]["type"] = type;
    j["error"]["message"] = message;
    return j.dump(2) + "\n";
}

}  // namespace mss
