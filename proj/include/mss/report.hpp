#pragma once

#include "mss/simulation.hpp"
#include "mss/stepdown.hpp"
#include "mss/variants.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mss {

/// Effective settings embedded in every report so a run can be replayed
/// exactly. Worker counts are execution detail and deliberately absent:
/// output bytes must not depend on them.
struct RunSettings {
    std::string command = "estimate";
    std::vector<std::string> inputs;
    double level = 0.05;
    int block_len = 0;  // resolved value actually used
    int B = 1000;
    std::uint64_t seed = 42;
    VariantKind variant = VariantKind::Mss;
    std::string units = "decimal";
    std::string date_column = "date";
    std::vector<std::string> benchmark_labels;
    std::vector<std::string> additional_labels;
};

const char* exceed_source_name(ExceedSource source);

std::string estimate_report_json(const ReturnPanel& panel, const MssEstimate& estimate,
                                 const std::vector<ConfidenceBand>& bands,
                                 const RunSettings& settings);

/// Estimate report plus the derived spanning verdict (empty nonredundant set).
std::string spanning_report_json(const ReturnPanel& panel, const MssEstimate& estimate,
                                 const std::vector<ConfidenceBand>& bands,
                                 const RunSettings& settings);

/// Per-asset rows ordered by descending statistic:
/// rank,label,m_stat,alpha_abs,alpha_bound,beta_abs,beta_bound,exceed_source,in_mss
std::string diagnostics_csv(const ReturnPanel& panel, const MssEstimate& estimate,
                            const std::vector<ConfidenceBand>& bands);

/// Audit dump of the B x candidates draws matrix.
std::string draws_csv(const BootstrapDraws& draws, const std::vector<std::string>& labels);

/// One row per (experiment, estimator): panel,T,estimator,p_contain,p_exact
std::string simulate_csv(const std::vector<SimResult>& results);

/// Experiment grid: one JSON object per line.
std::vector<SimConfig> load_sim_grid(std::istream& in);
std::vector<SimConfig> load_sim_grid_file(const std::string& path);

/// Machine-readable error object for the CLI.
std::string error_json(const std::string& type, const std::string& message);

}  // namespace mss
