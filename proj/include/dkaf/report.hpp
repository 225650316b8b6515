#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dkaf/config.hpp"
#include "dkaf/datasets.hpp"
#include "dkaf/harness.hpp"

namespace dkaf {

/// Sidecar path next to a CSV: same stem, ".json" extension.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

Json dictionary_to_json(const Dictionary& dict, bool full_entries);
Json network_to_json(const Topology& topo, const CombinationMatrices& matrices);

/// Metrics CSV `algorithm,round,mse,avg_dict_size` plus the JSON sidecar
/// holding the resolved config, derived seeds and the first run's dictionaries
/// (entry counts, and full entries when `dump_dictionaries`).
void write_metrics(const MetricsTrace& trace, const ExperimentConfig& config,
                   const std::filesystem::path& csv, bool dump_dictionaries = false);

struct MetricsRow {
    std::string algorithm;
    std::size_t round = 0;
    double mse = 0.0;
    double avg_dict_size = 0.0;
};
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& csv);

/// Sweep CSV `algorithm,node_count,mse_floor,avg_final_dict_size` plus sidecar.
void write_sweep(const std::vector<SweepPoint>& rows, const ExperimentConfig& config,
                 const std::filesystem::path& csv);

/// Sample CSV `node,round,x0..x{d-1},desired`.
void write_samples_csv(const StreamData& data, const std::filesystem::path& csv);

/// Writes `text` to `path` via a temporary file and rename.
void write_file_atomically(const std::filesystem::path& path, const std::string& text);

}  // namespace dkaf
