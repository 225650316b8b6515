#include "dkaf/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dkaf/errors.hpp"

namespace dkaf {

namespace {

// Shortest text that parses back to the same double.
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    auto p = csv;
    p.replace_extension(".json");
    return p;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + path.string());
        out << text;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error("write failed for " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move output into place at " + path.string());
    }
}

Json dictionary_to_json(const Dictionary& dict, bool full_entries) {
    Json j{{"size", dict.size()}};
    if (dict.budget()) j["budget"] = *dict.budget();
    if (full_entries) {
        Json entries = Json::array();
        for (const auto& e : dict.entries()) {
            entries.push_back({{"center", e.center},
                               {"weight", e.weight},
                               {"significance", e.significance},
                               {"age_accum", e.age_accum}});
        }
        j["entries"] = std::move(entries);
    }
    return j;
}

Json network_to_json(const Topology& topo, const CombinationMatrices& matrices) {
    Json adjacency = Json::array();
    for (std::size_t q = 0; q < topo.node_count(); ++q) adjacency.push_back(topo.neighbors(q));
    Json j{{"node_count", topo.node_count()},
           {"neighbors", adjacency},
           {"A", matrix_to_json(matrices.A)},
           {"C", matrix_to_json(matrices.C)}};
    if (!topo.positions().empty()) {
        Json pos = Json::array();
        for (const auto& p : topo.positions()) pos.push_back({p.x, p.y});
        j["positions"] = std::move(pos);
    }
    return j;
}

void write_metrics(const MetricsTrace& trace, const ExperimentConfig& config,
                   const std::filesystem::path& csv, bool dump_dictionaries) {
    std::ostringstream out;
    out << "algorithm,round,mse,avg_dict_size\n";
    for (const auto& t : trace.algorithms) {
        const std::string name(to_string(t.algorithm));
        for (std::size_t r = 0; r < t.mse_per_round.size(); ++r) {
            out << name << ',' << (r + 1) << ',' << fmt(t.mse_per_round[r]) << ','
                << fmt(t.dict_size_per_round[r]) << '\n';
        }
    }

    Json summary = Json::array();
    Json dictionaries = Json::object();
    for (const auto& t : trace.algorithms) {
        const std::string name(to_string(t.algorithm));
        summary.push_back({{"algorithm", name},
                           {"node_count", t.node_count},
                           {"mse_floor", t.mse_floor},
                           {"avg_final_dict_size", t.avg_final_dict_size},
                           {"final_dict_sizes", t.final_dict_sizes},
                           {"max_dict_size", t.max_dict_size}});
        Json nodes = Json::array();
        for (const auto& d : t.first_run_dictionaries) nodes.push_back(dictionary_to_json(d, dump_dictionaries));
        dictionaries[name] = std::move(nodes);
    }
    const Json sidecar{{"config", to_json(config)},
                       {"derived", {{"sigma", trace.sigma}, {"run_seeds", trace.run_seeds}}},
                       {"summary", summary},
                       {"first_run_dictionaries", dictionaries}};

    write_file_atomically(csv, out.str());
    write_file_atomically(sidecar_path(csv), sidecar.dump(2) + "\n");
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& csv) {
    std::ifstream in(csv);
    if (!in) throw Error("cannot read " + csv.string());
    std::string line;
    std::getline(in, line);
    if (line != "algorithm,round,mse,avg_dict_size") {
        throw Error("unexpected metrics header in " + csv.string());
    }
    std::vector<MetricsRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        MetricsRow row;
        std::string round, mse, size;
        std::getline(fields, row.algorithm, ',');
        std::getline(fields, round, ',');
        std::getline(fields, mse, ',');
        std::getline(fields, size, ',');
        row.round = std::stoul(round);
        row.mse = std::stod(mse);
        row.avg_dict_size = std::stod(size);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep(const std::vector<SweepPoint>& rows, const ExperimentConfig& config,
                 const std::filesystem::path& csv) {
    std::ostringstream out;
    out << "algorithm,node_count,mse_floor,avg_final_dict_size\n";
    for (const auto& r : rows) {
        out << to_string(r.algorithm) << ',' << r.node_count << ',' << fmt(r.mse_floor) << ','
            << fmt(r.avg_final_dict_size) << '\n';
    }
    write_file_atomically(csv, out.str());
    write_file_atomically(sidecar_path(csv), Json{{"config", to_json(config)}}.dump(2) + "\n");
}

void write_samples_csv(const StreamData& data, const std::filesystem::path& csv) {
    std::ostringstream out;
    out << "node,round";
    for (std::size_t i = 0; i < data.dim(); ++i) out << ",x" << i;
    out << ",desired\n";
    for (std::size_t q = 0; q < data.node_count(); ++q) {
        for (std::size_t n = 0; n < data.rounds(); ++n) {
            const Sample& s = data.at(q, n);
            out << q << ',' << n;
            for (double v : s.input) out << ',' << fmt(v);
            out << ',' << fmt(s.desired) << '\n';
        }
    }
    write_file_atomically(csv, out.str());
}

}  // namespace dkaf
