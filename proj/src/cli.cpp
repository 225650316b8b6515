#include "dkaf/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>

#include "dkaf/errors.hpp"
#include "dkaf/report.hpp"

#ifndef DKAF_DEFAULT_PRESET_DIR
#define DKAF_DEFAULT_PRESET_DIR "presets"
#endif

namespace dkaf::cli {

namespace fs = std::filesystem;

namespace {

struct RawOptions {
    std::string preset;
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    bool verbose = false;
    bool dump_network = false;
    bool dump_dictionaries = false;
    std::string sizes;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* app, RawOptions& o) {
    app->add_option("--preset", o.preset, "Shipped preset name or path to a preset JSON");
    app->add_option("--config", o.config, "Config JSON layered over the preset");
    app->add_option("--out", o.out, "Output directory");
    app->add_option("--seed", o.seed, "Master seed override");
    app->add_flag("--verbose", o.verbose, "Print the resolved config");
    app->add_option("overrides", o.overrides, "dotted.key=value overrides");
}

// Removes everything an invocation wrote unless disarmed.
class OutputGuard {
public:
    void track(const fs::path& p) {
        files_.push_back(p);
        files_.push_back(sidecar_path(p));
    }
    void track_single(const fs::path& p) { files_.push_back(p); }
    void commit() noexcept { files_.clear(); }
    ~OutputGuard() {
        std::error_code ec;
        for (const auto& f : files_) {
            if (fs::is_regular_file(f, ec)) fs::remove(f, ec);
        }
    }

private:
    std::vector<fs::path> files_;
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> sizes;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = text.substr(start, comma - start);
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || item.empty() || v < 1) {
            throw ConfigError("--sizes", "expected positive integers separated by commas, got '" + text + "'");
        }
        sizes.push_back(static_cast<std::size_t>(v));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return sizes;
}

}  // namespace

fs::path preset_directory() {
    if (const char* env = std::getenv("DKAF_PRESET_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return DKAF_DEFAULT_PRESET_DIR;
}

Json load_preset(const std::string& name_or_path) {
    fs::path p = name_or_path;
    if (p.extension() != ".json") {
        p = preset_directory() / (name_or_path + ".json");
        if (!fs::exists(p)) throw ConfigError("--preset", "unknown preset '" + name_or_path + "'");
    }
    return load_json_file(p);
}

CliInvocation parse_and_validate(const std::vector<std::string>& args) {
    CLI::App app{"Finite-dictionary diffusion kernel adaptive filtering experiments", "dkaf"};
    app.require_subcommand(1);

    RawOptions o;
    auto* run = app.add_subcommand("run", "Monte-Carlo run of one configuration");
    add_common(run, o);
    run->add_flag("--dump-network", o.dump_network, "Write network.json for the first run");
    run->add_flag("--dump-dictionaries", o.dump_dictionaries,
                  "Include full first-run dictionaries in the sidecar");

    auto* sweep = app.add_subcommand("sweep", "MSE floor and dictionary size versus network size");
    add_common(sweep, o);
    sweep->add_option("--sizes", o.sizes, "Comma-separated network sizes, e.g. 2,4,8,16");

    auto* datasets = app.add_subcommand("datasets", "Dataset utilities");
    datasets->require_subcommand(1);
    auto* gen = datasets->add_subcommand("gen", "Write the first run's samples as CSV");
    add_common(gen, o);

    auto* calibrate = app.add_subcommand("calibrate-budget",
                                         "Set the budget to the QDKLMS steady-state dictionary size");
    add_common(calibrate, o);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError("", e.what());
    }

    CliInvocation inv;
    if (run->parsed()) inv.subcommand = Subcommand::Run;
    else if (sweep->parsed()) inv.subcommand = Subcommand::Sweep;
    else if (gen->parsed()) inv.subcommand = Subcommand::DatasetsGen;
    else inv.subcommand = Subcommand::CalibrateBudget;

    Json tree = Json::object();
    if (!o.preset.empty()) {
        tree = load_preset(o.preset);
        inv.preset = o.preset;
    }
    if (!o.config.empty()) {
        const Json file = load_json_file(o.config);
        tree.merge_patch(file.contains("config") ? file.at("config") : file);
    }
    if (o.preset.empty() && o.config.empty()) {
        throw ConfigError("--preset", "either --preset or --config is required");
    }
    if (tree.contains("config")) {
        Json inner = tree.at("config");
        tree = std::move(inner);
    }
    for (const auto& ov : o.overrides) apply_override(tree, ov);
    if (o.seed) tree["seed"] = *o.seed;

    inv.config = config_from_json(tree);
    inv.resolved = to_json(inv.config);
    inv.out_dir = o.out;
    inv.verbose = o.verbose;
    inv.dump_network = o.dump_network;
    inv.dump_dictionaries = o.dump_dictionaries;
    inv.sizes = o.sizes.empty() ? inv.config.sweep_sizes : parse_sizes(o.sizes);

    if (inv.subcommand == Subcommand::Sweep) {
        if (inv.sizes.empty()) throw ConfigError("--sizes", "no network sizes given");
        for (std::size_t s : inv.sizes) {
            if (s < 1) throw ConfigError("--sizes", "every size must be at least 1");
        }
        inv.config.sweep_sizes = inv.sizes;
        inv.resolved = to_json(inv.config);
    }
    return inv;
}

int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
    if (inv.verbose) out << inv.resolved.dump(2) << '\n';

    OutputGuard guard;
    try {
        fs::create_directories(inv.out_dir);
        switch (inv.subcommand) {
            case Subcommand::Run: {
                const MetricsTrace trace = run_experiment(inv.config);
                const fs::path csv = inv.out_dir / "metrics.csv";
                guard.track(csv);
                write_metrics(trace, inv.config, csv, inv.dump_dictionaries);
                if (inv.dump_network && trace.first_run_topology) {
                    const fs::path net = inv.out_dir / "network.json";
                    guard.track_single(net);
                    write_file_atomically(
                        net, network_to_json(*trace.first_run_topology, *trace.first_run_matrices)
                                     .dump(2) + "\n");
                }
                for (const auto& t : trace.algorithms) {
                    out << to_string(t.algorithm) << ": mse_floor=" << t.mse_floor
                        << " avg_final_dict_size=" << t.avg_final_dict_size << '\n';
                }
                break;
            }
            case Subcommand::Sweep: {
                const auto rows = sweep_network_size(inv.config, inv.sizes);
                const fs::path csv = inv.out_dir / "sweep.csv";
                guard.track(csv);
                write_sweep(rows, inv.config, csv);
                out << "wrote " << rows.size() << " sweep rows to " << csv.string() << '\n';
                break;
            }
            case Subcommand::DatasetsGen: {
                StreamSpec spec = inv.config.stream;
                spec.seed = run_seed(inv.config, 0);
                const fs::path csv = inv.out_dir / "samples.csv";
                guard.track_single(csv);
                write_samples_csv(generate_stream(spec), csv);
                out << "wrote " << csv.string() << '\n';
                break;
            }
            case Subcommand::CalibrateBudget: {
                const BudgetCalibration cal = calibrate_budget(inv.config);
                Json preset = inv.resolved;
                preset["hyper"]["budget"] = cal.budget;
                const fs::path budget = inv.out_dir / "budget.json";
                const fs::path updated = inv.out_dir / (inv.config.name + ".json");
                guard.track_single(budget);
                guard.track_single(updated);
                write_file_atomically(
                    budget, Json{{"name", inv.config.name},
                                 {"budget", cal.budget},
                                 {"qdklms_avg_final_dict_size", cal.qdklms_avg_final_dict_size}}
                                    .dump(2) + "\n");
                write_file_atomically(updated, preset.dump(2) + "\n");
                out << "budget=" << cal.budget << '\n';
                break;
            }
        }
    } catch (const ConfigError& e) {
        err << "dkaf: error: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::exception& e) {
        err << "dkaf: error: " << e.what() << '\n';
        return kRuntimeError;
    }
    guard.commit();
    return kSuccess;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliInvocation inv;
    try {
        inv = parse_and_validate(args);
    } catch (const HelpRequested& h) {
        out << h.text;
        return kSuccess;
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "dkaf: error: " << msg << '\n';
        return kValidationError;
    } catch (const std::exception& e) {
        err << "dkaf: error: " << e.what() << '\n';
        return kValidationError;
    }
    return execute(inv, out, err);
}

}  // namespace dkaf::cli
