#include "dkaf/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string>

#include "dkaf/errors.hpp"

namespace dkaf {

namespace {

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const Json& obj, const std::string& prefix,
                    std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected an object");
    }
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(join(prefix, key), "unknown key");
    }
}

template <typename T>
void read(const Json& obj, const std::string& prefix, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        if constexpr (std::is_unsigned_v<T>) {
            if (!it->is_number_integer() || it->template get<long long>() < 0) {
                throw ConfigError(join(prefix, key), "expected a nonnegative integer");
            }
        }
        out = it->template get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError(join(prefix, key), std::string("wrong type: ") + e.what());
    }
}

template <typename T>
void read_optional(const Json& obj, const std::string& prefix, const char* key,
                   std::optional<T>& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (it->is_null()) {
        out.reset();
        return;
    }
    T v{};
    read(obj, prefix, key, v);
    out = v;
}

template <typename Parse>
void read_enum(const Json& obj, const std::string& prefix, const char* key, Parse parse,
               auto& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_string()) throw ConfigError(join(prefix, key), "expected a string");
    try {
        out = parse(it->template get<std::string>());
    } catch (const ConfigError& e) {
        throw ConfigError(join(prefix, key), e.what());
    }
}

}  // namespace

ExperimentConfig config_from_json(const Json& input) {
    const Json& doc = (input.is_object() && input.contains("config")) ? input.at("config") : input;
    reject_unknown(doc, "",
                   {"name", "seed", "monte_carlo_runs", "first_run", "floor_window", "algorithms",
                    "stream", "hyper", "kernel", "network", "sweep"});
    ExperimentConfig c;
    read(doc, "", "name", c.name);
    read(doc, "", "seed", c.seed);
    read(doc, "", "monte_carlo_runs", c.monte_carlo_runs);
    read(doc, "", "first_run", c.first_run);
    read(doc, "", "floor_window", c.floor_window);

    if (auto it = doc.find("algorithms"); it != doc.end()) {
        if (!it->is_array()) throw ConfigError("algorithms", "expected an array of names");
        c.algorithms.clear();
        for (const auto& a : *it) {
            if (!a.is_string()) throw ConfigError("algorithms", "expected an array of names");
            c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
        }
    }

    if (auto it = doc.find("stream"); it != doc.end()) {
        const Json& s = *it;
        reject_unknown(s, "stream",
                       {"task", "node_count", "rounds", "noise_std", "source", "jitter", "channel"});
        read_enum(s, "stream", "task", parse_task, c.stream.task);
        read(s, "stream", "node_count", c.stream.node_count);
        read(s, "stream", "rounds", c.stream.rounds);
        read(s, "stream", "noise_std", c.stream.noise_std);
        read_enum(s, "stream", "source", parse_source_model, c.stream.source);
        read_optional(s, "stream", "jitter", c.stream.jitter);
        if (auto ch = s.find("channel"); ch != s.end()) {
            reject_unknown(*ch, "stream.channel", {"taps", "delay", "drift_period", "nonlinearity"});
            read(*ch, "stream.channel", "taps", c.stream.channel.taps);
            read(*ch, "stream.channel", "delay", c.stream.channel.delay);
            read(*ch, "stream.channel", "drift_period", c.stream.channel.drift_period);
            read(*ch, "stream.channel", "nonlinearity", c.stream.channel.nonlinearity);
        }
    }

    if (auto it = doc.find("hyper"); it != doc.end()) {
        reject_unknown(*it, "hyper", {"eta", "epsilon", "zeta", "budget"});
        read(*it, "hyper", "eta", c.hyper.eta);
        read(*it, "hyper", "epsilon", c.hyper.epsilon);
        read(*it, "hyper", "zeta", c.hyper.zeta);
        read_optional(*it, "hyper", "budget", c.hyper.budget);
    }

    if (auto it = doc.find("kernel"); it != doc.end()) {
        reject_unknown(*it, "kernel", {"sigma", "pilot_samples"});
        read_optional(*it, "kernel", "sigma", c.kernel.sigma);
        read(*it, "kernel", "pilot_samples", c.kernel.pilot_samples);
    }

    if (auto it = doc.find("network"); it != doc.end()) {
        reject_unknown(*it, "network", {"topology", "radius", "rule_a", "rule_c"});
        read_enum(*it, "network", "topology", parse_topology_kind, c.network.topology);
        read(*it, "network", "radius", c.network.radius);
        read_enum(*it, "network", "rule_a", parse_combination_rule, c.network.rule_a);
        read_enum(*it, "network", "rule_c", parse_combination_rule, c.network.rule_c);
    }

    if (auto it = doc.find("sweep"); it != doc.end()) {
        reject_unknown(*it, "sweep", {"sizes"});
        read(*it, "sweep", "sizes", c.sweep_sizes);
    }

    validate(c);
    return c;
}

Json to_json(const ExperimentConfig& c) {
    Json algorithms = Json::array();
    for (Algorithm a : c.algorithms) algorithms.push_back(std::string(to_string(a)));
    const auto opt = [](const auto& o) -> Json { return o ? Json(*o) : Json(nullptr); };
    return Json{
        {"name", c.name},
        {"seed", c.seed},
        {"monte_carlo_runs", c.monte_carlo_runs},
        {"first_run", c.first_run},
        {"floor_window", c.floor_window},
        {"algorithms", algorithms},
        {"stream",
         {{"task", std::string(to_string(c.stream.task))},
          {"node_count", c.stream.node_count},
          {"rounds", c.stream.rounds},
          {"noise_std", c.stream.noise_std},
          {"source", std::string(to_string(c.stream.source))},
          {"jitter", opt(c.stream.jitter)},
          {"channel",
           {{"taps", c.stream.channel.taps},
            {"delay", c.stream.channel.delay},
            {"drift_period", c.stream.channel.drift_period},
            {"nonlinearity", c.stream.channel.nonlinearity}}}}},
        {"hyper",
         {{"eta", c.hyper.eta},
          {"epsilon", c.hyper.epsilon},
          {"zeta", c.hyper.zeta},
          {"budget", opt(c.hyper.budget)}}},
        {"kernel", {{"sigma", opt(c.kernel.sigma)}, {"pilot_samples", c.kernel.pilot_samples}}},
        {"network",
         {{"topology", std::string(to_string(c.network.topology))},
          {"radius", c.network.radius},
          {"rule_a", std::string(to_string(c.network.rule_a))},
          {"rule_c", std::string(to_string(c.network.rule_c))}}},
        {"sweep", {{"sizes", c.sweep_sizes}}},
    };
}

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string(), "cannot open config file");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
    }
}

void apply_override(Json& tree, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError(std::string(assignment), "override must look like key=value");
    }
    const std::string key(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));

    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    Json* node = &tree;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        if (part.empty()) throw ConfigError(key, "empty path component");
        if (!node->is_object()) throw ConfigError(key, "parent is not an object");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = Json::object();
        start = dot + 1;
    }
}

}  // namespace dkaf
