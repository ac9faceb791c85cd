#include "asopt/config.hpp"

#include <fstream>

namespace asopt {

using nlohmann::json;

const json& default_config()
{
    static const json defaults = json::parse(R"({
  "seed": 1,
  "output": "asopt_out",
  "data": {
    "path": "",
    "schema": "wwtp",
    "level": "phylum",
    "feature_count": 0,
    "synthetic": {
      "kind": "none",
      "n": 200,
      "features": 37,
      "targets": 21,
      "noise": 0.05,
      "clusters": 3,
      "per_cluster": 50,
      "dim": 5,
      "separation": 10.0,
      "seed": 7
    }
  },
  "split": {
    "mode": "threefold",
    "lo": 0.8,
    "hi": 1.0
  },
  "model": {
    "kind": "both",
    "alpha": 0
  },
  "gd": {
    "num_epoch": 1500,
    "learn_rate": 0.01,
    "weight_decay": 0.01
  },
  "de": {
    "enabled": true,
    "pop_size": 20,
    "f0": 0.9,
    "cr": 0.4,
    "max_gen": 20
  },
  "cluster": {
    "algo": "dpng",
    "features": "all",
    "pca_on": "centroids",
    "pca_components": 2,
    "mi_bins": 10,
    "log_floor": 1e-6
  },
  "epmc": {
    "np": 15,
    "elitnum": 2,
    "iterations": 100,
    "clusters": 10,
    "runs": 25,
    "alpha": 0.8,
    "beta": 0.2,
    "radius": 2,
    "accept_scale": 0.0,
    "elite_pool": true,
    "max_evaluations": 0
  },
  "dpng": {
    "w_start": 0.9,
    "w_end": 0.4,
    "sigma0": 5.0,
    "d0": 5.0,
    "eta_step": 0.8,
    "s": 1.0,
    "lambda_mix": 0.5,
    "pc_min": 0.5,
    "pc_max": 0.8,
    "pm_min": 0.005,
    "pm_max": 0.05,
    "a": 9.903438,
    "p_elim": 0.05,
    "max_gen": 300,
    "mutation_scale": 0.1,
    "inertia": true,
    "antenna": true,
    "adaptive_ga": true,
    "elimination": true,
    "random_coefficients": true,
    "normalize_direction": false,
    "clamp_to_data": true
  },
  "gan": {
    "hidden_dim": 24,
    "num_layer": 3,
    "iterations": 100,
    "ae_epochs": 100,
    "sup_epochs": 100,
    "lambda": 1.0,
    "eta": 10.0,
    "batch_size": 128,
    "learn_rate": 0.001,
    "beta1": 0.5,
    "moment_weight": 100.0,
    "correlation_weight": 10.0,
    "disc_steps": 1,
    "disc_learn_rate": 0.0,
    "gen_learn_rate": 0.0003,
    "weight_average": 0.98,
    "noise_dim": 0
  },
  "generate": {
    "n": 1186,
    "denormalize": true
  },
  "augment": {
    "sizes": [0, 100, 948],
    "models": ["bpnn", "debp"],
    "seeds": [1, 2, 3]
  },
  "analyze": {
    "predicted": "",
    "observed": "",
    "matrix": "",
    "labels": "",
    "targets": "",
    "clusters": 0
  },
  "bench": {
    "criteria": []
  }
})");
    return defaults;
}

namespace {

std::string join_path(const std::string& prefix, const std::string& key)
{
    return prefix.empty() ? key : prefix + "." + key;
}

bool compatible(const json& def, const json& val)
{
    if (def.is_boolean()) {
        return val.is_boolean();
    }
    if (def.is_number_unsigned() || def.is_number_integer()) {
        return val.is_number_integer() || val.is_number_unsigned();
    }
    if (def.is_number()) {
        return val.is_number();
    }
    if (def.is_string()) {
        return val.is_string();
    }
    if (def.is_array()) {
        return val.is_array();
    }
    return val.type() == def.type();
}

void merge_into(json& base, const json& user, const std::string& prefix)
{
    if (!user.is_object()) {
        throw ConfigError("config: '" + (prefix.empty() ? std::string("<root>") : prefix) + "' must be an object");
    }
    for (const auto& [key, val] : user.items()) {
        const std::string path = join_path(prefix, key);
        auto it = base.find(key);
        if (it == base.end()) {
            throw ConfigError("config: unknown key '" + path + "'");
        }
        if (it->is_object()) {
            merge_into(*it, val, path);
            continue;
        }
        if (!compatible(*it, val)) {
            throw ConfigError("config: '" + path + "' expects " + std::string(it->type_name()) + ", got "
                              + val.type_name());
        }
        if ((it->is_number_integer() || it->is_number_unsigned()) && val.is_number_integer()
            && val.get<long long>() < 0 && it->is_number_unsigned()) {
            throw ConfigError("config: '" + path + "' must be >= 0");
        }
        *it = val;
    }
}

template <typename T>
T get(const json& section, const char* key)
{
    try {
        return section.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

std::size_t count(const json& section, const char* key)
{
    const json& v = section.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        throw ConfigError(std::string("config: '") + key + "' must be an integer");
    }
    if (v.get<long long>() < 0) {
        throw ConfigError(std::string("config: '") + key + "' must be >= 0");
    }
    return v.get<std::size_t>();
}

} // namespace

json merge_config(const json& base, const json& user)
{
    json out = base;
    merge_into(out, user, "");
    return out;
}

void apply_override(json& cfg, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    // build {"a": {"b": value}} from "a.b" and merge it
    json patch = value;
    std::size_t end = key.size();
    while (true) {
        const auto dot = key.rfind('.', end - 1);
        const std::size_t start = dot == std::string::npos ? 0 : dot + 1;
        const std::string part = key.substr(start, end - start);
        if (part.empty()) {
            throw ConfigError("--set: malformed key '" + key + "'");
        }
        patch = json{{part, patch}};
        if (dot == std::string::npos) {
            break;
        }
        end = dot;
    }
    merge_into(cfg, patch, "");
}

json load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides)
{
    json cfg = default_config();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot open config file " + path.string());
        }
        json user;
        try {
            user = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("config " + path.string() + ": " + e.what());
        }
        merge_into(cfg, user, "");
    }
    for (const auto& o : overrides) {
        apply_override(cfg, o);
    }
    return cfg;
}

DeConfig de_config(const json& s)
{
    DeConfig c;
    c.pop_size = count(s, "pop_size");
    c.f0 = get<double>(s, "f0");
    c.cr = get<double>(s, "cr");
    c.max_gen = get<bool>(s, "enabled") ? count(s, "max_gen") : 0;
    return c;
}

GdConfig gd_config(const json& s)
{
    GdConfig c;
    c.num_epoch = count(s, "num_epoch");
    c.learn_rate = get<double>(s, "learn_rate");
    c.weight_decay = get<double>(s, "weight_decay");
    c.validate();
    return c;
}

EpmcConfig epmc_config(const json& s)
{
    EpmcConfig c;
    c.np = count(s, "np");
    c.elitnum = count(s, "elitnum");
    c.iterations = count(s, "iterations");
    c.clusters = count(s, "clusters");
    c.runs = count(s, "runs");
    c.alpha = get<double>(s, "alpha");
    c.beta = get<double>(s, "beta");
    c.radius = count(s, "radius");
    c.accept_scale = get<double>(s, "accept_scale");
    c.elite_pool = get<bool>(s, "elite_pool");
    c.max_evaluations = count(s, "max_evaluations");
    c.validate();
    return c;
}

DpngConfig dpng_config(const json& e, const json& s)
{
    DpngConfig c;
    c.base = epmc_config(e);
    c.w_start = get<double>(s, "w_start");
    c.w_end = get<double>(s, "w_end");
    c.sigma0 = get<double>(s, "sigma0");
    c.d0 = get<double>(s, "d0");
    c.eta_step = get<double>(s, "eta_step");
    c.s = get<double>(s, "s");
    c.lambda_mix = get<double>(s, "lambda_mix");
    c.pc_min = get<double>(s, "pc_min");
    c.pc_max = get<double>(s, "pc_max");
    c.pm_min = get<double>(s, "pm_min");
    c.pm_max = get<double>(s, "pm_max");
    c.a = get<double>(s, "a");
    c.p_elim = get<double>(s, "p_elim");
    c.max_gen = count(s, "max_gen");
    c.mutation_scale = get<double>(s, "mutation_scale");
    c.inertia = get<bool>(s, "inertia");
    c.antenna = get<bool>(s, "antenna");
    c.adaptive_ga = get<bool>(s, "adaptive_ga");
    c.elimination = get<bool>(s, "elimination");
    c.random_coefficients = get<bool>(s, "random_coefficients");
    c.normalize_direction = get<bool>(s, "normalize_direction");
    c.clamp_to_data = get<bool>(s, "clamp_to_data");
    c.validate();
    return c;
}

GanConfig gan_config(const json& s)
{
    GanConfig c;
    c.hidden_dim = count(s, "hidden_dim");
    c.num_layer = count(s, "num_layer");
    c.iterations = count(s, "iterations");
    c.ae_epochs = count(s, "ae_epochs");
    c.sup_epochs = count(s, "sup_epochs");
    c.lambda = get<double>(s, "lambda");
    c.eta = get<double>(s, "eta");
    c.batch_size = count(s, "batch_size");
    c.learn_rate = get<double>(s, "learn_rate");
    c.beta1 = get<double>(s, "beta1");
    c.moment_weight = get<double>(s, "moment_weight");
    c.correlation_weight = get<double>(s, "correlation_weight");
    c.disc_steps = count(s, "disc_steps");
    c.disc_learn_rate = get<double>(s, "disc_learn_rate");
    c.gen_learn_rate = get<double>(s, "gen_learn_rate");
    c.weight_average = get<double>(s, "weight_average");
    c.noise_dim = count(s, "noise_dim");
    c.validate();
    return c;
}

} // namespace asopt
