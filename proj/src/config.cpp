#include "puedet/config.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <stdexcept>

#include "puedet/errors.hpp"
#include "puedet/rng.hpp"

namespace puedet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ValidationError(path + ": " + message);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (ok.count(key) == 0) {
            fail(join(path, key), "unknown field");
        }
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(join(path, key), "required field is missing");
    }
    return *it;
}

const json* optional(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

std::size_t as_count(const json& v, const std::string& path) {
    if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
    return v.get<std::size_t>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

std::vector<double> as_number_list(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::vector<int> as_int_list(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of integers");
    std::vector<int> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string item_path = path + "[" + std::to_string(i) + "]";
        if (!v[i].is_number_integer()) fail(item_path, "expected an integer");
        out.push_back(v[i].get<int>());
    }
    return out;
}

HyperErlangParams parse_hyper_erlang(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    check_keys(obj, path, {"weights", "shapes", "scales"});
    HyperErlangParams params;
    params.weights = as_number_list(require(obj, path, "weights"), join(path, "weights"));
    params.shapes = as_int_list(require(obj, path, "shapes"), join(path, "shapes"));
    params.scales = as_number_list(require(obj, path, "scales"), join(path, "scales"));
    try {
        params.validate();
    } catch (const ValidationError& e) {
        fail(path, e.what());
    }
    return params;
}

}  // namespace

ExperimentSetup ExperimentConfig::setup() const {
    if (!has_detector) {
        throw ValidationError("detector: section is missing (supply it or pass --arch)");
    }
    ExperimentSetup s;
    s.model = model;
    s.sensing = sensing;
    s.attack = attack;
    s.detector = detector;
    s.window = window;
    s.training = training;
    s.sizes = sizes;
    s.config_digest = digest;
    return s;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path.string());
    }
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    if (!root.is_object()) {
        throw ValidationError(path.string() + ": top level must be an object");
    }

    check_keys(root, "",
               {"version", "model", "sensing", "attack", "window", "detector",
                "training", "seed", "seeds", "output_dir"});

    const json& version = require(root, "", "version");
    if (!version.is_number_integer() || version.get<int>() != 1) {
        fail("version", "unsupported config version (expected 1)");
    }

    ExperimentConfig config;

    const json& model = require(root, "", "model");
    if (!model.is_object()) fail("model", "expected an object");
    check_keys(model, "model", {"on", "off"});
    config.model.on = parse_hyper_erlang(require(model, "model", "on"), "model.on");
    config.model.off = parse_hyper_erlang(require(model, "model", "off"), "model.off");

    const json& sensing = require(root, "", "sensing");
    if (!sensing.is_object()) fail("sensing", "expected an object");
    check_keys(sensing, "sensing", {"t_ob", "t_re"});
    config.sensing.t_ob = as_number(require(sensing, "sensing", "t_ob"), "sensing.t_ob");
    config.sensing.t_re = as_number(require(sensing, "sensing", "t_re"), "sensing.t_re");
    try {
        config.sensing.validate();
    } catch (const ValidationError& e) {
        fail("sensing", e.what());
    }

    const json& attack = require(root, "", "attack");
    if (!attack.is_object()) fail("attack", "expected an object");
    check_keys(attack, "attack", {"impulse_probability"});
    config.attack.impulse_probability = as_number(
        require(attack, "attack", "impulse_probability"), "attack.impulse_probability");
    try {
        config.attack.validate();
    } catch (const ValidationError& e) {
        fail("attack", e.what());
    }

    if (const json* window = optional(root, "window")) {
        if (!window->is_object()) fail("window", "expected an object");
        check_keys(*window, "window", {"input_len", "compare_len", "stride"});
        if (const json* v = optional(*window, "input_len")) {
            config.window.input_len = as_count(*v, "window.input_len");
        }
        if (const json* v = optional(*window, "compare_len")) {
            config.window.compare_len = as_count(*v, "window.compare_len");
        }
        if (const json* v = optional(*window, "stride")) {
            config.window.stride = as_count(*v, "window.stride");
        } else {
            config.window.stride = config.window.compare_len;
        }
        try {
            config.window.validate();
        } catch (const ValidationError& e) {
            fail("window", e.what());
        }
    }

    if (const json* detector = optional(root, "detector")) {
        if (!detector->is_object()) fail("detector", "expected an object");
        check_keys(*detector, "detector", {"arch", "hidden"});
        std::size_t hidden = 32;
        if (const json* v = optional(*detector, "hidden")) {
            hidden = as_count(*v, "detector.hidden");
            if (hidden == 0) fail("detector.hidden", "must be >= 1");
        }
        const std::string arch =
            as_string(require(*detector, "detector", "arch"), "detector.arch");
        try {
            config.detector = DetectorSpec::from_name(arch, hidden);
        } catch (const ValidationError& e) {
            fail("detector.arch", e.what());
        }
        config.has_detector = true;
    }

    if (const json* training = optional(root, "training")) {
        if (!training->is_object()) fail("training", "expected an object");
        check_keys(*training, "training",
                   {"epochs", "bptt_len", "learning_rate", "grad_clip", "train_slots",
                    "eval_slots"});
        if (const json* v = optional(*training, "epochs")) {
            config.training.epochs = as_count(*v, "training.epochs");
            if (config.training.epochs == 0) fail("training.epochs", "must be >= 1");
        }
        if (const json* v = optional(*training, "bptt_len")) {
            config.training.bptt_len = as_count(*v, "training.bptt_len");
            if (config.training.bptt_len == 0) fail("training.bptt_len", "must be >= 1");
        }
        if (const json* v = optional(*training, "learning_rate")) {
            config.training.adam.learning_rate = as_number(*v, "training.learning_rate");
            if (!(config.training.adam.learning_rate > 0)) {
                fail("training.learning_rate", "must be > 0");
            }
        }
        if (const json* v = optional(*training, "grad_clip")) {
            config.training.grad_clip = as_number(*v, "training.grad_clip");
            if (!(config.training.grad_clip >= 0)) fail("training.grad_clip", "must be >= 0");
        }
        if (const json* v = optional(*training, "train_slots")) {
            config.sizes.train_slots = as_count(*v, "training.train_slots");
            if (config.sizes.train_slots == 0) fail("training.train_slots", "must be >= 1");
        }
        if (const json* v = optional(*training, "eval_slots")) {
            config.sizes.eval_slots = as_count(*v, "training.eval_slots");
            if (config.sizes.eval_slots == 0) fail("training.eval_slots", "must be >= 1");
        }
    }

    if (const json* v = optional(root, "seed")) {
        if (!v->is_number_unsigned()) fail("seed", "expected a non-negative integer");
        config.seed = v->get<std::uint64_t>();
    }
    if (const json* v = optional(root, "seeds")) {
        config.seeds = as_count(*v, "seeds");
        if (config.seeds == 0) fail("seeds", "must be >= 1");
    }
    if (const json* v = optional(root, "output_dir")) {
        config.output_dir = as_string(*v, "output_dir");
    }

    // Digest of the canonical dump, so formatting-only edits do not change it.
    char digest[17];
    std::snprintf(digest, sizeof(digest), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(root.dump())));
    config.digest = digest;
    return config;
}

}  // namespace puedet
