#include "puedet/checkpoint.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "puedet/errors.hpp"

namespace puedet {

namespace {

using Header = std::vector<std::pair<std::string, std::string>>;

void write_file(const std::filesystem::path& path, const ParamStore& store,
                const Header& header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
    }
    store.save(out, header);
    if (!out) {
        throw std::runtime_error("failed writing checkpoint: " + path.string());
    }
}

std::size_t header_size_t(const std::map<std::string, std::string>& header,
                          const std::string& key) {
    auto it = header.find(key);
    if (it == header.end()) {
        throw ValidationError("checkpoint: missing header field '" + key + "'");
    }
    try {
        return std::stoull(it->second);
    } catch (const std::exception&) {
        throw ValidationError("checkpoint: header field '" + key +
                              "' is not a number: " + it->second);
    }
}

struct ShapeSpec {
    std::string name;
    std::size_t rows, cols;
};

void check_store_layout(const ParamStore& store, const std::vector<ShapeSpec>& expected) {
    if (store.count() != expected.size()) {
        throw ValidationError("checkpoint: expected " + std::to_string(expected.size()) +
                              " parameters, found " + std::to_string(store.count()));
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const ShapeSpec& spec = expected[i];
        if (store.name_at(i) != spec.name) {
            throw ValidationError("checkpoint: parameter " + std::to_string(i) +
                                  " should be '" + spec.name + "', found '" +
                                  store.name_at(i) + "'");
        }
        const Matrix& m = store.value_at(i);
        if (m.rows() != spec.rows || m.cols() != spec.cols) {
            throw ValidationError("checkpoint: parameter '" + spec.name +
                                  "' has wrong shape");
        }
    }
}

std::vector<ShapeSpec> rnn_layout(std::size_t hidden, std::size_t input_len,
                                  std::size_t outputs) {
    return {{"W_hx", hidden, input_len},
            {"W_hh", hidden, hidden},
            {"W_yh", outputs, hidden},
            {"b_h", hidden, 1},
            {"b_y", outputs, 1}};
}

std::vector<ShapeSpec> lstm_layout(std::size_t hidden, std::size_t input_len,
                                   std::size_t outputs, std::size_t depth) {
    std::vector<ShapeSpec> layout;
    for (std::size_t l = 0; l < depth; ++l) {
        const std::string prefix = "L" + std::to_string(l) + ".";
        const std::size_t in_dim = l == 0 ? input_len : hidden;
        for (const char* gate : {"f", "i", "g", "o"}) {
            layout.push_back({prefix + "W_" + gate + "s", hidden, in_dim});
            layout.push_back({prefix + "W_" + gate + "h", hidden, hidden});
            layout.push_back({prefix + "b_" + gate, hidden, 1});
        }
    }
    layout.push_back({"W_yh", outputs, hidden});
    layout.push_back({"b_y", outputs, 1});
    return layout;
}

}  // namespace

void save_checkpoint(const RnnParams& params, const std::filesystem::path& path) {
    Header header = {{"arch", "rnn"},
                     {"hidden", std::to_string(params.hidden)},
                     {"input_len", std::to_string(params.input_len)},
                     {"label_bits", std::to_string(params.label_bits)}};
    write_file(path, params.store, header);
}

void save_checkpoint(const LstmStackParams& params, const std::filesystem::path& path) {
    Header header = {{"arch", "lstm"},
                     {"depth", std::to_string(params.depth)},
                     {"hidden", std::to_string(params.hidden)},
                     {"input_len", std::to_string(params.input_len)},
                     {"label_bits", std::to_string(params.label_bits)}};
    write_file(path, params.store, header);
}

LoadedModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open checkpoint: " + path.string());
    }
    Header header_list;
    ParamStore store = ParamStore::load(in, header_list);
    std::map<std::string, std::string> header(header_list.begin(), header_list.end());

    auto arch_it = header.find("arch");
    if (arch_it == header.end()) {
        throw ValidationError("checkpoint: missing header field 'arch'");
    }
    const std::size_t hidden = header_size_t(header, "hidden");
    const std::size_t input_len = header_size_t(header, "input_len");
    const std::size_t label_bits = header_size_t(header, "label_bits");
    if (label_bits == 0 || label_bits > 16) {
        throw ValidationError("checkpoint: label_bits must lie in [1,16]");
    }
    const std::size_t outputs = std::size_t(1) << label_bits;

    if (arch_it->second == "rnn") {
        check_store_layout(store, rnn_layout(hidden, input_len, outputs));
        RnnParams params;
        params.hidden = hidden;
        params.input_len = input_len;
        params.label_bits = label_bits;
        params.store = std::move(store);
        return params;
    }
    if (arch_it->second == "lstm") {
        const std::size_t depth = header_size_t(header, "depth");
        check_store_layout(store, lstm_layout(hidden, input_len, outputs, depth));
        LstmStackParams params;
        params.hidden = hidden;
        params.input_len = input_len;
        params.label_bits = label_bits;
        params.depth = depth;
        params.store = std::move(store);
        return params;
    }
    throw ValidationError("checkpoint: unknown arch '" + arch_it->second + "'");
}

std::string model_name(const LoadedModel& model) {
    if (std::holds_alternative<RnnParams>(model)) return "rnn";
    return "lstm" + std::to_string(std::get<LstmStackParams>(model).depth);
}

std::unique_ptr<Predictor> make_predictor(const LoadedModel& model) {
    if (const auto* rnn = std::get_if<RnnParams>(&model)) {
        return std::make_unique<RnnPredictor>(*rnn);
    }
    return std::make_unique<LstmPredictor>(std::get<LstmStackParams>(model));
}

}  // namespace puedet
