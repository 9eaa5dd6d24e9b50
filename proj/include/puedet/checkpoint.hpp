#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <variant>

#include "puedet/detector.hpp"
#include "puedet/lstm.hpp"
#include "puedet/rnn.hpp"

namespace puedet {

// Detector checkpoints reuse the ParamStore text format; the header carries
// the architecture and its dimensions so the network can be rebuilt.
void save_checkpoint(const RnnParams& params, const std::filesystem::path& path);
void save_checkpoint(const LstmStackParams& params, const std::filesystem::path& path);

using LoadedModel = std::variant<RnnParams, LstmStackParams>;

LoadedModel load_checkpoint(const std::filesystem::path& path);

// Short architecture tag: "rnn", "lstm1", "lstm3", ...
std::string model_name(const LoadedModel& model);

// The returned predictor references the model; keep it alive while scoring.
std::unique_ptr<Predictor> make_predictor(const LoadedModel& model);

}  // namespace puedet
