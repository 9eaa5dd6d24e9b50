#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "puedet/experiment.hpp"

namespace puedet {

// Parsed experiment configuration. The file is JSON with an explicit schema
// version; unknown fields are rejected and every violation is reported with
// its field path.
struct ExperimentConfig {
    OnOffModel model;
    SensingConfig sensing;
    AttackConfig attack;
    WindowConfig window;        // defaults: input_len 4, compare_len 2, stride 2
    bool has_detector = false;  // detector section is optional; --arch can supply it
    DetectorSpec detector;
    TrainOptions training;
    ExperimentSizes sizes;
    std::uint64_t seed = 1;
    std::size_t seeds = 3;
    std::string output_dir = "out";
    std::string digest;  // hash of the canonicalized content

    // Assembles the runnable setup; the detector section must be present
    // (or overridden by the caller beforehand).
    ExperimentSetup setup() const;
};

ExperimentConfig parse_config(const std::filesystem::path& path);

}  // namespace puedet
