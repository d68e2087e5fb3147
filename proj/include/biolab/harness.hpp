#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "biolab/attack.hpp"
#include "biolab/defense.hpp"
#include "biolab/synthesis.hpp"

namespace biolab::harness {

struct StorageFailure : std::runtime_error {
    explicit StorageFailure(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Header `call,score,best,accepted`; scores at 6 decimals; hidden/blocked
// observations become an empty field.
void export_trace_csv(const attack::AttackTrace& trace, const std::filesystem::path& path);

// Header `attack,policy,trials,successes,median_calls`.
void export_defense_csv(const defense::DefenseReport& report,
                        const std::filesystem::path& path);

// Flat key=value config, one pair per line, '#' comments, dotted keys for
// nesting. Unknown keys and out-of-range values are rejected at load.
struct ExperimentConfig {
    uint64_t seed = 1;
    match::MatchParams matcher;
    synth::SynthesisParams synthesis;
    attack::FpAttackConfig fp_attack;
    attack::FaceAttackConfig face_attack;
    int trials = 20;
    std::string output_dir = ".";
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

}  // namespace biolab::harness
