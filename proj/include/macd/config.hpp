#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "macd/decoder.hpp"
#include "macd/ngram_model.hpp"

namespace macd {

struct ModelSpec {
    int order = 4;
    std::string smoothing = "additive";  // additive | kneser_ney
    double lambda = 0.01;                // additive pseudo-count
    double discount = 0.75;              // kneser_ney discount
    double temperature = 1.0;            // amateurs only
    std::string label;
    std::string bias_corpus;  // train on this file instead of the main corpus

    bool operator==(const ModelSpec&) const = default;

    SmoothingSpec smoothing_spec() const;
};

/// One experiment: corpus paths, the model zoo, the strategy grid, and
/// decode defaults. Parses from and serializes to a flat key = value file
/// with [section] headers.
struct ExperimentConfig {
    // [corpus]
    std::string train_path;
    std::string prompts_path;  // default domain's prompt file
    int min_count = 1;

    // [domain.<name>] sections; when empty the single domain "default" uses
    // prompts_path.
    std::map<std::string, std::string> domain_prompts;

    // [expert] and [amateur.<n>] sections
    ModelSpec expert;
    std::vector<ModelSpec> amateurs;

    // [decode]
    int prompt_len = 32;
    int max_new_tokens = 256;
    std::uint64_t seed = 1;
    std::vector<std::string> strategies = {"greedy"};
    double alpha = 0.1;
    std::optional<double> alpha_consensus;  // defaults to alpha
    int top_k = 50;
    double nucleus_p = 0.95;
    double typical_tau = 0.95;
    std::string filter = "topk";  // topk | delta | joint
    int filter_k = 50;
    double delta = 3.0;
    double cr_cap = 1.0;
    std::string vote_rule = "top_rank";  // top_rank | threshold
    int vote_r = 10;
    std::optional<double> vote_tau;  // required when vote_rule = threshold
    int beam = 5;
    std::string ensemble_mode = "sequential";  // sequential | parallel
    int workers = 1;
    int max_prompts = 0;  // 0 = use every prompt in the file
    int repetitions = 3;  // benchmark timing passes

    // [output]
    std::string output_dir = "out";

    bool operator==(const ExperimentConfig&) const = default;

    /// Prompt files per domain; falls back to {"default": prompts_path}.
    std::map<std::string, std::string> prompt_files() const;
    double effective_alpha_consensus() const { return alpha_consensus.value_or(alpha); }
};

/// Parses config text; throws InvalidParameter on malformed input or
/// out-of-range values. Does not touch the filesystem.
ExperimentConfig parse_config(const std::string& text);

/// Reads and parses a config file, then checks every referenced input file
/// exists.
ExperimentConfig load_config(const std::string& path);

/// Deterministic rendering; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// Builds the decode-time strategy for one named grid entry, applying the
/// config's filter, vote rule, seed, and (for contrastive kinds) beam width.
StrategySpec strategy_from_config(const ExperimentConfig& config, const std::string& name);

EvalMode eval_mode_from_config(const ExperimentConfig& config);

}  // namespace macd
