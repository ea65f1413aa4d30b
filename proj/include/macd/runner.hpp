#pragma once

#include <string>
#include <vector>

#include "macd/config.hpp"
#include "macd/manifest.hpp"

namespace macd {

/// Trains the expert and every amateur from the config and writes the model
/// files plus manifest.json under output_dir. Re-running with identical
/// inputs reproduces identical bytes.
void run_train(const ExperimentConfig& config);

/// Decodes one prompt with the named strategy (or the grid's first entry)
/// and returns the detokenized continuation. trace_path, when non-empty,
/// receives the full per-step trace as JSON.
std::string run_one_decode(const ExperimentConfig& config, const std::string& prompt_text,
                           const std::string& strategy_override,
                           const std::string& trace_path);

/// Timing table over the strategy grid plus a K-sweep over replicated
/// amateurs in sequential and parallel mode. Returns the CSV text and writes
/// benchmark.csv under output_dir.
std::string run_benchmark(const ExperimentConfig& config);

/// Quality-metric aggregates per (strategy x domain). Writes report.csv,
/// report.json, and per-cell generation files under output_dir; returns the
/// CSV text. Timing columns stay blank here so outputs are byte-stable.
std::string run_evaluate(const ExperimentConfig& config);

/// K-sweep ablation rows (mean / consensus / no-penalty per K) plus greedy
/// and single-amateur contrast baselines. Writes ablate.csv; returns the
/// CSV text. Decoding is width-1 so the no-penalty row is exactly greedy.
std::string run_ablate(const ExperimentConfig& config);

/// First prompt_len tokens of each prompt document with at least prompt_len
/// tokens, truncated to max_prompts when set.
std::vector<TokenSequence> load_prompts(const std::string& path, const Vocabulary& vocab,
                                        int prompt_len, int max_prompts);

}  // namespace macd
