#pragma once

#include <span>
#include <vector>

#include "macd/decoder.hpp"

namespace macd {

struct TimingSummary {
    double mean_ms = 0.0;        // mean wall-clock ms per prompt per repetition
    double stddev_ms = 0.0;      // population stddev over (prompt, repetition) times
    double total_seconds = 0.0;  // everything measured, warm-up excluded
    double amateur_eval_ms = 0.0;  // mean amateur-evaluation ms per prompt
    std::size_t prompts = 0;
    std::size_t repetitions = 0;
};

/// Times the decode loop only: one unmeasured warm-up pass over all prompts,
/// then `repetitions` measured passes. Model loading and tokenization sit
/// outside the measured region.
TimingSummary time_decode(const LanguageModel& expert, const AmateurEnsemble* ensemble,
                          std::span<const TokenSequence> prompts, const DecodeConfig& config,
                          std::size_t repetitions);

}  // namespace macd
