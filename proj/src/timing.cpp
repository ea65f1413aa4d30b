#include "macd/timing.hpp"

#include <chrono>
#include <cmath>

namespace macd {

TimingSummary time_decode(const LanguageModel& expert, const AmateurEnsemble* ensemble,
                          std::span<const TokenSequence> prompts, const DecodeConfig& config,
                          std::size_t repetitions) {
    if (repetitions < 1) {
        throw_error(ErrorCode::InvalidParameter, "timing requires at least one repetition");
    }
    if (prompts.empty()) {
        throw_error(ErrorCode::InvalidParameter, "timing requires at least one prompt");
    }
    if (config.max_new_tokens < 1) {
        throw_error(ErrorCode::InvalidParameter, "zero-length generation request");
    }

    using Clock = std::chrono::steady_clock;
    for (const auto& prompt : prompts) {
        run_decode(expert, ensemble, prompt, config);  // warm-up, unmeasured
    }

    std::vector<double> per_prompt_ms;
    per_prompt_ms.reserve(prompts.size() * repetitions);
    double amateur_ns_total = 0.0;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        for (const auto& prompt : prompts) {
            const auto start = Clock::now();
            const DecodeResult result = run_decode(expert, ensemble, prompt, config);
            const auto stop = Clock::now();
            per_prompt_ms.push_back(
                std::chrono::duration<double, std::milli>(stop - start).count());
            for (const auto& step : result.trace) {
                amateur_ns_total += static_cast<double>(step.amateur_eval_ns);
            }
        }
    }

    TimingSummary summary;
    summary.prompts = prompts.size();
    summary.repetitions = repetitions;
    double sum = 0.0;
    for (double ms : per_prompt_ms) sum += ms;
    const double n = static_cast<double>(per_prompt_ms.size());
    summary.mean_ms = sum / n;
    double sq = 0.0;
    for (double ms : per_prompt_ms) {
        const double d = ms - summary.mean_ms;
        sq += d * d;
    }
    summary.stddev_ms = std::sqrt(sq / n);
    summary.total_seconds = sum / 1000.0;
    summary.amateur_eval_ms = amateur_ns_total / 1e6 / n;
    return summary;
}

}  // namespace macd
