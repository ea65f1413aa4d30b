#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "macd/runner.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_override;
    std::string strategy_override;
    std::string ensemble_mode_override;
    std::string vote_rule_override;
    long long seed_override = -1;
    double alpha_override = -1.0;
    int k_override = -1;
    double delta_override = -1.0;
    int workers_override = -1;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "experiment config file")->required();
    cmd->add_option("--out", flags.out_override, "override output directory");
    cmd->add_option("--seed", flags.seed_override, "override decode seed");
    cmd->add_option("--strategy", flags.strategy_override,
                    "restrict the grid to one strategy");
    cmd->add_option("--alpha", flags.alpha_override, "override contrastive alpha");
    cmd->add_option("--k", flags.k_override, "override top-k (sampling and filter)");
    cmd->add_option("--delta", flags.delta_override, "override the margin delta");
    cmd->add_option("--vote-rule", flags.vote_rule_override,
                    "top_rank | top_rank:R | threshold:TAU");
    cmd->add_option("--ensemble-mode", flags.ensemble_mode_override,
                    "sequential | parallel");
    cmd->add_option("--workers", flags.workers_override, "declared worker count");
}

macd::ExperimentConfig resolve_config(const CommonFlags& flags) {
    macd::ExperimentConfig config = macd::load_config(flags.config_path);
    if (!flags.out_override.empty()) config.output_dir = flags.out_override;
    if (flags.seed_override >= 0) {
        config.seed = static_cast<std::uint64_t>(flags.seed_override);
    }
    if (!flags.strategy_override.empty()) config.strategies = {flags.strategy_override};
    if (flags.alpha_override >= 0.0) config.alpha = flags.alpha_override;
    if (flags.k_override >= 1) {
        config.top_k = flags.k_override;
        config.filter_k = flags.k_override;
    }
    if (flags.delta_override >= 0.0) config.delta = flags.delta_override;
    if (flags.workers_override >= 1) config.workers = flags.workers_override;
    if (!flags.ensemble_mode_override.empty()) {
        config.ensemble_mode = flags.ensemble_mode_override;
    }
    if (!flags.vote_rule_override.empty()) {
        const std::string& v = flags.vote_rule_override;
        const auto colon = v.find(':');
        const std::string head = v.substr(0, colon);
        if (head == "top_rank") {
            config.vote_rule = "top_rank";
            if (colon != std::string::npos) config.vote_r = std::stoi(v.substr(colon + 1));
        } else if (head == "threshold") {
            config.vote_rule = "threshold";
            if (colon != std::string::npos) config.vote_tau = std::stod(v.substr(colon + 1));
        } else {
            macd::throw_error(macd::ErrorCode::InvalidParameter,
                              "unknown vote rule: " + v);
        }
    }
    if (config.ensemble_mode != "sequential" && config.ensemble_mode != "parallel") {
        macd::throw_error(macd::ErrorCode::InvalidParameter,
                          "ensemble mode must be sequential or parallel");
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contrastive decoding over n-gram model zoos"};
    app.require_subcommand(1);

    CommonFlags train_flags, decode_flags, bench_flags, eval_flags, ablate_flags;
    std::string prompt_text, trace_path;

    CLI::App* train = app.add_subcommand("train", "train the expert and amateur models");
    add_common_flags(train, train_flags);

    CLI::App* dec = app.add_subcommand("decode", "generate a continuation for one prompt");
    add_common_flags(dec, decode_flags);
    dec->add_option("prompt", prompt_text, "prompt text")->required();
    dec->add_option("--trace", trace_path, "write the per-step trace JSON here");

    CLI::App* bench = app.add_subcommand("benchmark", "timing table and K-sweep");
    add_common_flags(bench, bench_flags);

    CLI::App* eval = app.add_subcommand("evaluate", "quality metrics per strategy and domain");
    add_common_flags(eval, eval_flags);

    CLI::App* ablate = app.add_subcommand("ablate", "K-sweep and penalty-variant table");
    add_common_flags(ablate, ablate_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            macd::run_train(resolve_config(train_flags));
        } else if (dec->parsed()) {
            const auto config = resolve_config(decode_flags);
            std::cout << macd::run_one_decode(
                             config, prompt_text,
                             decode_flags.strategy_override.empty()
                                 ? ""
                                 : decode_flags.strategy_override,
                             trace_path)
                      << "\n";
        } else if (bench->parsed()) {
            std::cout << macd::run_benchmark(resolve_config(bench_flags));
        } else if (eval->parsed()) {
            std::cout << macd::run_evaluate(resolve_config(eval_flags));
        } else if (ablate->parsed()) {
            std::cout << macd::run_ablate(resolve_config(ablate_flags));
        }
    } catch (const macd::Error& e) {
        std::cerr << "macd error: code=" << e.code_name() << " message=" << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "macd error: code=Internal message=" << e.what() << "\n";
        return 1;
    }
    return 0;
}
