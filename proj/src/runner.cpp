#include "macd/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "macd/metrics.hpp"
#include "macd/timing.hpp"

namespace macd {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_error(ErrorCode::IoError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_error(ErrorCode::IoError, "cannot read " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw_error(ErrorCode::IoError, "cannot write " + path.string());
    out << content;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::vector<TokenSequence> tokenize_docs(const std::vector<std::string>& lines,
                                         const Vocabulary& vocab) {
    std::vector<TokenSequence> docs;
    docs.reserve(lines.size());
    for (const auto& line : lines) {
        TokenSequence toks = tokenize(line, vocab);
        if (!toks.empty()) docs.push_back(std::move(toks));
    }
    return docs;
}

DecodeConfig make_decode_config(const ExperimentConfig& c, StrategySpec spec, TokenId eos) {
    DecodeConfig dc;
    dc.strategy = std::move(spec);
    dc.max_new_tokens = c.max_new_tokens;
    dc.eos = eos;
    dc.ensemble_mode = eval_mode_from_config(c);
    return dc;
}

struct MetricAgg {
    double diversity = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0, repetition = 0.0, nll = 0.0;
    std::size_t count = 0;

    void add(const MetricsReport& r) {
        diversity += r.diversity;
        d2 += r.distinct2;
        d3 += r.distinct3;
        d4 += r.distinct4;
        repetition += r.repetition;
        nll += r.nll;
        ++count;
    }
    MetricsReport mean() const {
        MetricsReport r;
        const double n = count == 0 ? 1.0 : static_cast<double>(count);
        r.diversity = diversity / n;
        r.distinct2 = d2 / n;
        r.distinct3 = d3 / n;
        r.distinct4 = d4 / n;
        r.repetition = repetition / n;
        r.nll = nll / n;
        return r;
    }
};

/// Decodes every prompt under one strategy and aggregates quality metrics.
/// Stochastic strategies get a distinct derived seed per prompt.
MetricAgg evaluate_cell(const LanguageModel& expert, const AmateurEnsemble* ensemble,
                        const std::vector<TokenSequence>& prompts,
                        const ExperimentConfig& config, StrategySpec spec, TokenId eos,
                        std::vector<std::string>* generations, const Vocabulary* vocab) {
    MetricAgg agg;
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        spec.seed = config.seed + i;
        const DecodeConfig dc = make_decode_config(config, spec, eos);
        const DecodeResult res = run_decode(expert, ensemble, prompts[i], dc);
        agg.add(compute_metrics(expert, prompts[i], res.generated));
        if (generations != nullptr && vocab != nullptr) {
            generations->push_back(detokenize(res.generated, *vocab));
        }
    }
    return agg;
}

}  // namespace

std::vector<TokenSequence> load_prompts(const std::string& path, const Vocabulary& vocab,
                                        int prompt_len, int max_prompts) {
    const auto lines = read_lines(path);
    std::vector<TokenSequence> prompts;
    for (const auto& line : lines) {
        TokenSequence toks = tokenize(line, vocab);
        if (static_cast<int>(toks.size()) < prompt_len) continue;
        toks.resize(static_cast<std::size_t>(prompt_len));
        prompts.push_back(std::move(toks));
        if (max_prompts > 0 && prompts.size() == static_cast<std::size_t>(max_prompts)) break;
    }
    return prompts;
}

void run_train(const ExperimentConfig& config) {
    const std::string text = read_file(config.train_path);
    auto vocab = std::make_shared<Vocabulary>(
        build_vocab(text, static_cast<std::uint64_t>(config.min_count)));

    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) lines.push_back(line);
    }
    const std::vector<TokenSequence> docs = tokenize_docs(lines, *vocab);

    fs::create_directories(config.output_dir);
    const fs::path dir = config.output_dir;

    const NGramModel expert =
        train_ngram(vocab, docs, config.expert.order, config.expert.smoothing_spec());
    expert.save(dir / "expert.ngram");

    ZooManifest manifest;
    manifest.expert_path = "expert.ngram";
    for (std::size_t i = 0; i < config.amateurs.size(); ++i) {
        const ModelSpec& spec = config.amateurs[i];
        std::vector<TokenSequence> member_docs;
        const std::vector<TokenSequence>* train_docs = &docs;
        if (!spec.bias_corpus.empty()) {
            member_docs = tokenize_docs(read_lines(spec.bias_corpus), *vocab);
            train_docs = &member_docs;
        }
        const NGramModel model =
            train_ngram(vocab, *train_docs, spec.order, spec.smoothing_spec());
        const std::string name = "amateur_" + std::to_string(i + 1) + ".ngram";
        model.save(dir / name);
        const std::string label =
            spec.label.empty() ? "order" + std::to_string(spec.order) : spec.label;
        manifest.members.push_back(ZooManifest::Member{name, spec.temperature, label});
    }
    save_manifest(manifest, dir / "manifest.json");
}

std::string run_one_decode(const ExperimentConfig& config, const std::string& prompt_text,
                           const std::string& strategy_override,
                           const std::string& trace_path) {
    auto [expert, ensemble] = load_zoo(fs::path(config.output_dir) / "manifest.json");
    const Vocabulary& vocab = expert->vocab();
    const TokenSequence prompt = tokenize(prompt_text, vocab);
    if (prompt.empty()) {
        throw_error(ErrorCode::InvalidParameter, "prompt text contains no tokens");
    }

    const std::string name =
        strategy_override.empty() ? config.strategies.front() : strategy_override;
    StrategySpec spec = strategy_from_config(config, name);
    spec.seed = config.seed;
    const DecodeConfig dc = make_decode_config(config, spec, vocab.eos());
    const DecodeResult res = run_decode(*expert, ensemble.get(), prompt, dc);

    if (!trace_path.empty()) {
        nlohmann::ordered_json doc;
        doc["schema"] = "macd-trace-v1";
        doc["strategy"] = name;
        doc["prompt"] = prompt;
        doc["generated"] = res.generated;
        doc["steps"] = nlohmann::ordered_json::array();
        for (const auto& step : res.trace) {
            nlohmann::ordered_json s;
            s["position"] = step.position;
            s["chosen"] = step.chosen;
            s["step_ns"] = step.step_ns;
            s["amateur_eval_ns"] = step.amateur_eval_ns;
            s["candidates"] = nlohmann::ordered_json::array();
            for (std::size_t j = 0; j < step.candidate_ids.size(); ++j) {
                s["candidates"].push_back({{"id", step.candidate_ids[j]},
                                           {"expert_logp", step.expert_logp[j]},
                                           {"penalty", step.penalty[j]},
                                           {"score", step.score[j]}});
            }
            doc["steps"].push_back(std::move(s));
        }
        write_file(trace_path, doc.dump(2) + "\n");
    }
    return detokenize(res.generated, vocab);
}

std::string run_benchmark(const ExperimentConfig& config) {
    auto [expert, ensemble] = load_zoo(fs::path(config.output_dir) / "manifest.json");
    const Vocabulary& vocab = expert->vocab();
    const auto prompt_files = config.prompt_files();
    const std::vector<TokenSequence> prompts = load_prompts(
        prompt_files.begin()->second, vocab, config.prompt_len, config.max_prompts);
    if (prompts.size() < 10) {
        throw_error(ErrorCode::InvalidParameter, "benchmark requires at least 10 prompts");
    }
    const auto reps = static_cast<std::size_t>(config.repetitions);

    std::ostringstream csv;
    csv << "method,prompts,repetitions,mean_ms,stddev_ms,total_seconds,amateur_eval_ms,"
           "rel_speed\n";
    auto emit = [&](const std::string& method, const TimingSummary& t, double greedy_ms) {
        csv << method << ',' << t.prompts << ',' << t.repetitions << ',' << fixed3(t.mean_ms)
            << ',' << fixed3(t.stddev_ms) << ',' << fixed3(t.total_seconds) << ','
            << fixed3(t.amateur_eval_ms) << ',' << fixed3(t.mean_ms / greedy_ms) << '\n';
    };

    const DecodeConfig greedy_dc =
        make_decode_config(config, greedy_strategy(), vocab.eos());
    const TimingSummary greedy_t =
        time_decode(*expert, ensemble.get(), prompts, greedy_dc, reps);
    emit("greedy", greedy_t, greedy_t.mean_ms);

    for (const auto& name : config.strategies) {
        if (name == "greedy") continue;
        StrategySpec spec = strategy_from_config(config, name);
        spec.seed = config.seed;
        const DecodeConfig dc = make_decode_config(config, spec, vocab.eos());
        emit(name, time_decode(*expert, ensemble.get(), prompts, dc, reps),
             greedy_t.mean_ms);
    }

    // K-sweep on replicated copies of amateur 0: identical members isolate
    // the ensemble-size term of the per-step cost.
    if (ensemble) {
        for (const EvalMode mode : {EvalMode::Sequential, EvalMode::Parallel}) {
            for (int k = 1; k <= 4; ++k) {
                std::vector<EnsembleMember> members(static_cast<std::size_t>(k),
                                                    ensemble->member(0));
                const AmateurEnsemble ens_k{std::move(members)};
                StrategySpec spec =
                    strategy_from_config(config, "macd_mean");
                spec.seed = config.seed;
                spec.beam_width = 1;  // sweep rows measure the plain decode loop
                DecodeConfig dc = make_decode_config(config, spec, vocab.eos());
                dc.ensemble_mode = mode;
                const std::string method =
                    "macd_mean_k" + std::to_string(k) +
                    (mode == EvalMode::Sequential ? "_sequential" : "_parallel");
                emit(method, time_decode(*expert, &ens_k, prompts, dc, reps),
                     greedy_t.mean_ms);
            }
        }
    }

    fs::create_directories(config.output_dir);
    write_file(fs::path(config.output_dir) / "benchmark.csv", csv.str());
    return csv.str();
}

std::string run_evaluate(const ExperimentConfig& config) {
    auto [expert, ensemble] = load_zoo(fs::path(config.output_dir) / "manifest.json");
    const Vocabulary& vocab = expert->vocab();

    // Validate every domain up front; a bad prompt file must not leave a
    // partial report behind.
    std::map<std::string, std::vector<TokenSequence>> domain_prompts;
    for (const auto& [domain, path] : config.prompt_files()) {
        std::vector<TokenSequence> all = load_prompts(path, vocab, config.prompt_len, 0);
        if (all.size() < 50) {
            throw_error(ErrorCode::InvalidParameter,
                        "evaluate requires >= 50 usable prompts per domain; " + domain +
                            " has " + std::to_string(all.size()));
        }
        if (config.max_prompts > 0 &&
            all.size() > static_cast<std::size_t>(config.max_prompts)) {
            all.resize(static_cast<std::size_t>(config.max_prompts));
        }
        domain_prompts[domain] = std::move(all);
    }

    fs::create_directories(config.output_dir);
    std::ostringstream csv;
    csv << "method,domain,mauve,diversity,distinct2,distinct3,distinct4,coherence,"
           "repetition,nll,ms_per_prompt,rel_speed\n";
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();

    for (const auto& [domain, prompts] : domain_prompts) {
        for (const auto& name : config.strategies) {
            StrategySpec spec = strategy_from_config(config, name);
            std::vector<std::string> generations;
            const MetricAgg agg = evaluate_cell(*expert, ensemble.get(), prompts, config,
                                                spec, vocab.eos(), &generations, &vocab);
            const MetricsReport m = agg.mean();
            // mauve, coherence, and the timing columns are intentionally
            // blank: the first two need external models, timing belongs to
            // the benchmark command.
            csv << name << ',' << domain << ",," << fixed6(m.diversity) << ','
                << fixed6(m.distinct2) << ',' << fixed6(m.distinct3) << ','
                << fixed6(m.distinct4) << ",," << fixed6(m.repetition) << ','
                << fixed6(m.nll) << ",,\n";
            rows.push_back({{"method", name},
                            {"domain", domain},
                            {"diversity", m.diversity},
                            {"distinct2", m.distinct2},
                            {"distinct3", m.distinct3},
                            {"distinct4", m.distinct4},
                            {"repetition", m.repetition},
                            {"nll", m.nll},
                            {"prompts", agg.count}});

            std::ostringstream gen;
            for (const auto& g : generations) gen << g << '\n';
            write_file(fs::path(config.output_dir) /
                           ("gen_" + domain + "_" + name + ".txt"),
                       gen.str());
        }
    }

    nlohmann::ordered_json doc;
    doc["schema"] = "macd-report-v1";
    doc["repetition_ngram"] = 4;
    doc["repetition_definition"] =
        "fraction of 4-gram positions repeating an earlier 4-gram";
    doc["diversity_definition"] = "product of distinct-n for n in 2..4";
    doc["rows"] = std::move(rows);
    write_file(fs::path(config.output_dir) / "report.csv", csv.str());
    write_file(fs::path(config.output_dir) / "report.json", doc.dump(2) + "\n");
    return csv.str();
}

std::string run_ablate(const ExperimentConfig& config) {
    auto [expert, ensemble] = load_zoo(fs::path(config.output_dir) / "manifest.json");
    if (!ensemble || ensemble->size() < 4) {
        throw_error(ErrorCode::InsufficientAmateurs,
                    "ablation needs at least 4 trained amateurs");
    }
    const Vocabulary& vocab = expert->vocab();
    const auto prompt_files = config.prompt_files();
    const std::vector<TokenSequence> prompts = load_prompts(
        prompt_files.begin()->second, vocab, config.prompt_len, config.max_prompts);
    if (prompts.empty()) {
        throw_error(ErrorCode::InvalidParameter, "ablation requires at least one prompt");
    }

    std::ostringstream csv;
    csv << "method,k,diversity,distinct2,distinct3,distinct4,repetition,nll\n";
    auto emit = [&](const std::string& method, int k, const MetricsReport& m) {
        csv << method << ',' << k << ',' << fixed6(m.diversity) << ',' << fixed6(m.distinct2)
            << ',' << fixed6(m.distinct3) << ',' << fixed6(m.distinct4) << ','
            << fixed6(m.repetition) << ',' << fixed6(m.nll) << '\n';
    };
    // Width is pinned to 1 here so the alpha=0 rows coincide with greedy
    // token-for-token.
    auto run_row = [&](const std::string& method, int k, StrategySpec spec,
                       const AmateurEnsemble* ens) {
        spec.beam_width = 1;
        const MetricAgg agg = evaluate_cell(*expert, ens, prompts, config, spec,
                                            vocab.eos(), nullptr, nullptr);
        emit(method, k, agg.mean());
    };

    run_row("greedy", 0, greedy_strategy(), ensemble.get());
    run_row("cd", 1, strategy_from_config(config, "cd"), ensemble.get());
    for (int k = 1; k <= 4; ++k) {
        std::vector<EnsembleMember> members(ensemble->members().begin(),
                                            ensemble->members().begin() + k);
        const AmateurEnsemble ens_k{std::move(members)};
        run_row("macd_mean_k" + std::to_string(k), k,
                strategy_from_config(config, "macd_mean"), &ens_k);
        run_row("macd_consensus_k" + std::to_string(k), k,
                strategy_from_config(config, "macd_consensus"), &ens_k);
        StrategySpec no_penalty = strategy_from_config(config, "macd_mean");
        no_penalty.alpha = 0.0;
        run_row("no_penalty_k" + std::to_string(k), k, no_penalty, &ens_k);
    }

    fs::create_directories(config.output_dir);
    write_file(fs::path(config.output_dir) / "ablate.csv", csv.str());
    return csv.str();
}

}  // namespace macd
