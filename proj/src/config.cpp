#include "macd/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace macd {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

long parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(value, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != value.size()) {
        throw_error(ErrorCode::InvalidParameter, "config key " + key + ": bad integer");
    }
    return v;
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != value.size()) {
        throw_error(ErrorCode::InvalidParameter, "config key " + key + ": bad number");
    }
    return v;
}

std::string format_double(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

void apply_model_key(ModelSpec& spec, const std::string& key, const std::string& value,
                     const std::string& where) {
    if (key == "order") {
        spec.order = static_cast<int>(parse_int(where + "." + key, value));
    } else if (key == "smoothing") {
        spec.smoothing = value;
    } else if (key == "lambda") {
        spec.lambda = parse_double(where + "." + key, value);
    } else if (key == "discount") {
        spec.discount = parse_double(where + "." + key, value);
    } else if (key == "temperature") {
        spec.temperature = parse_double(where + "." + key, value);
    } else if (key == "label") {
        spec.label = value;
    } else if (key == "bias_corpus") {
        spec.bias_corpus = value;
    } else {
        throw_error(ErrorCode::InvalidParameter, "unknown config key " + where + "." + key);
    }
}

void validate(const ExperimentConfig& c) {
    if (c.train_path.empty()) {
        throw_error(ErrorCode::InvalidParameter, "config: corpus.train is required");
    }
    if (c.strategies.empty()) {
        throw_error(ErrorCode::InvalidParameter, "config: decode.strategies must be non-empty");
    }
    if (c.prompt_len < 1 || c.max_new_tokens < 1 || c.min_count < 1 || c.beam < 1 ||
        c.workers < 1 || c.repetitions < 1 || c.max_prompts < 0) {
        throw_error(ErrorCode::InvalidParameter, "config: counts must be >= 1");
    }
    auto check_smoothing = [](const ModelSpec& m, const std::string& where) {
        if (m.smoothing != "additive" && m.smoothing != "kneser_ney") {
            throw_error(ErrorCode::InvalidParameter,
                        "config: " + where + ".smoothing must be additive or kneser_ney");
        }
        if (m.order < 1) {
            throw_error(ErrorCode::InvalidOrder, "config: " + where + ".order must be >= 1");
        }
        if (!(m.temperature > 0.0)) {
            throw_error(ErrorCode::NonPositiveTemperature,
                        "config: " + where + ".temperature must be > 0");
        }
    };
    check_smoothing(c.expert, "expert");
    for (std::size_t i = 0; i < c.amateurs.size(); ++i) {
        check_smoothing(c.amateurs[i], "amateur." + std::to_string(i + 1));
    }
    for (const auto& name : c.strategies) {
        strategy_from_name(name);  // throws on unknown names
    }
    if (c.filter != "topk" && c.filter != "delta" && c.filter != "joint") {
        throw_error(ErrorCode::InvalidParameter,
                    "config: decode.filter must be topk, delta, or joint");
    }
    if (c.vote_rule != "top_rank" && c.vote_rule != "threshold") {
        throw_error(ErrorCode::InvalidParameter,
                    "config: decode.vote_rule must be top_rank or threshold");
    }
    if (c.vote_rule == "threshold" && !c.vote_tau.has_value()) {
        throw_error(ErrorCode::InvalidParameter,
                    "config: decode.vote_tau is required with the threshold vote rule");
    }
    if (c.ensemble_mode != "sequential" && c.ensemble_mode != "parallel") {
        throw_error(ErrorCode::InvalidParameter,
                    "config: decode.ensemble_mode must be sequential or parallel");
    }
}

}  // namespace

SmoothingSpec ModelSpec::smoothing_spec() const {
    if (smoothing == "kneser_ney") return SmoothingSpec::kneser_ney(discount);
    return SmoothingSpec::additive(lambda);
}

std::map<std::string, std::string> ExperimentConfig::prompt_files() const {
    if (!domain_prompts.empty()) return domain_prompts;
    return {{"default", prompts_path}};
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    c.strategies.clear();
    std::map<int, ModelSpec> amateur_sections;

    std::string section;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw_error(ErrorCode::InvalidParameter, "config: expected key = value: " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (section == "corpus") {
            if (key == "train") c.train_path = value;
            else if (key == "prompts") c.prompts_path = value;
            else if (key == "min_count") c.min_count = static_cast<int>(parse_int(key, value));
            else throw_error(ErrorCode::InvalidParameter, "unknown config key corpus." + key);
        } else if (section.rfind("domain.", 0) == 0) {
            if (key != "prompts") {
                throw_error(ErrorCode::InvalidParameter, "unknown config key in " + section);
            }
            c.domain_prompts[section.substr(7)] = value;
        } else if (section == "expert") {
            apply_model_key(c.expert, key, value, "expert");
        } else if (section.rfind("amateur.", 0) == 0) {
            const int idx = static_cast<int>(parse_int(section, section.substr(8)));
            apply_model_key(amateur_sections[idx], key, value, section);
        } else if (section == "decode") {
            if (key == "prompt_len") c.prompt_len = static_cast<int>(parse_int(key, value));
            else if (key == "max_new_tokens") c.max_new_tokens = static_cast<int>(parse_int(key, value));
            else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, value));
            else if (key == "strategies") c.strategies = split_list(value);
            else if (key == "alpha") c.alpha = parse_double(key, value);
            else if (key == "alpha_consensus") c.alpha_consensus = parse_double(key, value);
            else if (key == "top_k") c.top_k = static_cast<int>(parse_int(key, value));
            else if (key == "nucleus_p") c.nucleus_p = parse_double(key, value);
            else if (key == "typical_tau") c.typical_tau = parse_double(key, value);
            else if (key == "filter") c.filter = value;
            else if (key == "filter_k") c.filter_k = static_cast<int>(parse_int(key, value));
            else if (key == "delta") c.delta = parse_double(key, value);
            else if (key == "cr_cap") c.cr_cap = parse_double(key, value);
            else if (key == "vote_rule") c.vote_rule = value;
            else if (key == "vote_r") c.vote_r = static_cast<int>(parse_int(key, value));
            else if (key == "vote_tau") c.vote_tau = parse_double(key, value);
            else if (key == "beam") c.beam = static_cast<int>(parse_int(key, value));
            else if (key == "ensemble_mode") c.ensemble_mode = value;
            else if (key == "workers") c.workers = static_cast<int>(parse_int(key, value));
            else if (key == "max_prompts") c.max_prompts = static_cast<int>(parse_int(key, value));
            else if (key == "repetitions") c.repetitions = static_cast<int>(parse_int(key, value));
            else throw_error(ErrorCode::InvalidParameter, "unknown config key decode." + key);
        } else if (section == "output") {
            if (key == "dir") c.output_dir = value;
            else throw_error(ErrorCode::InvalidParameter, "unknown config key output." + key);
        } else {
            throw_error(ErrorCode::InvalidParameter, "unknown config section [" + section + "]");
        }
    }

    for (auto& [idx, spec] : amateur_sections) c.amateurs.push_back(std::move(spec));
    if (c.strategies.empty()) c.strategies = {"greedy"};
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_error(ErrorCode::IoError, "cannot read config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    ExperimentConfig c = parse_config(buf.str());

    auto must_exist = [](const std::string& p, const std::string& what) {
        if (!p.empty() && !std::filesystem::exists(p)) {
            throw_error(ErrorCode::IoError, what + " does not exist: " + p);
        }
    };
    must_exist(c.train_path, "corpus.train");
    must_exist(c.prompts_path, "corpus.prompts");
    for (const auto& [domain, path_] : c.domain_prompts) {
        must_exist(path_, "domain." + domain + ".prompts");
    }
    for (const auto& amateur : c.amateurs) {
        must_exist(amateur.bias_corpus, "amateur bias_corpus");
    }
    return c;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "[corpus]\n";
    out << "train = " << c.train_path << "\n";
    if (!c.prompts_path.empty()) out << "prompts = " << c.prompts_path << "\n";
    out << "min_count = " << c.min_count << "\n";
    for (const auto& [domain, path] : c.domain_prompts) {
        out << "\n[domain." << domain << "]\n";
        out << "prompts = " << path << "\n";
    }
    auto dump_model = [&out](const ModelSpec& m) {
        out << "order = " << m.order << "\n";
        out << "smoothing = " << m.smoothing << "\n";
        out << "lambda = " << format_double(m.lambda) << "\n";
        out << "discount = " << format_double(m.discount) << "\n";
        out << "temperature = " << format_double(m.temperature) << "\n";
        if (!m.label.empty()) out << "label = " << m.label << "\n";
        if (!m.bias_corpus.empty()) out << "bias_corpus = " << m.bias_corpus << "\n";
    };
    out << "\n[expert]\n";
    dump_model(c.expert);
    for (std::size_t i = 0; i < c.amateurs.size(); ++i) {
        out << "\n[amateur." << (i + 1) << "]\n";
        dump_model(c.amateurs[i]);
    }
    out << "\n[decode]\n";
    out << "prompt_len = " << c.prompt_len << "\n";
    out << "max_new_tokens = " << c.max_new_tokens << "\n";
    out << "seed = " << c.seed << "\n";
    out << "strategies = ";
    for (std::size_t i = 0; i < c.strategies.size(); ++i) {
        if (i > 0) out << ", ";
        out << c.strategies[i];
    }
    out << "\n";
    out << "alpha = " << format_double(c.alpha) << "\n";
    if (c.alpha_consensus) out << "alpha_consensus = " << format_double(*c.alpha_consensus) << "\n";
    out << "top_k = " << c.top_k << "\n";
    out << "nucleus_p = " << format_double(c.nucleus_p) << "\n";
    out << "typical_tau = " << format_double(c.typical_tau) << "\n";
    out << "filter = " << c.filter << "\n";
    out << "filter_k = " << c.filter_k << "\n";
    out << "delta = " << format_double(c.delta) << "\n";
    out << "cr_cap = " << format_double(c.cr_cap) << "\n";
    out << "vote_rule = " << c.vote_rule << "\n";
    out << "vote_r = " << c.vote_r << "\n";
    if (c.vote_tau) out << "vote_tau = " << format_double(*c.vote_tau) << "\n";
    out << "beam = " << c.beam << "\n";
    out << "ensemble_mode = " << c.ensemble_mode << "\n";
    out << "workers = " << c.workers << "\n";
    out << "max_prompts = " << c.max_prompts << "\n";
    out << "repetitions = " << c.repetitions << "\n";
    out << "\n[output]\n";
    out << "dir = " << c.output_dir << "\n";
    return out.str();
}

StrategySpec strategy_from_config(const ExperimentConfig& c, const std::string& name) {
    const StrategyKind kind = strategy_from_name(name);
    FilterSpec filter = FilterSpec::topk(c.filter_k);
    if (c.filter == "delta") filter = FilterSpec::delta_margin(c.delta);
    if (c.filter == "joint") filter = FilterSpec::joint(c.delta, c.cr_cap);
    VoteRule vote = VoteRule::top_rank(c.vote_r);
    if (c.vote_rule == "threshold") {
        if (!c.vote_tau) {
            throw_error(ErrorCode::InvalidParameter,
                        "decode.vote_tau is required with the threshold vote rule");
        }
        vote = VoteRule::logprob_threshold(*c.vote_tau);
    }

    StrategySpec spec;
    switch (kind) {
        case StrategyKind::Greedy: spec = greedy_strategy(); break;
        case StrategyKind::TopKSample: spec = topk_strategy(c.top_k, c.seed); break;
        case StrategyKind::Nucleus: spec = nucleus_strategy(c.nucleus_p, c.seed); break;
        case StrategyKind::Typical: spec = typical_strategy(c.typical_tau, c.seed); break;
        case StrategyKind::Cd: spec = cd_strategy(c.alpha, filter); break;
        case StrategyKind::MacdMean: spec = macd_mean_strategy(c.alpha, filter); break;
        case StrategyKind::MacdConsensus:
            spec = macd_consensus_strategy(c.effective_alpha_consensus(), filter, vote);
            break;
    }
    if (is_contrastive(kind)) spec.beam_width = c.beam;
    return spec;
}

EvalMode eval_mode_from_config(const ExperimentConfig& c) {
    return c.ensemble_mode == "parallel" ? EvalMode::Parallel : EvalMode::Sequential;
}

}  // namespace macd
