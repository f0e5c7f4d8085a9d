#include "raggain/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "raggain/error.hpp"
#include "raggain/predictors_pre.hpp"
#include "text_util.hpp"

namespace raggain {

namespace {

std::filesystem::path resolve(std::string_view value, const std::filesystem::path& base_dir) {
    std::filesystem::path p{std::string(value)};
    if (p.empty() || p.is_absolute() || base_dir.empty()) return p;
    return base_dir / p;
}

std::vector<std::string> parse_list(std::string_view value) {
    std::vector<std::string> items;
    if (detail::trim(value).empty()) return items;
    for (const auto item : detail::split(value, ',')) {
        const auto t = detail::trim(item);
        if (t.empty()) throw Error("empty item in list '" + std::string(value) + "'");
        items.emplace_back(t);
    }
    return items;
}

std::size_t parse_count(std::string_view key, std::string_view value, std::size_t min) {
    std::size_t v = 0;
    if (!detail::parse_int(value, v) || v < min) {
        throw Error("config key '" + std::string(key) + "': expected an integer >= " +
                    std::to_string(min) + ", got '" + std::string(value) + "'");
    }
    return v;
}

double parse_number(std::string_view key, std::string_view value) {
    double v = 0.0;
    if (!detail::parse_finite(value, v))
        throw Error("config key '" + std::string(key) + "': expected a number, got '" + std::string(value) + "'");
    return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw Error("config key '" + std::string(key) + "': expected true/false, got '" + std::string(value) + "'");
}

bool valid_name(std::string_view name) {
    if (name.empty()) return false;
    for (const char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

template <typename T>
void upsert(std::vector<std::pair<std::string, T>>& items, std::string name, T value) {
    for (auto& [n, v] : items) {
        if (n == name) {
            v = std::move(value);
            return;
        }
    }
    items.emplace_back(std::move(name), std::move(value));
}

}  // namespace

std::size_t ExperimentConfig::k_for(const std::string& predictor) const {
    const auto it = k_overrides.find(predictor);
    return it == k_overrides.end() ? k : it->second;
}

const std::vector<std::string>& builtin_predictor_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& f : all_pre_families()) out.push_back(f.name());
        for (const auto* n : {"wig", "u_wig", "nqc", "qc", "smv", "u_smv", "ref", "uncertainty", "random"})
            out.emplace_back(n);
        return out;
    }();
    return names;
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir) {
    const auto k = std::string(key);
    if (key == "corpus") config.corpus = resolve(value, base_dir);
    else if (key == "index") config.index = resolve(value, base_dir);
    else if (key == "queries") config.queries = resolve(value, base_dir);
    else if (key == "run") config.run = resolve(value, base_dir);
    else if (key == "reference_run") config.reference_run = resolve(value, base_dir);
    else if (key == "generation_log") config.generation_log = resolve(value, base_dir);
    else if (key == "out") config.out = resolve(value, base_dir);
    else if (key == "seed") {
        if (!detail::parse_int(value, config.seed))
            throw Error("config key 'seed': expected a non-negative integer, got '" + std::string(value) + "'");
    } else if (key == "eps") {
        config.eps = parse_number(key, value);
        if (!(config.eps > 0.0)) throw Error("config key 'eps' must be positive");
    } else if (key == "alpha") {
        config.alpha = parse_number(key, value);
        if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw Error("config key 'alpha' must lie in (0, 1)");
    } else if (key == "bins") config.bins = parse_count(key, value, 1);
    else if (key == "predictors") config.predictors = parse_list(value);
    else if (key == "quality_metrics") config.quality_metrics = parse_list(value);
    else if (key == "k") config.k = parse_count(key, value, 1);
    else if (key == "rbo_p") {
        config.rbo_p = parse_number(key, value);
        if (!(config.rbo_p > 0.0 && config.rbo_p < 1.0)) throw Error("config key 'rbo_p' must lie in (0, 1)");
    } else if (key == "rbo_depth") config.rbo_depth = parse_count(key, value, 1);
    else if (key == "rbo_mode") {
        const auto mode = parse_rbo_mode(value);
        if (!mode) throw Error("config key 'rbo_mode': expected truncated or extrapolated");
        config.rbo_mode = *mode;
    } else if (key == "pool") {
        const auto pool = parse_pool_strategy(value);
        if (!pool) throw Error("config key 'pool': expected mean, geometric_mean, harmonic_mean, min or max");
        config.pool = *pool;
    } else if (key == "wig_query_length_norm") config.wig_query_length_norm = parse_bool(key, value);
    else if (key == "bm25_k1") {
        config.bm25.k1 = parse_number(key, value);
        if (config.bm25.k1 < 0.0) throw Error("config key 'bm25_k1' must be non-negative");
    } else if (key == "bm25_b") {
        config.bm25.b = parse_number(key, value);
        if (config.bm25.b < 0.0 || config.bm25.b > 1.0) throw Error("config key 'bm25_b' must lie in [0, 1]");
    } else if (key == "retrieve_depth") config.retrieve_depth = parse_count(key, value, 1);
    else if (key == "run_tag") {
        if (value.empty() || value.find_first_of(" \t") != std::string_view::npos)
            throw Error("config key 'run_tag' must be a non-empty word");
        config.run_tag = std::string(value);
    } else if (key.starts_with("k.")) {
        const auto name = key.substr(2);
        if (!parse_score_predictor(name)) throw Error("config key '" + k + "': not a score-distribution predictor");
        config.k_overrides[std::string(name)] = parse_count(key, value, 1);
    } else if (key.starts_with("quality.")) {
        const auto rest = key.substr(8);
        const auto dot = rest.rfind('.');
        const auto metric = dot == std::string_view::npos ? std::string_view{} : rest.substr(0, dot);
        const auto mode = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
        if (!valid_name(metric) || !parse_generation_mode(mode))
            throw Error("config key '" + k + "': expected quality.<metric>.rag or quality.<metric>.norag");
        auto& paths = config.quality[std::string(metric)];
        (mode == "rag" ? paths.rag : paths.norag) = resolve(value, base_dir);
    } else if (key.starts_with("external.")) {
        const auto name = key.substr(9);
        if (!valid_name(name)) throw Error("config key '" + k + "': invalid predictor name");
        upsert(config.external, std::string(name), resolve(value, base_dir));
    } else if (key.starts_with("group.")) {
        const auto name = key.substr(6);
        if (!valid_name(name)) throw Error("config key '" + k + "': invalid group name");
        upsert(config.groups, std::string(name), parse_list(value));
    } else {
        throw Error("unknown config key '" + k + "'");
    }
}

ExperimentConfig parse_config(std::istream& in, const std::string& source,
                              const std::filesystem::path& base_dir) {
    ExperimentConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (detail::read_line(in, line)) {
        ++line_no;
        const auto content = detail::trim(line);
        if (content.empty() || content.front() == '#') continue;
        const auto eq = content.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected 'key = value'");
        const auto key = detail::trim(content.substr(0, eq));
        const auto value = detail::trim(content.substr(eq + 1));
        if (key.empty()) throw ParseError(source, line_no, "empty key");
        try {
            apply_setting(config, key, value, base_dir);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(source, line_no, e.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    return parse_config(in, path.string(), path.parent_path());
}

void apply_overrides(ExperimentConfig& config, const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string_view arg = args[i];
        if (!arg.starts_with("--")) throw Error("unexpected argument '" + args[i] + "'");
        arg.remove_prefix(2);
        const auto eq = arg.find('=');
        if (eq != std::string_view::npos) {
            apply_setting(config, arg.substr(0, eq), arg.substr(eq + 1), {});
            continue;
        }
        if (i + 1 >= args.size()) throw Error("option '--" + std::string(arg) + "' needs a value");
        apply_setting(config, arg, args[++i], {});
    }
}

void validate_config(const ExperimentConfig& config) {
    if (config.queries.empty()) throw Error("config: 'queries' is required");

    std::set<std::string> names;
    const bool has_index = !config.corpus.empty() || !config.index.empty();
    const bool has_run = !config.run.empty() || has_index;
    const auto require = [&](const std::string& predictor, bool ok, const char* what) {
        if (!ok) throw Error("config: predictor '" + predictor + "' requires " + what);
    };

    const auto& builtin = builtin_predictor_names();
    for (const auto& p : config.predictors) {
        if (std::find(builtin.begin(), builtin.end(), p) == builtin.end())
            throw Error("config: unknown predictor '" + p + "'");
        if (!names.insert(p).second) throw Error("config: predictor '" + p + "' listed twice");

        if (PreFamily::parse(p)) require(p, has_index, "'corpus' or 'index'");
        if (const auto sp = parse_score_predictor(p)) {
            require(p, has_run, "'run' or a corpus to retrieve from");
            if (uses_corpus_score(*sp)) require(p, has_index, "'corpus' or 'index' for the corpus score");
        }
        if (p == "ref") {
            require(p, has_run, "'run' or a corpus to retrieve from");
            require(p, !config.reference_run.empty(), "'reference_run'");
        }
        if (p == "uncertainty") require(p, !config.generation_log.empty(), "'generation_log'");
    }
    for (const auto& [name, path] : config.external) {
        if (!names.insert(name).second) throw Error("config: predictor name '" + name + "' used twice");
    }

    if (config.quality_metrics.empty()) throw Error("config: 'quality_metrics' is empty");
    std::set<std::string> metrics;
    for (const auto& m : config.quality_metrics) {
        if (!metrics.insert(m).second) throw Error("config: metric '" + m + "' listed twice");
        const auto it = config.quality.find(m);
        const bool has_tables = it != config.quality.end();
        if (has_tables && (it->second.rag.empty() || it->second.norag.empty()))
            throw Error("config: metric '" + m + "' needs both quality." + m + ".rag and quality." + m + ".norag");
        if (!has_tables && m != "em")
            throw Error("config: metric '" + m + "' has no quality tables configured");
        if (!has_tables && config.generation_log.empty())
            throw Error("config: metric 'em' needs 'generation_log' (or injected quality tables)");
    }

    for (const auto& [group, members] : config.groups) {
        for (const auto& m : members) {
            if (!names.contains(m))
                throw Error("config: group '" + group + "' names unconfigured predictor '" + m + "'");
        }
    }
}

}  // namespace raggain
