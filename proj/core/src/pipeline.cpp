#include "raggain/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <numeric>
#include <random>

#include "raggain/error.hpp"
#include "raggain/predictors_gen.hpp"
#include "raggain/predictors_post.hpp"
#include "raggain/predictors_pre.hpp"
#include "raggain/score_table.hpp"
#include "raggain/tokenize.hpp"

namespace raggain {

namespace {

const std::vector<std::string> kNoTokens;

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(std::string("[") + stage + "] " + e.what());
    }
}

bool is_unsupervised_retrieval(const std::string& name) {
    return PreFamily::parse(name).has_value() || parse_score_predictor(name).has_value() || name == "ref";
}

std::string marker_for(std::size_t position) {
    std::string marker;
    for (std::size_t i = 0; i <= position; ++i) marker += "†";
    return marker;
}

}  // namespace

ExperimentData::ExperimentData(const ExperimentConfig& config) : config_(config) {
    validate_config(config_);
    queries_ = read_queries(config_.queries);
    for (const auto& q : queries_) {
        qids_.insert(q.qid);
        tokens_.emplace(q.qid, tokenize(q.question));
    }

    if (!config_.index.empty()) {
        index_ = Index::load(config_.index);
    } else if (!config_.corpus.empty()) {
        const auto corpus = read_corpus(config_.corpus);
        index_ = build_index(corpus);
    }

    if (!config_.run.empty()) {
        run_ = read_run_file(config_.run);
    } else if (index_) {
        run_ = retrieve_all(*index_, queries_, config_.retrieve_depth, config_.bm25);
        retrieved_here_ = true;
    }
    if (!config_.reference_run.empty()) reference_ = read_run_file(config_.reference_run);
    if (!config_.generation_log.empty()) generations_ = read_generation_log(config_.generation_log);

    if (index_) {
        for (const auto& [qid, tokens] : tokens_) {
            if (!tokens.empty()) corpus_scores_.emplace(qid, raggain::corpus_score(*index_, tokens, config_.bm25));
        }
    }
}

const std::vector<std::string>& ExperimentData::query_tokens(const std::string& qid) const {
    const auto it = tokens_.find(qid);
    return it == tokens_.end() ? kNoTokens : it->second;
}

std::optional<double> ExperimentData::corpus_score(const std::string& qid) const {
    const auto it = corpus_scores_.find(qid);
    if (it == corpus_scores_.end()) return std::nullopt;
    return it->second;
}

RunCollection retrieve_all(const Index& index, const std::vector<QuestionRecord>& queries,
                           std::size_t depth, const Bm25Params& params) {
    RunCollection runs;
    for (const auto& q : queries) {
        const auto tokens = tokenize(q.question);
        if (tokens.empty()) {
            std::cerr << "warning: question '" << q.qid << "' has no tokens; not retrieved\n";
            continue;
        }
        auto list = bm25_search(index, tokens, depth, params);
        list.qid = q.qid;
        runs.emplace(q.qid, std::move(list));
    }
    return runs;
}

std::map<std::string, MetricQuality> compute_quality(const ExperimentData& data) {
    const auto& config = data.config();
    std::map<std::string, MetricQuality> out;
    for (const auto& metric : config.quality_metrics) {
        MetricQuality quality;
        const auto it = config.quality.find(metric);
        if (it != config.quality.end()) {
            quality.rag = adapt_external_scores(read_score_table(it->second.rag), data.qids());
            quality.norag = adapt_external_scores(read_score_table(it->second.norag), data.qids());
        } else {
            const auto* log = data.generations();
            if (log == nullptr) throw Error("metric 'em' needs a generation log");
            std::string missing;
            for (const auto& q : data.queries()) {
                const auto rag = log->rag.find(q.qid);
                const auto norag = log->norag.find(q.qid);
                if (rag == log->rag.end() || norag == log->norag.end()) {
                    missing += (missing.empty() ? "" : ", ") + q.qid;
                    continue;
                }
                quality.rag.emplace(q.qid, q_em(rag->second.answer, q.answers));
                quality.norag.emplace(q.qid, q_em(norag->second.answer, q.answers));
            }
            if (!missing.empty())
                throw Error("generation log lacks a rag/norag answer for qid(s): " + missing);
        }
        out.emplace(metric, std::move(quality));
    }
    return out;
}

std::vector<std::pair<std::string, GainColumn>> compute_gain_columns(const ExperimentData& data) {
    const auto quality = compute_quality(data);
    std::vector<std::pair<std::string, GainColumn>> out;
    for (const auto& metric : data.config().quality_metrics) {
        const auto& q = quality.at(metric);
        out.emplace_back(metric, compute_gains(q.rag, q.norag, data.config().eps));
    }
    return out;
}

PredictorColumn compute_predictor(const std::string& name, const ExperimentData& data,
                                  const ExperimentConfig& settings) {
    PredictorColumn result;
    result.column.name = name;
    auto& values = result.column.values;

    const auto skip = [&](const std::string& qid, const std::string& reason) {
        if (result.skipped++ == 0) result.first_skip_reason = qid + ": " + reason;
    };
    const auto per_query = [&](auto&& fn) {
        for (const auto& qid : data.qids()) {
            try {
                if (const auto v = fn(qid)) values.emplace(qid, *v);
            } catch (const Error& e) {
                skip(qid, e.what());
            }
        }
    };

    for (const auto& [ext_name, path] : settings.external) {
        if (ext_name == name) {
            values = adapt_external_scores(read_score_table(path), data.qids());
            return result;
        }
    }

    if (const auto family = PreFamily::parse(name)) {
        const auto* index = data.index();
        if (index == nullptr) throw Error("predictor '" + name + "' needs an index");
        per_query([&](const std::string& qid) -> std::optional<double> {
            return pre_predict(data.query_tokens(qid), *index, *family);
        });
        return result;
    }

    if (const auto score_predictor = parse_score_predictor(name)) {
        const auto* run = data.run();
        if (run == nullptr) throw Error("predictor '" + name + "' needs a run");
        const auto k = settings.k_for(name);
        per_query([&](const std::string& qid) -> std::optional<double> {
            const auto it = run->find(qid);
            if (it == run->end() || it->second.empty()) throw Error("no retrieved list");
            double sc = 0.0;
            if (uses_corpus_score(*score_predictor)) {
                const auto s = data.corpus_score(qid);
                if (!s) throw Error("no corpus score");
                sc = *s;
            }
            double v = score_predict(*score_predictor, it->second, sc, k);
            const bool is_wig = *score_predictor == ScorePredictor::wig || *score_predictor == ScorePredictor::u_wig;
            if (is_wig && settings.wig_query_length_norm) {
                const auto& tokens = data.query_tokens(qid);
                if (tokens.empty()) throw Error("empty query");
                v /= std::sqrt(static_cast<double>(tokens.size()));
            }
            return v;
        });
        return result;
    }

    if (name == "ref") {
        const auto* run = data.run();
        const auto* reference = data.reference_run();
        if (run == nullptr || reference == nullptr) throw Error("predictor 'ref' needs a run and a reference run");
        PostParams params;
        params.p = settings.rbo_p;
        params.depth = settings.rbo_depth;
        params.rbo_mode = settings.rbo_mode;
        per_query([&](const std::string& qid) -> std::optional<double> {
            const auto a = run->find(qid);
            const auto b = reference->find(qid);
            if (a == run->end() || b == reference->end()) throw Error("missing original or reference list");
            return ref_predict(a->second, b->second, params);
        });
        return result;
    }

    if (name == "uncertainty") {
        const auto* log = data.generations();
        if (log == nullptr) throw Error("predictor 'uncertainty' needs a generation log");
        per_query([&](const std::string& qid) -> std::optional<double> {
            const auto rag = log->rag.find(qid);
            const auto norag = log->norag.find(qid);
            if (rag == log->rag.end() || norag == log->norag.end()) throw Error("missing rag/norag generation");
            return uncertainty_gap(norag->second, rag->second, settings.pool);
        });
        return result;
    }

    if (name == "random") {
        std::mt19937_64 rng(settings.seed);
        for (const auto& qid : data.qids())
            values.emplace(qid, static_cast<double>(rng() >> 11) * 0x1.0p-53);
        return result;
    }

    throw Error("unknown predictor '" + name + "'");
}

std::vector<std::string> configured_predictors(const ExperimentConfig& config) {
    std::vector<std::string> names = config.predictors;
    for (const auto& [name, _] : config.external) names.push_back(name);
    return names;
}

std::vector<BaselineGroup> baseline_groups(const ExperimentConfig& config) {
    std::vector<BaselineGroup> groups;
    if (!config.groups.empty()) {
        for (const auto& [name, members] : config.groups)
            groups.push_back({name, marker_for(groups.size()), members});
        return groups;
    }
    const auto names = configured_predictors(config);
    std::vector<std::string> unsupervised;
    std::copy_if(names.begin(), names.end(), std::back_inserter(unsupervised), is_unsupervised_retrieval);
    if (!unsupervised.empty()) groups.push_back({"unsupervised", marker_for(groups.size()), unsupervised});
    if (!names.empty()) groups.push_back({"all", marker_for(groups.size()), names});
    return groups;
}

GainStageResult run_gain_stage(const ExperimentData& data) {
    const auto& config = data.config();
    const auto quality_dir = config.out / "quality";
    const auto gain_dir = config.out / "gain";
    ensure_directory(quality_dir);
    ensure_directory(gain_dir);

    const auto quality = compute_quality(data);
    GainStageResult result;
    for (const auto& metric : config.quality_metrics) {
        const auto& q = quality.at(metric);
        write_score_table(quality_dir / (metric + ".rag.tsv"), ScoreTable{"quality", q.rag});
        write_score_table(quality_dir / (metric + ".norag.tsv"), ScoreTable{"quality", q.norag});

        auto gains = compute_gains(q.rag, q.norag, config.eps);
        write_score_table(gain_dir / (metric + ".tsv"), gains.table);

        std::vector<double> values;
        for (const auto& [_, v] : gains.table.values) values.push_back(v);
        auto dist = gain_distribution(values, config.bins);
        write_histogram(gain_dir / (metric + ".hist.tsv"), dist);
        write_distribution_summary(gain_dir / (metric + ".summary.tsv"), dist, gains.clamped);
        if (gains.clamped > 0) {
            std::cerr << "note: " << metric << ": " << gains.clamped
                      << " question(s) had a quality below eps and were clamped\n";
        }
        result.distributions.emplace(metric, std::move(dist));
        result.gains.emplace_back(metric, std::move(gains));
    }
    return result;
}

std::vector<PredictorColumn> run_predict_stage(const ExperimentData& data) {
    const auto& config = data.config();
    const auto names = configured_predictors(config);

    // Columns are independent; workers only read `data`. Writes stay on this thread.
    std::vector<std::future<PredictorColumn>> pending;
    pending.reserve(names.size());
    for (const auto& name : names) {
        pending.push_back(std::async(std::launch::async, [&data, &config, name] {
            return compute_predictor(name, data, config);
        }));
    }
    std::vector<PredictorColumn> columns;
    columns.reserve(names.size());
    for (auto& f : pending) columns.push_back(f.get());

    const auto dir = config.out / "predictors";
    ensure_directory(dir);
    for (const auto& c : columns) {
        write_score_table(dir / (c.column.name + ".tsv"), ScoreTable{"value", c.column.values});
        if (c.skipped > 0) {
            std::cerr << "warning: predictor '" << c.column.name << "' skipped " << c.skipped
                      << " question(s), e.g. " << c.first_skip_reason << '\n';
        }
    }
    return columns;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto data = in_stage("load", [&] { return std::make_unique<ExperimentData>(config); });
    in_stage("setup", [&] {
        ensure_directory(config.out);
        if (data->retrieved_here()) write_run_file(config.out / "run.trec", *data->run(), config.run_tag);
    });

    auto gain_stage = in_stage("gain", [&] { return run_gain_stage(*data); });
    auto columns = in_stage("predict", [&] { return run_predict_stage(*data); });

    return in_stage("evaluate", [&] {
        std::vector<NamedColumn> predictors;
        for (auto& c : columns) predictors.push_back(std::move(c.column));
        std::vector<NamedColumn> gains;
        for (auto& [metric, g] : gain_stage.gains) gains.push_back({metric, g.table.values});

        const auto dropped = align_columns(predictors, gains);
        if (dropped > 0)
            std::cerr << "note: " << dropped << " question(s) dropped to align all columns\n";

        ExperimentResult result;
        result.report = evaluate(predictors, gains, baseline_groups(config), config.alpha);
        std::fill(result.report.dropped.begin(), result.report.dropped.end(), dropped);
        result.distributions = std::move(gain_stage.distributions);

        write_report_tsv(config.out / "report.tsv", result.report);
        std::ofstream text(config.out / "report.txt", std::ios::binary);
        if (!text) throw Error("cannot write " + (config.out / "report.txt").string());
        text << render_report_text(result.report);
        return result;
    });
}

QuestionSplit split_questions(const std::vector<QuestionRecord>& questions, const SplitSizes& sizes,
                              std::uint64_t seed) {
    if (sizes.test > questions.size()) {
        throw Error("split: test size " + std::to_string(sizes.test) + " exceeds " +
                    std::to_string(questions.size()) + " questions");
    }
    if (!(sizes.validation_fraction >= 0.0 && sizes.validation_fraction <= 1.0))
        throw Error("split: validation fraction must lie in [0, 1]");

    std::vector<std::size_t> order(questions.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Explicit Fisher-Yates: std::shuffle's draw sequence is library specific.
    std::mt19937_64 rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }

    const auto remaining = questions.size() - sizes.test;
    const auto n_validation = static_cast<std::size_t>(
        std::llround(static_cast<double>(remaining) * sizes.validation_fraction));

    const auto take = [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                     order.begin() + static_cast<std::ptrdiff_t>(end));
        std::sort(idx.begin(), idx.end());
        std::vector<QuestionRecord> part;
        part.reserve(idx.size());
        for (const auto i : idx) part.push_back(questions[i]);
        return part;
    };
    QuestionSplit split;
    split.test = take(0, sizes.test);
    split.validation = take(sizes.test, sizes.test + n_validation);
    split.train = take(sizes.test + n_validation, questions.size());
    return split;
}

}  // namespace raggain
