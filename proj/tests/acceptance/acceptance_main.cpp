// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "malformed_cases.hpp"
#include "raggain/config.hpp"
#include "raggain/error.hpp"
#include "raggain/eval.hpp"
#include "raggain/gain.hpp"
#include "raggain/index.hpp"
#include "raggain/io.hpp"
#include "raggain/pipeline.hpp"
#include "raggain/predictors_gen.hpp"
#include "raggain/predictors_post.hpp"
#include "raggain/score_table.hpp"
#include "raggain/stats.hpp"
#include "raggain/tokenize.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace raggain;

namespace {

using Clock = std::chrono::steady_clock;

/// Collects the first few failures of a criterion.
class Check {
public:
    void fail(const std::string& what) {
        if (failures_++ < 5) messages_ += (messages_.empty() ? "" : "; ") + what;
    }
    void expect(bool ok, const std::string& what) {
        if (!ok) fail(what);
    }
    void near(double got, double want, double tol, const std::string& what) {
        if (!(std::abs(got - want) <= tol)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << what << ": got " << got << ", want " << want << " (tol " << tol << ")";
            fail(msg.str());
        }
    }
    bool ok() const { return failures_ == 0; }
    std::string summary() const {
        return failures_ == 0 ? std::string() : std::to_string(failures_) + " failure(s): " + messages_;
    }

private:
    std::size_t failures_ = 0;
    std::string messages_;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------- criterion 1

double brute_wig(const std::vector<double>& s, double sc, std::size_t k, bool regularized) {
    const std::size_t n = std::min(k, s.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += s[i];
    return regularized ? sum / n - sc : sum / n;
}

double brute_std(const std::vector<double>& s, std::size_t k) {
    const std::size_t n = std::min(k, s.size());
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += s[i];
    mu /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (s[i] - mu) * (s[i] - mu);
    return std::sqrt(var / n);
}

double brute_smv(const std::vector<double>& s, std::size_t k) {
    const std::size_t n = std::min(k, s.size());
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += s[i];
    mu /= n;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += s[i] * std::abs(std::log(s[i] / mu));
    return sum / n;
}

std::string criterion_score_predictors(Check& check) {
    const std::size_t grid[] = {1, 2, 3, 4, 5, 10, 20, 30, 40, 50};
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<std::size_t> length(1, 100);
    std::uniform_real_distribution<double> score(1e-3, 50.0);
    std::uniform_real_distribution<double> corpus(0.5, 10.0);
    const auto start = Clock::now();
    std::size_t evaluations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> s(length(rng));
        for (auto& x : s) x = score(rng);
        std::sort(s.rbegin(), s.rend());
        const double sc = corpus(rng);
        RankedList list{"q" + std::to_string(trial), {}};
        for (std::size_t i = 0; i < s.size(); ++i) list.entries.push_back({"d" + std::to_string(i), s[i]});
        for (const auto k : grid) {
            const std::map<ScorePredictor, double> expected{
                {ScorePredictor::wig, brute_wig(s, sc, k, true)},
                {ScorePredictor::u_wig, brute_wig(s, sc, k, false)},
                {ScorePredictor::nqc, brute_std(s, k) / sc},
                {ScorePredictor::qc, brute_std(s, k)},
                {ScorePredictor::smv, brute_smv(s, k) / sc},
                {ScorePredictor::u_smv, brute_smv(s, k)},
            };
            for (const auto& [predictor, want] : expected) {
                check.near(score_predict(predictor, list, sc, k), want, 1e-9,
                           std::string(to_string(predictor)) + " list " + std::to_string(trial) + " k=" +
                               std::to_string(k));
                ++evaluations;
            }
        }
    }
    const double elapsed = seconds_since(start);
    check.expect(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s exceeds 5 s");
    return std::to_string(evaluations) + " evaluations, " + std::to_string(elapsed) + " s";
}

// ---------------------------------------------------------------- criterion 2

struct DirectRbo {
    double truncated;
    double extrapolated;
};

// A_d recomputed from scratch at every depth.
DirectRbo direct_rbo(const std::vector<int>& a, const std::vector<int>& b, double p, std::size_t depth,
                     int universe) {
    const std::size_t D = std::min(depth, std::max(a.size(), b.size()));
    if (D == 0) return {0.0, 0.0};
    std::vector<std::size_t> pos_b(static_cast<std::size_t>(universe), SIZE_MAX);
    for (std::size_t i = 0; i < b.size(); ++i) pos_b[static_cast<std::size_t>(b[i])] = i;
    double sum = 0.0;
    double agreement = 0.0;
    for (std::size_t d = 1; d <= D; ++d) {
        std::size_t overlap = 0;
        const std::size_t da = std::min(d, a.size());
        const std::size_t db = std::min(d, b.size());
        for (std::size_t i = 0; i < da; ++i)
            if (pos_b[static_cast<std::size_t>(a[i])] < db) ++overlap;
        agreement = static_cast<double>(overlap) / static_cast<double>(d);
        sum += std::pow(p, static_cast<double>(d - 1)) * agreement;
    }
    const double truncated = (1.0 - p) * sum;
    return {truncated, truncated + agreement * std::pow(p, static_cast<double>(D))};
}

std::vector<std::string> as_ids(const std::vector<int>& v) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const int x : v) out.push_back("doc" + std::to_string(x));
    return out;
}

std::string criterion_rbo(Check& check) {
    std::mt19937_64 rng(2002);
    const double decays[] = {0.9, 0.95, 0.99};
    std::size_t pairs = 0;
    for (int trial = 0; trial < 500; ++trial) {
        // Most pairs are full depth; every fifth pair has uneven shorter lists.
        const bool full = trial % 5 != 0;
        std::uniform_int_distribution<std::size_t> len(1, 1000);
        const std::size_t la = full ? 1000 : len(rng);
        const std::size_t lb = full ? 1000 : len(rng);
        const int universe = static_cast<int>(std::max(la, lb) * (1 + trial % 3));
        std::vector<int> pool(static_cast<std::size_t>(universe));
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<int> a(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(la));
        // b: a copy of a with some ids replaced by fresh ones and some swaps, so overlap varies.
        std::vector<int> b = a;
        std::vector<int> fresh(pool.begin() + static_cast<std::ptrdiff_t>(la), pool.end());
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double churn = u(rng);
        for (auto& x : b) {
            if (!fresh.empty() && u(rng) < churn) {
                x = fresh.back();
                fresh.pop_back();
            }
        }
        for (std::size_t swaps = 0; swaps < b.size() / 4; ++swaps) {
            std::uniform_int_distribution<std::size_t> at(0, b.size() - 1);
            std::swap(b[at(rng)], b[at(rng)]);
        }
        b.resize(std::min(b.size(), lb));

        const double p = decays[trial % 3];
        const auto want = direct_rbo(a, b, p, 1000, universe);
        const auto ia = as_ids(a);
        const auto ib = as_ids(b);
        const std::string tag = "pair " + std::to_string(trial);
        check.near(rbo(ia, ib, p, 1000, RboMode::truncated), want.truncated, 1e-9, tag + " truncated");
        check.near(rbo(ia, ib, p, 1000, RboMode::extrapolated), want.extrapolated, 1e-9, tag + " extrapolated");
        ++pairs;
    }

    for (const double p : decays) {
        for (const std::size_t L : {1u, 10u, 100u, 1000u}) {
            std::vector<int> v(L);
            std::iota(v.begin(), v.end(), 0);
            const auto ids = as_ids(v);
            const std::string tag = "identical p=" + format_value(p) + " L=" + std::to_string(L);
            check.near(rbo(ids, ids, p, L, RboMode::extrapolated), 1.0, 1e-12, tag + " extrapolated");
            check.near(rbo(ids, ids, p, L, RboMode::truncated), 1.0 - std::pow(p, static_cast<double>(L)), 1e-12,
                       tag + " truncated");
        }
    }
    return std::to_string(pairs) + " pairs at depth 1000, identical lists for p in {0.9, 0.95, 0.99}";
}

// ---------------------------------------------------------------- criterion 3

// Exhaustive BM25: every document scored directly from raw token counts.
std::vector<RankedEntry> exhaustive_bm25(const std::vector<Passage>& corpus,
                                         const std::vector<std::string>& query, std::size_t k) {
    const double k1 = 0.9, b = 0.4;
    std::vector<std::map<std::string, double>> tf(corpus.size());
    std::vector<double> length(corpus.size());
    double total = 0.0;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        const auto tokens = tokenize(corpus[d].text);
        for (const auto& t : tokens) tf[d][t] += 1.0;
        length[d] = static_cast<double>(tokens.size());
        total += length[d];
    }
    const double N = static_cast<double>(corpus.size());
    const double avgdl = total / N;

    std::vector<RankedEntry> scored;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        double score = 0.0;
        bool matched = false;
        for (const auto& term : query) {
            const auto it = tf[d].find(term);
            if (it == tf[d].end()) continue;
            matched = true;
            double df = 0.0;
            for (const auto& doc : tf) df += doc.contains(term) ? 1.0 : 0.0;
            const double idf = std::log(1.0 + (N - df + 0.5) / (df + 0.5));
            const double f = it->second;
            score += idf * (f * (k1 + 1.0)) / (f + k1 * (1.0 - b + b * length[d] / avgdl));
        }
        if (matched) scored.push_back({corpus[d].doc_id, score});
    }
    std::sort(scored.begin(), scored.end(), [](const RankedEntry& x, const RankedEntry& y) {
        return x.score != y.score ? x.score > y.score : x.doc_id < y.doc_id;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

std::string criterion_bm25(Check& check) {
    std::vector<std::pair<std::string, std::vector<Passage>>> corpora;
    corpora.emplace_back("fixture", read_corpus(testing::data_dir() / "fixture" / "corpus.jsonl"));
    corpora.emplace_back("toy", std::vector<Passage>{{"d1", "the quick brown fox"},
                                                     {"d2", "the lazy dog sleeps all day"},
                                                     {"d3", "quick quick fox jumps"}});
    corpora.emplace_back("ties", std::vector<Passage>{{"zeta", "x y"}, {"alpha", "x y"}, {"mid", "y x"}});
    std::mt19937_64 rng(3003);
    for (std::size_t n : {1u, 2u, 5u, 17u, 40u, 64u, 99u, 100u})
        corpora.emplace_back("random" + std::to_string(n), testing::random_corpus(rng, n, 8 + n / 3));

    const auto queries = read_queries(testing::data_dir() / "fixture" / "queries.jsonl");
    std::size_t searches = 0;
    for (const auto& [name, corpus] : corpora) {
        check.expect(corpus.size() <= 100, name + " has more than 100 documents");
        const Index index = build_index(corpus);
        std::vector<std::vector<std::string>> qs;
        for (const auto& q : queries) qs.push_back(tokenize(q.question));
        std::uniform_int_distribution<std::size_t> qlen(1, 6);
        const auto terms = index.sorted_terms();
        std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
        for (int i = 0; i < 20; ++i) {
            std::vector<std::string> q;
            const auto n = qlen(rng);
            for (std::size_t j = 0; j < n; ++j) q.push_back(i % 4 == 0 && j == 0 ? "unseen" : terms[pick(rng)]);
            qs.push_back(q);
        }
        for (const auto& q : qs) {
            if (q.empty()) continue;
            for (const std::size_t k : {std::size_t{10}, corpus.size()}) {
                const auto got = bm25_search(index, q, k);
                const auto want = exhaustive_bm25(corpus, q, k);
                ++searches;
                if (got.size() != want.size()) {
                    check.fail(name + ": list length " + std::to_string(got.size()) + " vs " +
                               std::to_string(want.size()));
                    continue;
                }
                for (std::size_t r = 0; r < want.size(); ++r) {
                    check.expect(got.entries[r].doc_id == want[r].doc_id,
                                 name + ": rank " + std::to_string(r + 1) + " has " + got.entries[r].doc_id +
                                     ", expected " + want[r].doc_id);
                    check.near(got.entries[r].score, want[r].score, 1e-9, name + ": score at rank " + std::to_string(r + 1));
                }
            }
        }
    }
    return std::to_string(corpora.size()) + " corpora, " + std::to_string(searches) + " searches";
}

// ---------------------------------------------------------------- criterion 4

std::string criterion_statistics(Check& check) {
    const std::vector<double> xs{1, 2, 3, 4};
    check.near(pearson(xs, std::vector<double>{1, 3, 2, 4}), 0.8, 1e-12, "pearson [1,2,3,4]/[1,3,2,4]");
    check.near(pearson(xs, std::vector<double>{2, 4, 6, 8}), 1.0, 1e-12, "pearson ys = 2 xs");
    check.near(pearson(xs, std::vector<double>{6, 5, 4, 3}), -1.0, 1e-12, "pearson ys = -xs + 7");

    struct Row {
        double r12, r13, r23;
        std::size_t n;
        double t, p;
    };
    // Precomputed with an independent implementation (scipy's t distribution).
    const Row table[] = {
        {0.5, 0.3, 0.2, 100, 1.7979817313602, 0.0752908687112386},
        {0.45, 0.2, 0.6, 50, 2.1492410021257, 0.0367956614781406},
        {0.1, 0.05, 0.9, 3600, 6.76798418169825, 1.51854592825543e-11},
        {0.3, 0.1, -0.2, 30, 0.700578775775158, 0.489559676627041},
        {-0.2, 0.4, 0.1, 25, -2.36721703999975, 0.0271384717823296},
        {0.49, 0.45, 0.7, 3600, 3.59231122077036, 0.000332144796767522},
        {0.8, 0.6, 0.5, 10, 0.909593195402072, 0.393277734703223},
        {0.25, 0.3, 0.95, 200, -2.34255495038761, 0.0201501889564446},
        {0.6, 0.1, 0.3, 8, 1.1725075502683, 0.293810620203483},
        {0.15, 0.12, 0.4, 1000, 0.875493284166853, 0.381516430002668},
        {0.7, 0.69, 0.99, 500, 2.20833830722371, 0.0276764216805457},
        {0.33, -0.33, 0.0, 40, 3.20974768231027, 0.00274540563350724},
    };
    for (const auto& row : table) {
        const auto w = williams_test(row.r12, row.r13, row.r23, row.n);
        const std::string tag = "williams(" + format_value(row.r12) + ", " + format_value(row.r13) + ", " +
                                format_value(row.r23) + ", " + std::to_string(row.n) + ")";
        check.near(w.t, row.t, 1e-6, tag + " t");
        check.near(w.p, row.p, 1e-6, tag + " p");
    }
    for (const double r : {-0.3, 0.0, 0.45}) {
        const auto w = williams_test(r, r, 0.2, 50);
        check.expect(w.t == 0.0 && w.p == 1.0, "equal correlations must give t = 0 and p = 1 exactly");
    }
    for (const double dof : {1.0, 7.0, 3597.0})
        check.expect(student_t_two_tailed_p(0.0, dof) == 1.0, "t = 0 must give p = 1 exactly");
    return "3 pearson fixtures, " + std::to_string(std::size(table)) + " williams triples";
}

// ---------------------------------------------------------------- criterion 5

std::string criterion_gain(Check& check) {
    std::mt19937_64 rng(5005);
    std::uniform_real_distribution<double> q(0.0, 1.0);
    std::bernoulli_distribution tiny(0.1);
    const double eps = kDefaultGainEpsilon;
    const double bound = -std::log(eps);
    for (int trial = 0; trial < 10000; ++trial) {
        // Some qualities land at or below eps to exercise the clamp.
        const double a = tiny(rng) ? q(rng) * 2e-6 : q(rng);
        const double b = tiny(rng) ? q(rng) * 2e-6 : q(rng);
        const double c = q(rng);
        const std::string tag = "pair " + std::to_string(trial);
        const double g = gain(a, b, eps);
        check.expect(g == -gain(b, a, eps), tag + ": antisymmetry");
        check.expect(std::abs(g) <= bound + 1e-12, tag + ": |gain| exceeds -ln eps");
        const double lo = std::min(a, c), hi = std::max(a, c);
        check.expect(gain(lo, b, eps) <= gain(hi, b, eps), tag + ": not non-decreasing in q_rag");
        check.expect(gain(b, lo, eps) >= gain(b, hi, eps), tag + ": not non-increasing in q_norag");
        if (a <= eps) check.expect(gain(a, b, eps) == gain(eps, b, eps), tag + ": q_rag below eps not clamped");
        if (b <= eps) check.expect(gain(a, b, eps) == gain(a, eps, eps), tag + ": q_norag below eps not clamped");
        check.expect(gain(a, a, eps) == 0.0, tag + ": equal qualities must give 0");
    }
    check.expect(gain(0.0, 0.0, eps) == 0.0, "gain(0, 0) must be 0");
    check.near(gain(0.8, 0.4), std::log(2.0), 1e-12, "gain(0.8, 0.4)");
    check.near(gain(0.5, 0.0, 1e-6), std::log(0.5 / 1e-6), 1e-9, "gain(0.5, 0)");
    return "10000 random quality pairs";
}

// ---------------------------------------------------------------- criterion 6 and 7

struct FixtureRuns {
    testing::TempDir first{"accept-a"};
    testing::TempDir second{"accept-b"};
    std::optional<ExperimentResult> result;
    double slowest = 0.0;
};

FixtureRuns& fixture_runs() {
    static FixtureRuns runs;
    return runs;
}

std::string criterion_end_to_end(Check& check) {
    auto& runs = fixture_runs();
    const auto cfg_path = testing::data_dir() / "fixture" / "experiment.cfg";
    for (const auto* dir : {&runs.first, &runs.second}) {
        auto config = load_config(cfg_path);
        config.out = dir->path();
        const auto start = Clock::now();
        auto result = run_experiment(config);
        runs.slowest = std::max(runs.slowest, seconds_since(start));
        if (!runs.result) runs.result = std::move(result);
    }
    check.expect(runs.slowest < 30.0, "run time " + std::to_string(runs.slowest) + " s exceeds 30 s");

    std::size_t files = 0;
    std::set<fs::path> seen;
    for (const auto& entry : fs::recursive_directory_iterator(runs.first.path())) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), runs.first.path());
        seen.insert(rel);
        const auto other = runs.second.path() / rel;
        check.expect(fs::exists(other) && testing::read_file(entry.path()) == testing::read_file(other),
                     "output differs between reruns: " + rel.string());
        ++files;
    }
    for (const auto& entry : fs::recursive_directory_iterator(runs.second.path()))
        if (entry.is_regular_file())
            check.expect(seen.contains(fs::relative(entry.path(), runs.second.path())),
                         "file only in second run: " + entry.path().string());

    const auto& report = runs.result->report;
    const auto oracle = report.correlation("oracle", "e5");
    check.expect(oracle.has_value(), "oracle correlation undefined");
    if (oracle) check.near(*oracle, 1.0, 1e-9, "r(oracle, e5)");
    std::string random_rs;
    for (const auto& metric : report.metrics) {
        const auto r = report.correlation("random", metric);
        check.expect(r.has_value(), "random correlation undefined on " + metric);
        if (!r) continue;
        check.expect(std::abs(*r) < 0.5, "|r(random, " + metric + ")| = " + format_value(std::abs(*r)));
        random_rs += (random_rs.empty() ? "" : ", ") + metric + " " + format_value(*r);
    }
    char detail[256];
    std::snprintf(detail, sizeof detail, "%zu files identical, r(oracle,e5)=%.12f, r(random): %s, slowest run %.2f s",
                  files, oracle.value_or(std::nan("")), random_rs.c_str(), runs.slowest);
    return detail;
}

double summary_value(const fs::path& path, const std::string& key) {
    std::istringstream in(testing::read_file(path));
    std::string k, v;
    while (in >> k >> v)
        if (k == key) return std::stod(v);
    throw Error("no '" + key + "' in " + path.string());
}

std::string criterion_histogram(Check& check) {
    auto& runs = fixture_runs();
    if (!runs.result) criterion_end_to_end(check);
    std::size_t checked = 0;
    const auto gain_dir = runs.first.path() / "gain";
    std::vector<fs::path> gain_files;
    for (const auto& entry : fs::directory_iterator(gain_dir)) {
        const auto name = entry.path().filename().string();
        if (name.find(".hist.") == std::string::npos && name.find(".summary.") == std::string::npos)
            gain_files.push_back(entry.path());
    }
    std::sort(gain_files.begin(), gain_files.end());
    gain_files.push_back(testing::data_dir() / "gain_30pct.tsv");
    for (const auto& path : gain_files) {
        const auto table = read_score_table(path);
        std::vector<double> gains;
        for (const auto& [_, g] : table.values) gains.push_back(g);
        const auto dist = gain_distribution(gains, 10);
        const double sum = dist.fraction_negative + dist.fraction_zero + dist.fraction_positive;
        check.expect(sum == 1.0, path.filename().string() + ": fractions sum to " + format_value(sum));
        std::size_t counted = 0;
        for (const auto& bin : dist.bins) counted += bin.count;
        check.expect(counted == gains.size(), path.filename().string() + ": histogram loses labels");
        ++checked;
    }
    // Written summaries partition too.
    for (const auto& metric : runs.result->report.metrics) {
        const auto summary = gain_dir / (metric + ".summary.tsv");
        const double sum = summary_value(summary, "fraction_negative") + summary_value(summary, "fraction_zero") +
                           summary_value(summary, "fraction_positive");
        check.near(sum, 1.0, 1e-8, summary.filename().string() + " fractions");
    }

    const auto table = read_score_table(testing::data_dir() / "gain_30pct.tsv");
    std::vector<double> gains;
    for (const auto& [_, g] : table.values) gains.push_back(g);
    const auto dist = gain_distribution(gains, 10);
    check.expect(dist.fraction_negative == 0.30,
                 "30% fixture reports fraction_negative " + format_value(dist.fraction_negative));
    const double e5 = summary_value(gain_dir / "e5.summary.tsv", "fraction_negative");
    check.expect(e5 == 0.30, "fixture e5 gain reports fraction_negative " + format_value(e5));
    return std::to_string(checked) + " gain files partition; 30% fixtures report " +
           format_value(dist.fraction_negative) + " and " + format_value(e5);
}

// ---------------------------------------------------------------- criterion 8

std::string criterion_malformed(Check& check) {
    const auto dir = testing::data_dir() / "malformed";
    const auto cases = testing::load_malformed_manifest(dir);
    check.expect(cases.size() >= 10, "fewer than 10 malformed inputs");
    for (const auto& c : cases) {
        const auto problem = testing::check_malformed(dir, c);
        check.expect(problem.empty(), problem);
    }

    // qid misalignment between predictor and gain columns.
    try {
        evaluate({{"p", {{"q1", 1}, {"q2", 2}, {"q4", 4}}}}, {{"em", {{"q1", 1}, {"q2", 2}, {"q3", 3}}}}, {});
        check.fail("misaligned evaluate accepted");
    } catch (const Error& e) {
        const std::string msg = e.what();
        check.expect(msg.find("q3") != std::string::npos && msg.find("q4") != std::string::npos,
                     "misalignment error does not list the symmetric difference: " + msg);
    }
    // External score table missing questions.
    try {
        adapt_external_scores(ScoreTable{"bert", {{"q1", 0.1}}}, {"q1", "q2", "q3"});
        check.fail("external table with missing qids accepted");
    } catch (const Error& e) {
        const std::string msg = e.what();
        check.expect(msg.find("q2") != std::string::npos && msg.find("q3") != std::string::npos,
                     "missing-qid error does not list the qids: " + msg);
    }
    return std::to_string(cases.size()) + " malformed files plus 2 misalignment cases";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<std::string(Check&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "score-distribution predictor oracle", criterion_score_predictors},
        {2, "RBO oracle", criterion_rbo},
        {3, "BM25 oracle", criterion_bm25},
        {4, "statistics oracle", criterion_statistics},
        {5, "gain properties", criterion_gain},
        {6, "end-to-end determinism and sanity", criterion_end_to_end},
        {7, "histogram partition", criterion_histogram},
        {8, "ingestion robustness", criterion_malformed},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Check check;
        std::string detail;
        try {
            detail = c.run(check);
        } catch (const std::exception& e) {
            check.fail(std::string("exception: ") + e.what());
        }
        const bool ok = check.ok();
        if (!ok) ++failed;
        std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", c.id, c.name,
                    ok ? detail.c_str() : check.summary().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
