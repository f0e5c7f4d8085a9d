#include "raggain/gain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "raggain/error.hpp"

namespace raggain {

std::string normalize_answer(std::string_view text) {
    std::string cleaned;
    cleaned.reserve(text.size());
    for (const char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (c < 0x80 && std::ispunct(c)) continue;
        if (c < 0x80 && std::isspace(c)) {
            cleaned.push_back(' ');
            continue;
        }
        cleaned.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch);
    }

    std::string out;
    out.reserve(cleaned.size());
    bool first_word = true;
    std::size_t i = 0;
    while (i < cleaned.size()) {
        while (i < cleaned.size() && cleaned[i] == ' ') ++i;
        if (i == cleaned.size()) break;
        const auto start = i;
        while (i < cleaned.size() && cleaned[i] != ' ') ++i;
        const std::string_view word(cleaned.data() + start, i - start);
        if (first_word && (word == "a" || word == "an" || word == "the")) {
            first_word = false;
            continue;
        }
        first_word = false;
        if (!out.empty()) out.push_back(' ');
        out.append(word);
    }
    return out;
}

int q_em(std::string_view generated, std::span<const std::string> references) {
    if (references.empty()) throw Error("q_em: at least one reference answer is required");
    const auto answer = normalize_answer(generated);
    for (const auto& reference : references) {
        const auto ref = normalize_answer(reference);
        if (!ref.empty() && answer.find(ref) != std::string::npos) return 1;
    }
    return 0;
}

double gain(double q_rag, double q_norag, double eps) {
    // Difference of logs keeps gain(a, b) == -gain(b, a) exact.
    return std::log(std::max(q_rag, eps)) - std::log(std::max(q_norag, eps));
}

GainColumn compute_gains(const Column& q_rag, const Column& q_norag, double eps) {
    if (!(eps > 0.0)) throw Error("gain: eps must be positive");
    GainColumn out;
    out.table.value_name = "gain";
    const auto check = [](double q, const std::string& qid, std::string_view mode) {
        if (!(q >= 0.0 && q <= 1.0)) {
            throw Error("gain: " + std::string(mode) + " quality for qid '" + qid +
                        "' outside [0, 1]");
        }
    };
    for (const auto& [qid, rag] : q_rag) {
        const auto it = q_norag.find(qid);
        if (it == q_norag.end()) throw Error("gain: qid '" + qid + "' has no no-RAG quality");
        check(rag, qid, "RAG");
        check(it->second, qid, "no-RAG");
        if (rag < eps || it->second < eps) ++out.clamped;
        out.table.values.emplace(qid, gain(rag, it->second, eps));
    }
    for (const auto& [qid, _] : q_norag) {
        if (!q_rag.contains(qid)) throw Error("gain: qid '" + qid + "' has no RAG quality");
    }
    return out;
}

GainDistribution gain_distribution(std::span<const double> gains, std::size_t bins) {
    if (gains.empty()) throw Error("gain distribution: no gain labels");
    if (bins == 0) throw Error("gain distribution: bins must be at least 1");

    GainDistribution dist;
    dist.n = gains.size();
    const auto [lo_it, hi_it] = std::minmax_element(gains.begin(), gains.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double width = (hi - lo) / static_cast<double>(bins);

    dist.bins.resize(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        dist.bins[i].lower = lo + width * static_cast<double>(i);
        dist.bins[i].upper = (i + 1 == bins) ? hi : lo + width * static_cast<double>(i + 1);
    }

    std::size_t negative = 0;
    std::size_t zero = 0;
    double sum = 0.0;
    for (const double g : gains) {
        sum += g;
        if (g < 0.0) ++negative;
        else if (g == 0.0) ++zero;
        std::size_t bin = 0;
        if (width > 0.0) {
            bin = static_cast<std::size_t>((g - lo) / width);
            bin = std::min(bin, bins - 1);
        }
        ++dist.bins[bin].count;
    }
    const double n = static_cast<double>(dist.n);
    dist.mean = sum / n;
    dist.fraction_negative = static_cast<double>(negative) / n;
    dist.fraction_zero = static_cast<double>(zero) / n;
    dist.fraction_positive = static_cast<double>(dist.n - negative - zero) / n;
    return dist;
}

void write_histogram(const std::filesystem::path& path, const GainDistribution& dist) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write histogram " + path.string());
    out << "lower\tupper\tcount\n";
    for (const auto& bin : dist.bins)
        out << format_value(bin.lower) << '\t' << format_value(bin.upper) << '\t' << bin.count << '\n';
}

void write_distribution_summary(const std::filesystem::path& path, const GainDistribution& dist,
                                std::size_t clamped) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write gain summary " + path.string());
    out << "key\tvalue\n"
        << "n\t" << dist.n << '\n'
        << "mean\t" << format_value(dist.mean) << '\n'
        << "fraction_negative\t" << format_value(dist.fraction_negative) << '\n'
        << "fraction_zero\t" << format_value(dist.fraction_zero) << '\n'
        << "fraction_positive\t" << format_value(dist.fraction_positive) << '\n'
        << "clamped\t" << clamped << '\n';
}

}  // namespace raggain
