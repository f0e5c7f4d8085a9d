#include "raggain/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "raggain/error.hpp"

namespace raggain {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kFractionEpsilon = 1e-16;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), Lentz's method. Converges fast for
// x < (a + 1) / (a + b + 2); callers use the symmetry relation otherwise.
double beta_continued_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kFractionEpsilon) return h;
    }
    throw Error("incomplete beta: continued fraction did not converge");
}

}  // namespace

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw Error("pearson: length mismatch (" + std::to_string(xs.size()) + " vs " +
                    std::to_string(ys.size()) + ")");
    }
    if (xs.size() < 3) throw Error("pearson: at least 3 observations required");

    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;

    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw Error("pearson: zero variance, correlation undefined");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("incomplete beta: shape parameters must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw Error("incomplete beta: x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
    return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double student_t_two_tailed_p(double t, double dof) {
    if (!(dof > 0.0)) throw Error("student t: degrees of freedom must be positive");
    if (std::isnan(t)) throw Error("student t: t is NaN");
    if (t == 0.0) return 1.0;
    if (std::isinf(t)) return 0.0;
    const double x = dof / (dof + t * t);
    return std::clamp(regularized_incomplete_beta(x, 0.5 * dof, 0.5), 0.0, 1.0);
}

WilliamsResult williams_test(double r12, double r13, double r23, std::size_t n) {
    if (n <= 3) throw Error("williams: need n > 3 observations, got " + std::to_string(n));
    for (const double r : {r12, r13, r23}) {
        if (!(r > -1.0 && r < 1.0)) throw Error("williams: correlations must lie in (-1, 1)");
    }
    // Written so swapping r12 and r13 yields bit-identical K and denominator.
    const double k = 1.0 - (r12 * r12 + r13 * r13) - r23 * r23 + 2.0 * (r12 * r13) * r23;
    if (!(k > 0.0)) throw Error("williams: degenerate correlation triple (K <= 0)");

    const double nm1 = static_cast<double>(n - 1);
    const double nm3 = static_cast<double>(n - 3);
    const double sum = r12 + r13;
    const double one_minus = 1.0 - r23;
    const double denom = 2.0 * k * nm1 / nm3 + (sum * sum / 4.0) * one_minus * one_minus * one_minus;

    WilliamsResult result;
    result.t = (r12 - r13) * std::sqrt(nm1 * (1.0 + r23) / denom);
    result.p = student_t_two_tailed_p(result.t, nm3);
    return result;
}

}  // namespace raggain
