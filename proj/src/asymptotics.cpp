#include "cptree/asymptotics.hpp"

#include "cptree/cp_rank.hpp"
#include "cptree/enumeration.hpp"
#include "cptree/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cptree {

namespace {

constexpr double term_cutoff = 1e-17;
constexpr double pi = std::numbers::pi;

}  // namespace

double theta_cdf_reciprocal_series(double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    const double prefactor = 4.0 * std::pow(pi, 2.5) / (x * x * x);
    const double a = pi * pi / (x * x);
    double sum = 0.0;
    for (int j = 1;; ++j) {
        const double jj = static_cast<double>(j) * j;
        const double term = prefactor * jj * std::exp(-a * jj);
        sum += term;
        // j^2 exp(-a j^2) decreases once a j^2 > 1.
        if (term < term_cutoff && a * jj > 1.0) {
            break;
        }
    }
    return sum;
}

double theta_cdf_gaussian_series(double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    const double xx = x * x;
    double sum = 0.0;
    for (int j = 1;; ++j) {
        const double jj = static_cast<double>(j) * j;
        const double term = (1.0 - 2.0 * jj * xx) * std::exp(-jj * xx);
        sum += term;
        if (std::abs(term) < term_cutoff && jj * xx > 1.0) {
            break;
        }
    }
    return 1.0 + 2.0 * sum;
}

double theta_cdf(double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    // At x = sqrt(pi) both series decay at the same rate, exp(-pi j^2).
    return x < std::sqrt(pi) ? theta_cdf_reciprocal_series(x) : theta_cdf_gaussian_series(x);
}

double solve_alpha() {
    // g(a) = a ln(2e/a) - 1 is strictly decreasing on (2, inf), g(2) = 1 > 0.
    auto g = [](double a) { return a * (std::numbers::ln2 + 1.0 - std::log(a)) - 1.0; };
    double lo = 2.0;
    double hi = 100.0;
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Newton polish; g'(a) = ln(2/a).
    double a = 0.5 * (lo + hi);
    for (int i = 0; i < 3; ++i) {
        a -= g(a) / std::log(2.0 / a);
    }
    return a;
}

double beta_from_alpha(double alpha) { return 3.0 * alpha / (2.0 * alpha - 2.0); }

double estimate_gamma(std::size_t depth) {
    if (depth < 4) {
        throw DomainError("estimate_gamma needs depth >= 4, got " + std::to_string(depth));
    }
    const ExtremalSeqs seqs = extremal_seqs(depth);
    const double log_half_c = natural_log(seqs.c[depth]) - std::numbers::ln2;
    return std::exp(std::ldexp(log_half_c, -static_cast<int>(depth)));
}

double log_gamma() {
    // c_12 exceeds 10^190; the remaining terms are below 2^-4000.
    const ExtremalSeqs seqs = extremal_seqs(12);
    double sum = -std::numbers::ln2;
    for (std::size_t k = 0; k < seqs.c.size(); ++k) {
        // 2 c_{k+1} / c_k^2 = 1 - 1/c_k + 4/c_k^2
        const BigRat x = BigRat(4 - seqs.c[k], seqs.c[k] * seqs.c[k]);
        sum += std::ldexp(std::log1p(x.get_d()), -static_cast<int>(k + 1));
    }
    return sum;
}

double estimate_rho(std::size_t n_max) {
    if (n_max < 100) {
        throw DomainError("estimate_rho needs n_max >= 100, got " + std::to_string(n_max));
    }
    const std::vector<BigNat> u = wedderburn_table(n_max + 1);
    auto ratio = [&u](std::size_t n) { return BigRat(u[n], u[n + 1]).get_d(); };
    const double r0 = ratio(n_max - 2);
    const double r1 = ratio(n_max - 1);
    const double r2 = ratio(n_max);
    const double d1 = r2 - r1;
    const double d2 = d1 - (r1 - r0);
    return d2 == 0.0 ? r2 : r2 - d1 * d1 / d2;
}

PiAsymptotic pi_asymptotic(std::size_t n, Model model) {
    if (n < 2) {
        throw DomainError("pi_asymptotic needs n >= 2, got " + std::to_string(n));
    }
    const double size = static_cast<double>(n);
    const double log_n = std::log(size);
    double log_value = 0.0;
    switch (shape_law(model)) {
        case Model::uniform_labeled:
            // n^{3/2} sqrt(pi) / 2^n
            log_value = 1.5 * log_n + 0.5 * std::log(pi) - size * std::numbers::ln2;
            break;
        case Model::uniform_unordered:
            // n^{3/2} rho^n / lambda
            log_value = 1.5 * log_n + size * std::log(constants::rho) - std::log(constants::lambda);
            break;
        default:
            // (2e/n)^n sqrt(n) / (4 sqrt(2 pi))
            log_value = size * (std::numbers::ln2 + 1.0 - log_n) + 0.5 * log_n - std::log(4.0) -
                        0.5 * std::log(2.0 * pi);
            break;
    }
    return {std::exp(log_value), log_value};
}

double loglog_asymptotic(std::size_t n, Model model) {
    if (n < 2) {
        throw DomainError("loglog_asymptotic needs n >= 2, got " + std::to_string(n));
    }
    const double size = static_cast<double>(n);
    switch (shape_law(model)) {
        case Model::uniform_labeled:
            return 2.0 * std::sqrt(pi * size);
        case Model::uniform_unordered:
            return constants::kappa * std::sqrt(size);
        default:
            return constants::alpha * std::log(size);
    }
}

namespace {

unsigned moment_power(RankMoment moment) { return moment == RankMoment::mean ? 1u : 2u; }

BigNat caterpillar_rank_of_height(std::size_t h) {
    BigNat c = 1;
    for (std::size_t k = 0; k < h; ++k) {
        BigNat next = c * (c - 1);
        next /= 2;
        next += 2;
        c = std::move(next);
    }
    return c;
}

}  // namespace

BigRat caterpillar_contribution(std::size_t n, Model model, RankMoment moment) {
    BigRat value = caterpillar_probability(n, model);
    BigNat c = caterpillar_rank_of_height(n - 1);
    if (moment == RankMoment::second_moment) {
        c *= c;
    }
    value *= BigRat(c);
    value.canonicalize();
    return value;
}

MeanRankAsymptotic mean_rank_asymptotic(std::size_t n, Model model, RankMoment moment) {
    if (n < 4) {
        throw DomainError("mean_rank_asymptotic needs n >= 4, got " + std::to_string(n));
    }
    MeanRankAsymptotic out;
    if (n <= exact_mean_rank_limit) {
        BigRat value = caterpillar_contribution(n, model, moment);
        out.log2log_mean = log2_ln(value);
        out.exact_available = true;
        out.mean = std::move(value);
        return out;
    }
    out.log2log_mean = log2log_caterpillar_contribution(n, model, moment);
    return out;
}

double log2log_caterpillar_contribution(std::size_t n, Model model, RankMoment moment) {
    if (n < 4) {
        throw DomainError("log2log_caterpillar_contribution needs n >= 4, got " + std::to_string(n));
    }
    const double log_pi = natural_log(caterpillar_probability(n, model));
    const double log_c = std::ldexp(log_gamma(), static_cast<int>(n - 1)) + std::numbers::ln2;
    return std::log2(log_pi + moment_power(moment) * log_c);
}

}  // namespace cptree
