#pragma once

// Limit-law constants, the theta distribution, and the leading-order
// approximations for rank statistics of random shapes.

#include "cptree/bignum.hpp"
#include "cptree/model.hpp"

#include <cstddef>
#include <optional>

namespace cptree {

namespace constants {

/// c_h ~ 2 gamma^(2^h).
inline constexpr double gamma = 1.11625;
/// U_n ~ lambda n^(-3/2) rho^(-n).
inline constexpr double rho = 0.40270;
inline constexpr double kappa = 3.13699;
/// Defined through kappa so that kappa * lambda = 1 holds exactly; prints as 0.31878.
inline constexpr double lambda = 1.0 / kappa;
/// Root of alpha ln(2e/alpha) = 1 on (2, inf); random BST height / ln n.
inline constexpr double alpha = 4.31107;
inline constexpr double beta = 3.0 * alpha / (2.0 * alpha - 2.0);

}  // namespace constants

struct PaperConstants {
    double gamma = constants::gamma;
    double lambda = constants::lambda;
    double rho = constants::rho;
    double kappa = constants::kappa;
    double alpha = constants::alpha;
    double beta = constants::beta;
};

/// CDF of the theta law; 0 for x <= 0. Uses the reciprocal series below
/// sqrt(pi) and the Gaussian series from sqrt(pi) on, each truncated once a
/// term drops under 1e-17.
double theta_cdf(double x);

/// 4 pi^(5/2) / x^3 * sum_{j>=1} j^2 exp(-pi^2 j^2 / x^2)
double theta_cdf_reciprocal_series(double x);

/// sum_{j in Z} (1 - 2 j^2 x^2) exp(-j^2 x^2)
double theta_cdf_gaussian_series(double x);

/// Root of alpha ln(2e/alpha) = 1 on (2, 100), to 1e-12.
double solve_alpha();

/// 3 alpha / (2 alpha - 2).
double beta_from_alpha(double alpha);

/// (c_depth / 2)^(2^-depth), with ln c_depth taken from the exact integer.
/// Throws DomainError for depth < 4.
double estimate_gamma(std::size_t depth);

/// ln gamma to double precision, from
///   ln gamma = -ln 2 + sum_{k>=0} ln(1 - 1/c_k + 4/c_k^2) / 2^(k+1),
/// whose terms vanish doubly exponentially.
double log_gamma();

/// Aitken-accelerated limit of U_n / U_{n+1} at n_max. Throws DomainError for n_max < 100.
double estimate_rho(std::size_t n_max);

struct PiAsymptotic {
    double value = 0.0;
    /// ln of the approximation; finite even where value underflows.
    double log_value = 0.0;
};

/// Leading-order caterpillar probability. Throws DomainError for n < 2.
PiAsymptotic pi_asymptotic(std::size_t n, Model model);

/// Leading-order E{log2 ln f}: 2 sqrt(pi n), kappa sqrt(n), or alpha ln n.
/// Throws DomainError for n < 2.
double loglog_asymptotic(std::size_t n, Model model);

enum class RankMoment { mean, second_moment };

struct MeanRankAsymptotic {
    double log2log_mean = 0.0;
    bool exact_available = false;
    /// pi_n c_{n-1} (or pi_n c_{n-1}^2), when n <= exact_mean_rank_limit.
    std::optional<BigRat> mean;
};

inline constexpr std::size_t exact_mean_rank_limit = 32;

/// pi_n c_{n-1}^p with the exact pi_n; p = 1 for the mean, 2 for the second
/// moment. Above exact_mean_rank_limit only log2 ln of it is returned, using
/// ln c_{n-1} = 2^(n-1) ln gamma + ln 2. Throws DomainError for n < 4.
MeanRankAsymptotic mean_rank_asymptotic(std::size_t n, Model model, RankMoment moment = RankMoment::mean);

/// The log-domain path of mean_rank_asymptotic, for any n >= 4. It drops the
/// +1/(2 c_{n-1}) term of ln c_{n-1}, which is below 1e-13 from n = 9 on but
/// moves the result by about 2e-8 at n = 8.
double log2log_caterpillar_contribution(std::size_t n, Model model, RankMoment moment = RankMoment::mean);

/// pi_n c_{n-1}^p for any n >= 2 (no lower cut-off), exact.
BigRat caterpillar_contribution(std::size_t n, Model model, RankMoment moment = RankMoment::mean);

}  // namespace cptree
