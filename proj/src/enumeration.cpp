#include "cptree/enumeration.hpp"

#include "cptree/cp_rank.hpp"
#include "cptree/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cptree {

std::vector<BigNat> wedderburn_table(std::size_t n_max) {
    std::vector<BigNat> u(n_max + 1);
    if (n_max >= 1) {
        u[1] = 1;
    }
    for (std::size_t n = 2; n <= n_max; ++n) {
        BigNat total = 0;
        for (std::size_t j = 1; 2 * j < n; ++j) {
            total += u[j] * u[n - j];
        }
        if (n % 2 == 0) {
            const BigNat& half = u[n / 2];
            BigNat pairs = half * (half + 1);
            pairs /= 2;
            total += pairs;
        }
        u[n] = std::move(total);
    }
    return u;
}

BigNat wedderburn(std::size_t n) {
    if (n == 0) {
        throw DomainError("U_n is defined for n >= 1");
    }
    return wedderburn_table(n)[n];
}

BigNat catalan_tree_count(std::size_t n) {
    if (n == 0) {
        throw DomainError("tree counts are defined for n >= 1 leaves");
    }
    BigNat k = binomial(2 * n - 2, n - 1);
    k /= n;
    return k;
}

BigNat labeled_tree_count(std::size_t n) {
    if (n == 0) {
        throw DomainError("tree counts are defined for n >= 1 leaves");
    }
    if (n <= 2) {
        return 1;
    }
    BigNat result;
    mpz_2fac_ui(result.get_mpz_t(), 2 * n - 3);
    return result;
}

ShapeCatalog::ShapeCatalog(std::size_t max_leaves) : by_size_(max_leaves + 1) {
    if (max_leaves == 0) {
        throw DomainError("a shape catalog needs at least one leaf");
    }
    by_size_[1].push_back(leaf());
    for (std::size_t n = 2; n <= max_leaves; ++n) {
        auto& out = by_size_[n];
        for (std::size_t j = 1; 2 * j <= n; ++j) {
            const auto& big = by_size_[n - j];
            const auto& small = by_size_[j];
            if (2 * j < n) {
                for (const auto& a : big) {
                    for (const auto& b : small) {
                        out.push_back(node(a, b));
                    }
                }
            } else {
                for (std::size_t i = 0; i < small.size(); ++i) {
                    for (std::size_t k = i; k < small.size(); ++k) {
                        out.push_back(node(small[k], small[i]));
                    }
                }
            }
        }
        std::sort(out.begin(), out.end(), [](const TreeShape& a, const TreeShape& b) {
            return compare_shapes(a, b) < 0;
        });
    }
}

const std::vector<TreeShape>& ShapeCatalog::shapes(std::size_t n) const {
    if (n == 0 || n >= by_size_.size()) {
        throw DomainError("shape catalog covers 1.." + std::to_string(max_leaves()) + " leaves, asked for " +
                          std::to_string(n));
    }
    return by_size_[n];
}

std::vector<TreeShape> enumerate_shapes(std::size_t n, std::size_t cap) {
    if (n == 0) {
        throw DomainError("enumeration needs n >= 1");
    }
    if (n > cap) {
        throw DomainError("enumeration is capped at " + std::to_string(cap) + " leaves, asked for " +
                          std::to_string(n));
    }
    ShapeCatalog catalog(n);
    return catalog.shapes(n);
}

namespace {

// prod_{r=2}^{n} (r-1)^{d_r}
BigNat history_divisor(const ShapeMetrics& m) {
    BigNat divisor = 1;
    for (const auto& [r, count] : m.subtree_leaf_counts) {
        BigNat factor;
        mpz_ui_pow_ui(factor.get_mpz_t(), r - 1, count);
        divisor *= factor;
    }
    return divisor;
}

// Probability as numerator over a denominator that depends only on (n, model):
//   uniform-unordered  1 / U_n
//   uniform-labeled    (n!/2^s) / (2n-3)!!
//   yule               2^{n-1-s} * histories / (n-1)!
struct Weighting {
    Model law;
    std::size_t n;
    BigNat denominator;
    BigNat n_factorial;
    BigNat n_minus_1_factorial;

    Weighting(Model model, std::size_t leaves) : law(shape_law(model)), n(leaves) {
        n_factorial = factorial(n);
        n_minus_1_factorial = factorial(n - 1);
        switch (law) {
            case Model::uniform_unordered:
                denominator = wedderburn(n);
                break;
            case Model::uniform_labeled:
                denominator = labeled_tree_count(n);
                break;
            default:
                denominator = n_minus_1_factorial;
                break;
        }
    }

    BigNat numerator(const ShapeMetrics& m) const {
        switch (law) {
            case Model::uniform_unordered:
                return 1;
            case Model::uniform_labeled: {
                BigNat labelings = n_factorial;
                mpz_fdiv_q_2exp(labelings.get_mpz_t(), labelings.get_mpz_t(), m.symmetric_nodes);
                return labelings;
            }
            default: {
                BigNat histories = n_minus_1_factorial / history_divisor(m);
                mpz_mul_2exp(histories.get_mpz_t(), histories.get_mpz_t(), n - 1 - m.symmetric_nodes);
                return histories;
            }
        }
    }
};

// Neumaier's compensated sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            correction_ += (sum_ - t) + x;
        } else {
            correction_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

}  // namespace

BigRat shape_probability(const TreeShape& t, Model model) {
    const ShapeMetrics m = metrics(t);
    const Weighting weighting(model, m.leaves);
    BigRat p(weighting.numerator(m), weighting.denominator);
    p.canonicalize();
    return p;
}

BigNat labeled_histories(const TreeShape& t) {
    const ShapeMetrics m = metrics(t);
    return factorial(m.leaves - 1) / history_divisor(m);
}

BigRat caterpillar_probability(std::size_t n, Model model) {
    if (n < 2) {
        throw DomainError("caterpillar probability needs n >= 2");
    }
    BigRat p;
    switch (shape_law(model)) {
        case Model::uniform_unordered:
            p = BigRat(BigNat(1), wedderburn(n));
            break;
        case Model::uniform_labeled:
            p = BigRat(pow2(n - 2), catalan_tree_count(n));
            break;
        default:
            p = BigRat(pow2(n - 2), factorial(n - 1));
            break;
    }
    p.canonicalize();
    return p;
}

MomentsReport exact_moments(std::size_t n, Model model, const MomentsLimits& limits) {
    if (n < 2 || n > limits.max_leaves) {
        throw DomainError("exact moments need 2 <= n <= " + std::to_string(limits.max_leaves) + ", got " +
                          std::to_string(n));
    }
    const ShapeCatalog catalog(n);
    return exact_moments(catalog, n, model, limits);
}

MomentsReport exact_moments(const ShapeCatalog& catalog, std::size_t n, Model model, const MomentsLimits& limits) {
    if (n < 2 || n > limits.max_leaves) {
        throw DomainError("exact moments need 2 <= n <= " + std::to_string(limits.max_leaves) + ", got " +
                          std::to_string(n));
    }
    const auto& shapes = catalog.shapes(n);
    const Weighting weighting(model, n);
    const bool with_ranks = n <= limits.rank_moments_cap;

    RankCache ranks;
    BigNat sum_weight = 0;
    BigNat sum_f = 0;
    BigNat sum_f2 = 0;
    BigNat sum_height = 0;
    BigNat caterpillar_weight = 0;
    CompensatedSum loglog;

    for (const auto& t : shapes) {
        const ShapeMetrics m = metrics(t);
        const BigNat w = weighting.numerator(m);
        sum_weight += w;
        sum_height += w * m.height;
        if (m.height + 1 == n) {
            caterpillar_weight = w;
        }
        if (with_ranks) {
            const BigNat& f = ranks.rank(t);
            const BigNat wf = w * f;
            sum_f += wf;
            sum_f2 += wf * f;
        }
        loglog.add(BigRat(w, weighting.denominator).get_d() * double_log_rank(t));
    }
    if (sum_weight != weighting.denominator) {
        throw std::logic_error("shape weights do not sum to the model total");
    }

    const BigNat& den = weighting.denominator;
    MomentsReport report;
    report.n = n;
    report.model = model;
    report.e_height = BigRat(sum_height, den);
    report.e_height.canonicalize();
    report.caterpillar_prob = BigRat(caterpillar_weight, den);
    report.caterpillar_prob.canonicalize();
    report.e_loglog_f = loglog.value();
    if (with_ranks) {
        BigRat e_f(sum_f, den);
        BigRat e_f2(sum_f2, den);
        e_f.canonicalize();
        e_f2.canonicalize();
        report.v_f = e_f2 - e_f * e_f;
        report.e_f = std::move(e_f);
        report.e_f2 = std::move(e_f2);
    }
    return report;
}

}  // namespace cptree
