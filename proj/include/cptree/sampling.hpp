#pragma once

// Seeded random shapes under the four models, and Monte Carlo estimates of
// rank and height statistics.
//
// Splits are drawn by exact inversion: a uniform integer in [0, total) is
// walked through exact integer split weights, so no floating-point bias
// enters the shape law.
//
//   uniform-labeled / uniform-ordered  left size i w.p. K_{i-1} K_{m-i-1} / K_{m-1}
//   uniform-unordered                  unordered size pair {j, m-j} w.p. proportional
//                                      to the number of shape multisets; equal halves
//                                      by accept/reject
//   yule                               left size uniform on 1..m-1

#include "cptree/bignum.hpp"
#include "cptree/model.hpp"
#include "cptree/rng.hpp"
#include "cptree/tree_shape.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace cptree {

/// Count tables for one (model, n). Immutable after construction and safe to
/// share between threads; each thread brings its own CounterRng.
class ShapeSampler {
public:
    ShapeSampler(Model model, std::size_t n);

    Model model() const noexcept { return model_; }
    std::size_t leaves() const noexcept { return n_; }

    TreeShape draw(CounterRng& rng) const;

    /// Height of the shape draw() would return for the same generator state.
    /// Only the uniform-unordered law builds the shape, since its equal-halves
    /// rejection step compares subtrees.
    std::size_t draw_height(CounterRng& rng) const;

private:
    Model model_;
    std::size_t n_;
    // uniform-labeled: catalan_[m] = K_{m-1}; uniform-unordered: wedderburn_[m] = U_m.
    std::vector<BigNat> catalan_;
    std::vector<BigNat> wedderburn_;
    // Word-sized copies of the leading table entries.
    std::vector<std::uint64_t> catalan_small_;
    std::vector<std::uint64_t> wedderburn_small_;

    std::size_t binary_split(std::size_t m, CounterRng& rng) const;
    std::size_t catalan_split(std::size_t m, CounterRng& rng) const;
    std::size_t otter_split(std::size_t m, CounterRng& rng) const;
    TreeShape build(std::size_t m, CounterRng& rng) const;
    TreeShape build_otter(std::size_t m, CounterRng& rng) const;
    std::size_t build_height(std::size_t m, CounterRng& rng) const;
};

/// One shape; throws DomainError for n = 0.
TreeShape sample_shape(Model model, std::size_t n, CounterRng& rng);

/// Samples are drawn in blocks of this size; block b uses stream (seed, b).
inline constexpr std::size_t sample_block_size = 4096;

struct McOptions {
    bool with_histogram = false;
    /// Skip rank statistics (mean_loglog/se_loglog stay empty, no histogram).
    bool height_only = false;
    /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
    unsigned threads = 0;
};

struct McReport {
    Model model = Model::uniform_labeled;
    std::size_t n = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::optional<double> mean_loglog;
    std::optional<double> se_loglog;
    double mean_height = 0.0;
    double se_height = 0.0;
    double caterpillar_freq = 0.0;
    /// rank -> count; counts sum to samples.
    std::optional<std::map<BigNat, std::uint64_t>> shape_histogram;
};

/// Requires n >= 2 and samples >= 2.
McReport monte_carlo(Model model, std::size_t n, std::size_t samples, std::uint64_t seed,
                     const McOptions& options = {});

/// H / scale: 2 sqrt(n) for the uniform labeled/ordered laws,
/// kappa sqrt(n / pi) for uniform-unordered, ln n for yule.
double height_scale(Model model, std::size_t n);

/// Scaled heights in sample order; requires n >= 2 and samples >= 2.
std::vector<double> height_scaled_samples(Model model, std::size_t n, std::size_t samples, std::uint64_t seed,
                                          unsigned threads = 0);

}  // namespace cptree
