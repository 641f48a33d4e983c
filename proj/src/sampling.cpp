#include "cptree/sampling.hpp"

#include "cptree/asymptotics.hpp"
#include "cptree/cp_rank.hpp"
#include "cptree/enumeration.hpp"
#include "cptree/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

namespace cptree {

namespace {

constexpr std::uint64_t small_table_limit = std::uint64_t{1} << 63;

// Leading entries of a count table that fit below 2^63, so products of two
// entries summing to another entry never overflow.
std::vector<std::uint64_t> word_prefix(const std::vector<BigNat>& table) {
    std::vector<std::uint64_t> out;
    for (const auto& v : table) {
        if (!v.fits_ulong_p() || v.get_ui() >= small_table_limit) {
            break;
        }
        out.push_back(v.get_ui());
    }
    return out;
}

}  // namespace

ShapeSampler::ShapeSampler(Model model, std::size_t n) : model_(model), n_(n) {
    if (n == 0) {
        throw DomainError("sampling needs n >= 1");
    }
    switch (shape_law(model)) {
        case Model::uniform_labeled:
            catalan_.resize(n + 1);
            for (std::size_t m = 1; m <= n; ++m) {
                catalan_[m] = catalan_tree_count(m);
            }
            catalan_small_ = word_prefix(catalan_);
            break;
        case Model::uniform_unordered:
            wedderburn_ = wedderburn_table(n);
            wedderburn_small_ = word_prefix(wedderburn_);
            break;
        default:
            break;
    }
}

std::size_t ShapeSampler::binary_split(std::size_t m, CounterRng& rng) const {
    if (shape_law(model_) == Model::yule_harding) {
        return 1 + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(m - 1)));
    }
    return catalan_split(m, rng);
}

// Candidates are visited in the order 1, m-1, 2, m-2, ...; the weight mass sits
// at both ends, so the walk is short on average.
std::size_t ShapeSampler::catalan_split(std::size_t m, CounterRng& rng) const {
    if (m < catalan_small_.size()) {
        std::uint64_t u = rng.below(catalan_small_[m]);
        for (std::size_t k = 1; 2 * k <= m; ++k) {
            const std::uint64_t w = catalan_small_[k] * catalan_small_[m - k];
            if (u < w) {
                return k;
            }
            u -= w;
            if (2 * k != m) {
                if (u < w) {
                    return m - k;
                }
                u -= w;
            }
        }
        throw std::logic_error("catalan split weights do not cover the total");
    }
    BigNat u = rng.below(catalan_[m]);
    BigNat w;
    for (std::size_t k = 1; 2 * k <= m; ++k) {
        w = catalan_[k] * catalan_[m - k];
        if (u < w) {
            return k;
        }
        u -= w;
        if (2 * k != m) {
            if (u < w) {
                return m - k;
            }
            u -= w;
        }
    }
    throw std::logic_error("catalan split weights do not cover the total");
}

// Smaller part j of the unordered size pair {j, m - j}.
std::size_t ShapeSampler::otter_split(std::size_t m, CounterRng& rng) const {
    if (m < wedderburn_small_.size()) {
        const auto& u_small = wedderburn_small_;
        std::uint64_t u = rng.below(u_small[m]);
        for (std::size_t j = 1; 2 * j <= m; ++j) {
            const std::uint64_t w =
                2 * j < m ? u_small[j] * u_small[m - j] : u_small[j] * (u_small[j] + 1) / 2;
            if (u < w) {
                return j;
            }
            u -= w;
        }
        throw std::logic_error("unordered split weights do not cover the total");
    }
    BigNat u = rng.below(wedderburn_[m]);
    BigNat w;
    for (std::size_t j = 1; 2 * j <= m; ++j) {
        if (2 * j < m) {
            w = wedderburn_[j] * wedderburn_[m - j];
        } else {
            w = wedderburn_[j] * (wedderburn_[j] + 1);
            w /= 2;
        }
        if (u < w) {
            return j;
        }
        u -= w;
    }
    throw std::logic_error("unordered split weights do not cover the total");
}

TreeShape ShapeSampler::build(std::size_t m, CounterRng& rng) const {
    if (m == 1) {
        return leaf();
    }
    if (shape_law(model_) == Model::uniform_unordered) {
        return build_otter(m, rng);
    }
    const std::size_t left = binary_split(m, rng);
    TreeShape a = build(left, rng);
    TreeShape b = build(m - left, rng);
    return node(std::move(a), std::move(b));
}

TreeShape ShapeSampler::build_otter(std::size_t m, CounterRng& rng) const {
    if (m == 1) {
        return leaf();
    }
    const std::size_t small = otter_split(m, rng);
    if (2 * small < m) {
        TreeShape a = build_otter(m - small, rng);
        TreeShape b = build_otter(small, rng);
        return node(std::move(a), std::move(b));
    }
    // Ordered pairs of independent uniform halves hit each unequal multiset
    // twice and each equal one once; halving the unequal acceptance evens it out.
    while (true) {
        TreeShape a = build_otter(small, rng);
        TreeShape b = build_otter(small, rng);
        if (compare_shapes(a, b) == 0 || rng.coin()) {
            return node(std::move(a), std::move(b));
        }
    }
}

std::size_t ShapeSampler::build_height(std::size_t m, CounterRng& rng) const {
    if (m == 1) {
        return 0;
    }
    const std::size_t left = binary_split(m, rng);
    const std::size_t ha = build_height(left, rng);
    const std::size_t hb = build_height(m - left, rng);
    return 1 + std::max(ha, hb);
}

TreeShape ShapeSampler::draw(CounterRng& rng) const { return build(n_, rng); }

std::size_t ShapeSampler::draw_height(CounterRng& rng) const {
    if (shape_law(model_) == Model::uniform_unordered) {
        return build_otter(n_, rng).height();
    }
    return build_height(n_, rng);
}

TreeShape sample_shape(Model model, std::size_t n, CounterRng& rng) { return ShapeSampler(model, n).draw(rng); }

namespace {

struct RunningStats {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const RunningStats& other) {
        if (other.count == 0) {
            return;
        }
        if (count == 0) {
            *this = other;
            return;
        }
        const double total = static_cast<double>(count + other.count);
        const double delta = other.mean - mean;
        mean += delta * static_cast<double>(other.count) / total;
        m2 += other.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(other.count) / total;
        count += other.count;
    }

    double standard_error() const {
        if (count < 2) {
            return 0.0;
        }
        const double variance = m2 / static_cast<double>(count - 1);
        return std::sqrt(variance / static_cast<double>(count));
    }
};

struct BlockResult {
    RunningStats loglog;
    RunningStats height;
    std::size_t caterpillars = 0;
    std::map<BigNat, std::uint64_t> histogram;
};

void validate_run(std::size_t n, std::size_t samples) {
    if (n < 2) {
        throw DomainError("Monte Carlo runs need n >= 2, got " + std::to_string(n));
    }
    if (samples < 2) {
        throw DomainError("Monte Carlo runs need at least 2 samples, got " + std::to_string(samples));
    }
}

unsigned worker_count(unsigned requested, std::size_t blocks) {
    unsigned threads = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
}

// Runs body(block_index) for every block on a pool of workers. Each block owns
// its output slot, so the result never depends on scheduling.
template <typename Body>
void for_each_block(std::size_t blocks, unsigned threads, Body body) {
    const unsigned workers = worker_count(threads, blocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) {
            body(b);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t b = next++; b < blocks; b = next++) {
                body(b);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace

McReport monte_carlo(Model model, std::size_t n, std::size_t samples, std::uint64_t seed, const McOptions& options) {
    validate_run(n, samples);
    const ShapeSampler sampler(model, n);
    const bool histogram = options.with_histogram && !options.height_only;
    const std::size_t blocks = (samples + sample_block_size - 1) / sample_block_size;
    std::vector<BlockResult> results(blocks);

    for_each_block(blocks, options.threads, [&](std::size_t b) {
        CounterRng rng(seed, b);
        BlockResult& out = results[b];
        const std::size_t begin = b * sample_block_size;
        const std::size_t end = std::min(samples, begin + sample_block_size);
        for (std::size_t s = begin; s < end; ++s) {
            std::size_t h = 0;
            if (options.height_only) {
                h = sampler.draw_height(rng);
            } else {
                const TreeShape t = sampler.draw(rng);
                h = t.height();
                out.loglog.add(double_log_rank(t));
                if (histogram) {
                    ++out.histogram[rank(t)];
                }
            }
            out.height.add(static_cast<double>(h));
            if (h + 1 == n) {
                ++out.caterpillars;
            }
        }
    });

    RunningStats loglog;
    RunningStats height;
    std::size_t caterpillars = 0;
    std::map<BigNat, std::uint64_t> merged;
    for (const auto& block : results) {
        loglog.merge(block.loglog);
        height.merge(block.height);
        caterpillars += block.caterpillars;
        for (const auto& [r, count] : block.histogram) {
            merged[r] += count;
        }
    }

    McReport report;
    report.model = model;
    report.n = n;
    report.samples = samples;
    report.seed = seed;
    report.mean_height = height.mean;
    report.se_height = height.standard_error();
    report.caterpillar_freq = static_cast<double>(caterpillars) / static_cast<double>(samples);
    if (!options.height_only) {
        report.mean_loglog = loglog.mean;
        report.se_loglog = loglog.standard_error();
    }
    if (histogram) {
        report.shape_histogram = std::move(merged);
    }
    return report;
}

double height_scale(Model model, std::size_t n) {
    const double size = static_cast<double>(n);
    switch (shape_law(model)) {
        case Model::uniform_labeled:
            return 2.0 * std::sqrt(size);
        case Model::uniform_unordered:
            return constants::kappa * std::sqrt(size / std::numbers::pi);
        default:
            return std::log(size);
    }
}

std::vector<double> height_scaled_samples(Model model, std::size_t n, std::size_t samples, std::uint64_t seed,
                                          unsigned threads) {
    validate_run(n, samples);
    const ShapeSampler sampler(model, n);
    const double scale = height_scale(model, n);
    const std::size_t blocks = (samples + sample_block_size - 1) / sample_block_size;
    std::vector<double> out(samples);
    for_each_block(blocks, threads, [&](std::size_t b) {
        CounterRng rng(seed, b);
        const std::size_t begin = b * sample_block_size;
        const std::size_t end = std::min(samples, begin + sample_block_size);
        for (std::size_t s = begin; s < end; ++s) {
            out[s] = static_cast<double>(sampler.draw_height(rng)) / scale;
        }
    });
    return out;
}

}  // namespace cptree
