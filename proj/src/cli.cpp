#include "cptree/cli.hpp"

#include "cptree/asymptotics.hpp"
#include "cptree/bignum.hpp"
#include "cptree/cp_rank.hpp"
#include "cptree/enumeration.hpp"
#include "cptree/errors.hpp"
#include "cptree/model.hpp"
#include "cptree/newick.hpp"
#include "cptree/sampling.hpp"
#include "cptree/tree_shape.hpp"
#include "json_writer.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cptree {

namespace {

using detail::JsonWriter;

// Malformed arguments that CLI11 itself cannot see; exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::map<std::string, Model> model_map{
    {"uniform-unordered", Model::uniform_unordered},
    {"uniform-labeled", Model::uniform_labeled},
    {"yule", Model::yule_harding},
    {"uniform-ordered", Model::uniform_ordered},
};

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

void optional_fraction(JsonWriter& json, const std::optional<BigRat>& value) {
    if (value) {
        json.string(to_fraction(*value));
    } else {
        json.null();
    }
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
    auto parse_one = [&](std::string_view part) {
        std::size_t value = 0;
        auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (part.empty() || ec != std::errc{} || end != part.data() + part.size()) {
            throw UsageError("--n-range: expected a:b with naturals a <= b, got '" + text + "'");
        }
        return value;
    };
    const auto colon = text.find(':');
    const std::size_t lo = parse_one(std::string_view(text).substr(0, colon));
    const std::size_t hi =
        colon == std::string::npos ? lo : parse_one(std::string_view(text).substr(colon + 1));
    if (lo > hi) throw UsageError("--n-range: empty range '" + text + "'");
    return {lo, hi};
}

// ---- rank / unrank -------------------------------------------------------

int cmd_rank(const std::string& source, std::ostream& out, std::istream& in) {
    std::string text = source;
    if (source == "-") text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    out << to_decimal(rank(parse_newick(text))) << '\n';
    return 0;
}

int cmd_unrank(const std::string& k, std::ostream& out) {
    out << to_newick(unrank(parse_decimal(k))) << '\n';
    return 0;
}

// ---- seq ----------------------------------------------------------------

int cmd_seq(const std::string& which, std::size_t h_max, const std::string& format, std::ostream& out) {
    std::vector<std::string> columns;
    std::vector<std::pair<std::size_t, std::vector<BigNat>>> rows;
    if (which == "c") {
        columns = {"h", "c"};
        const ExtremalSeqs seqs = extremal_seqs(h_max);
        for (std::size_t h = 0; h <= h_max; ++h) rows.push_back({h, {seqs.c_at(h)}});
    } else if (which == "d") {
        columns = {"h", "d"};
        if (h_max < 2) throw DomainError("seq d starts at h = 2, got --max " + std::to_string(h_max));
        const ExtremalSeqs seqs = extremal_seqs(h_max);
        for (std::size_t h = 2; h <= h_max; ++h) rows.push_back({h, {seqs.d_at(h)}});
    } else {
        columns = {"h", "at_most", "exactly"};
        for (std::size_t h = 0; h <= h_max; ++h) {
            rows.push_back({h,
                            {count_by_height(h, HeightCountMode::at_most),
                             count_by_height(h, HeightCountMode::exactly)}});
        }
    }

    if (format == "json") {
        JsonWriter json(out);
        json.begin_object().key("sequence").string(which).key("rows").begin_array();
        for (const auto& [h, values] : rows) {
            json.begin_object().key("h").integer(h);
            for (std::size_t i = 0; i < values.size(); ++i) json.key(columns[i + 1]).string(to_decimal(values[i]));
            json.end_object();
        }
        json.end_array().end_object().finish();
        return 0;
    }
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& [h, values] : rows) {
        out << h;
        for (const BigNat& v : values) out << ',' << to_decimal(v);
        out << '\n';
    }
    return 0;
}

// ---- enumerate / probs ----------------------------------------------------

int cmd_enumerate(std::size_t n, std::size_t cap, const std::string& format, std::ostream& out) {
    const std::vector<TreeShape> shapes = enumerate_shapes(n, cap);
    RankCache ranks;
    if (format == "json") {
        JsonWriter json(out);
        json.begin_object().key("leaves").integer(n).key("shapes").begin_array();
        for (const TreeShape& t : shapes) {
            json.begin_object()
                .key("rank")
                .string(to_decimal(ranks.rank(t)))
                .key("height")
                .integer(t.height())
                .key("newick")
                .string(to_newick(t))
                .end_object();
        }
        json.end_array().end_object().finish();
        return 0;
    }
    out << "rank,height,newick\n";
    for (const TreeShape& t : shapes) {
        out << to_decimal(ranks.rank(t)) << ',' << t.height() << ',' << csv_field(to_newick(t)) << '\n';
    }
    return 0;
}

int cmd_probs(std::size_t n, std::size_t cap, const std::string& model_text, const std::string& format,
              std::ostream& out) {
    std::vector<Model> models;
    if (model_text == "all") {
        models.assign(distinct_models.begin(), distinct_models.end());
    } else {
        models.push_back(model_map.at(model_text));
    }
    const std::vector<TreeShape> shapes = enumerate_shapes(n, cap);
    RankCache ranks;

    if (format == "json") {
        JsonWriter json(out);
        json.begin_object().key("leaves").integer(n).key("shapes").begin_array();
        for (const TreeShape& t : shapes) {
            json.begin_object()
                .key("rank")
                .string(to_decimal(ranks.rank(t)))
                .key("height")
                .integer(t.height())
                .key("newick")
                .string(to_newick(t))
                .key("probability")
                .begin_object();
            for (Model m : models) json.key(model_name(m)).string(to_fraction(shape_probability(t, m)));
            json.end_object().end_object();
        }
        json.end_array().end_object().finish();
        return 0;
    }
    out << "rank,height,newick";
    if (models.size() == 1) {
        out << ",probability";
    } else {
        for (Model m : models) out << ',' << model_name(m);
    }
    out << '\n';
    for (const TreeShape& t : shapes) {
        out << to_decimal(ranks.rank(t)) << ',' << t.height() << ',' << csv_field(to_newick(t));
        for (Model m : models) out << ',' << to_fraction(shape_probability(t, m));
        out << '\n';
    }
    return 0;
}

// ---- moments / sample -----------------------------------------------------

int cmd_moments(std::size_t n, Model model, std::size_t rank_cap, std::ostream& out) {
    MomentsLimits limits;
    limits.rank_moments_cap = rank_cap;
    const MomentsReport report = exact_moments(n, model, limits);
    JsonWriter json(out);
    json.begin_object().key("n").integer(report.n).key("model").string(model_name(report.model));
    json.key("e_f");
    optional_fraction(json, report.e_f);
    json.key("e_f2");
    optional_fraction(json, report.e_f2);
    json.key("v_f");
    optional_fraction(json, report.v_f);
    json.key("e_loglog_f").real(report.e_loglog_f);
    json.key("e_height").string(to_fraction(report.e_height));
    json.key("e_height_real").real(report.e_height.get_d());
    json.key("caterpillar_prob").string(to_fraction(report.caterpillar_prob));
    json.end_object().finish();
    return 0;
}

struct SampleArgs {
    std::string model;
    std::size_t leaves = 0;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    bool histogram = false;
    bool height_only = false;
    std::string histogram_csv;
    unsigned threads = 0;
};

int cmd_sample(const SampleArgs& args, std::ostream& out) {
    McOptions options;
    options.with_histogram = args.histogram || !args.histogram_csv.empty();
    options.height_only = args.height_only;
    options.threads = args.threads;
    const McReport report = monte_carlo(model_map.at(args.model), args.leaves, args.count, args.seed, options);

    if (!args.histogram_csv.empty()) {
        std::ofstream file(args.histogram_csv);
        if (!file) throw DomainError("cannot open " + args.histogram_csv + " for writing");
        file << "rank,count\n";
        for (const auto& [r, c] : *report.shape_histogram) file << to_decimal(r) << ',' << c << '\n';
        if (!file) throw DomainError("write to " + args.histogram_csv + " failed");
    }

    JsonWriter json(out);
    json.begin_object()
        .key("model")
        .string(model_name(report.model))
        .key("n")
        .integer(report.n)
        .key("samples")
        .integer(report.samples)
        .key("seed")
        .integer(report.seed);
    json.key("mean_loglog");
    report.mean_loglog ? json.real(*report.mean_loglog) : json.null();
    json.key("se_loglog");
    report.se_loglog ? json.real(*report.se_loglog) : json.null();
    json.key("mean_height").real(report.mean_height);
    json.key("se_height").real(report.se_height);
    json.key("caterpillar_freq").real(report.caterpillar_freq);
    if (args.histogram && report.shape_histogram) {
        json.key("shape_histogram").begin_array();
        for (const auto& [r, c] : *report.shape_histogram) {
            json.begin_object().key("rank").string(to_decimal(r)).key("count").integer(c).end_object();
        }
        json.end_array();
    }
    json.end_object().finish();
    return 0;
}

// ---- asym ---------------------------------------------------------------

// Exact fractions are printed only up to these n; beyond them the text is unwieldy
// (pi_32 c_31 alone has about 10^8 digits).
constexpr std::size_t exact_pi_print_limit = 64;
constexpr std::size_t exact_mean_rank_print_limit = 20;

struct AsymArgs {
    std::string what;
    std::string model;
    std::string n_range;
    std::optional<double> x;
    bool variance = false;
};

int cmd_asym(const AsymArgs& args, std::ostream& out) {
    // Buffered so that a domain error part-way leaves stdout empty.
    std::ostringstream doc;
    JsonWriter json(doc);
    if (args.what == "constants") {
        const double alpha = solve_alpha();
        json.begin_object()
            .key("what")
            .string("constants")
            .key("gamma")
            .real(constants::gamma)
            .key("lambda")
            .real(constants::lambda)
            .key("rho")
            .real(constants::rho)
            .key("kappa")
            .real(constants::kappa)
            .key("alpha")
            .real(constants::alpha)
            .key("beta")
            .real(constants::beta)
            .key("derived")
            .begin_object()
            .key("alpha")
            .real(alpha)
            .key("beta")
            .real(beta_from_alpha(alpha))
            .key("gamma")
            .real(estimate_gamma(20))
            .key("rho")
            .real(estimate_rho(2000))
            .end_object()
            .end_object()
            .finish();
        out << doc.str();
        return 0;
    }
    if (args.what == "theta-cdf") {
        if (!args.x) throw UsageError("asym --what theta-cdf needs --x");
        json.begin_object()
            .key("what")
            .string("theta-cdf")
            .key("x")
            .real(*args.x)
            .key("value")
            .real(theta_cdf(*args.x))
            .end_object()
            .finish();
        out << doc.str();
        return 0;
    }

    if (args.model.empty()) throw UsageError("asym --what " + args.what + " needs --model");
    if (args.n_range.empty()) throw UsageError("asym --what " + args.what + " needs --n-range");
    const Model model = model_map.at(args.model);
    const auto [lo, hi] = parse_range(args.n_range);

    json.begin_object().key("what").string(args.what).key("model").string(model_name(model));
    if (args.what == "mean-rank") json.key("moment").string(args.variance ? "second" : "first");
    json.key("rows").begin_array();
    for (std::size_t n = lo; n <= hi; ++n) {
        json.begin_object().key("n").integer(n);
        if (args.what == "loglog") {
            json.key("value").real(loglog_asymptotic(n, model));
        } else if (args.what == "pi") {
            const PiAsymptotic pi = pi_asymptotic(n, model);
            json.key("value").real(pi.value).key("log_value").real(pi.log_value).key("exact");
            if (n <= exact_pi_print_limit) {
                json.string(to_fraction(caterpillar_probability(n, model)));
            } else {
                json.null();
            }
        } else {
            const MeanRankAsymptotic m =
                mean_rank_asymptotic(n, model, args.variance ? RankMoment::second_moment : RankMoment::mean);
            json.key("log2log_value").real(m.log2log_mean).key("exact_available").boolean(m.exact_available);
            json.key("value");
            optional_fraction(json, n <= exact_mean_rank_print_limit ? m.mean : std::nullopt);
        }
        json.end_object();
    }
    json.end_array();
    json.end_object().finish();
    out << doc.str();
    return 0;
}

}  // namespace

// ---- figures --------------------------------------------------------------

void write_figure_csv(int which, std::ostream& out) {
    if (which < 1 || which > 3) throw DomainError("figure must be 1, 2 or 3, got " + std::to_string(which));
    const std::size_t n_max = which == 1 ? 20 : 10;
    const ShapeCatalog catalog(n_max);
    MomentsLimits limits;
    limits.rank_moments_cap = which == 1 ? 0 : n_max;

    switch (which) {
        case 1:
            out << "model,n,e_loglog_f,e_height,e_height_real,loglog_asymptotic\n";
            break;
        case 2:
            out << "model,n,e_f,log2log_e_f,asymptotic_mean,log2log_asymptotic_mean\n";
            break;
        default:
            out << "model,n,v_f,log2log_v_f,asymptotic_variance,log2log_asymptotic_variance\n";
    }
    for (Model model : distinct_models) {
        for (std::size_t n = 2; n <= n_max; ++n) {
            const MomentsReport r = exact_moments(catalog, n, model, limits);
            out << model_name(model) << ',' << n << ',';
            if (which == 1) {
                out << format_real(r.e_loglog_f) << ',' << to_fraction(r.e_height) << ','
                    << format_real(r.e_height.get_d()) << ',' << format_real(loglog_asymptotic(n, model));
            } else {
                const BigRat& exact = which == 2 ? *r.e_f : *r.v_f;
                const BigRat asymptotic =
                    caterpillar_contribution(n, model, which == 2 ? RankMoment::mean : RankMoment::second_moment);
                out << to_fraction(exact) << ',' << format_real(log2_ln(exact)) << ',' << to_fraction(asymptotic)
                    << ',' << format_real(log2_ln(asymptotic));
            }
            out << '\n';
        }
    }
}

// ---- entry point ----------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
    CLI::App app{"Integer ranks of binary tree shapes: exact enumeration, model probabilities, "
                 "sampling and asymptotics.\nlog2log quantities use log2(ln x): natural inner logarithm.",
                 "cptree"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "cptree 1.0");

    std::vector<std::string> model_names;
    for (const auto& entry : model_map) model_names.push_back(entry.first);
    const auto model_check = CLI::IsMember(model_names);

    std::string newick_text;
    auto* rank_cmd = app.add_subcommand("rank", "Rank of a Newick tree ('-' reads standard input)");
    rank_cmd->add_option("newick", newick_text, "Newick string or -")->required();

    std::string k_text;
    auto* unrank_cmd = app.add_subcommand("unrank", "Newick shape with the given rank");
    unrank_cmd->add_option("k", k_text, "Positive decimal rank")->required();

    std::string seq_which;
    std::size_t seq_max = 0;
    std::string seq_format = "csv";
    auto* seq_cmd = app.add_subcommand("seq", "Caterpillar ranks c_h, pseudocaterpillar ranks d_h, or shape "
                                              "counts by height");
    seq_cmd->add_option("which", seq_which)->required()->check(CLI::IsMember({"c", "d", "height-counts"}));
    seq_cmd->add_option("--max", seq_max, "Largest height")->required();
    seq_cmd->add_option("--format", seq_format)->check(CLI::IsMember({"csv", "json"}));

    std::size_t enum_leaves = 0;
    std::size_t enum_cap = default_enumeration_cap;
    std::string enum_format = "csv";
    auto* enum_cmd = app.add_subcommand("enumerate", "All shapes with n leaves in rank order");
    enum_cmd->add_option("--leaves", enum_leaves)->required();
    enum_cmd->add_option("--format", enum_format)->check(CLI::IsMember({"csv", "json"}));
    enum_cmd->add_option("--cap", enum_cap, "Refuse n above this")->capture_default_str();

    std::size_t probs_leaves = 0;
    std::size_t probs_cap = default_enumeration_cap;
    std::string probs_model;
    std::string probs_format = "csv";
    auto* probs_cmd = app.add_subcommand("probs", "Exact probability of every shape with n leaves");
    probs_cmd->add_option("--leaves", probs_leaves)->required();
    probs_cmd->add_option("--model", probs_model, "Model name, or 'all' for the three distinct laws")
        ->required()
        ->check(CLI::IsMember([&] {
            auto names = model_names;
            names.push_back("all");
            return names;
        }()));
    probs_cmd->add_option("--format", probs_format)->check(CLI::IsMember({"csv", "json"}));
    probs_cmd->add_option("--cap", probs_cap, "Refuse n above this")->capture_default_str();

    std::size_t mom_leaves = 0;
    std::string mom_model;
    std::size_t mom_rank_cap = default_enumeration_cap;
    auto* mom_cmd = app.add_subcommand("moments", "Exact E{f}, V{f}, E{log2 ln f}, E{H} and pi_n");
    mom_cmd->add_option("--leaves", mom_leaves)->required();
    mom_cmd->add_option("--model", mom_model)->required()->check(model_check);
    mom_cmd->add_option("--rank-cap", mom_rank_cap, "Omit rank moments above this n")->capture_default_str();

    SampleArgs sample;
    auto* sample_cmd = app.add_subcommand("sample", "Seeded Monte Carlo estimates");
    sample_cmd->add_option("--model", sample.model)->required()->check(model_check);
    sample_cmd->add_option("--leaves", sample.leaves)->required();
    sample_cmd->add_option("--count", sample.count)->required();
    sample_cmd->add_option("--seed", sample.seed)->capture_default_str();
    auto* hist_flag = sample_cmd->add_flag("--histogram", sample.histogram, "Include rank counts in the report");
    auto* hist_csv = sample_cmd->add_option("--histogram-csv", sample.histogram_csv, "Write rank,count CSV here");
    sample_cmd->add_flag("--height-only", sample.height_only, "Heights only; no ranks")
        ->excludes(hist_flag)
        ->excludes(hist_csv);
    sample_cmd->add_option("--threads", sample.threads, "Worker threads, 0 = all cores (output is unaffected)");

    AsymArgs asym;
    double asym_x = 0.0;
    auto* asym_cmd = app.add_subcommand("asym", "Asymptotic approximations, theta CDF and constants");
    asym_cmd->add_option("--what", asym.what)
        ->required()
        ->check(CLI::IsMember({"loglog", "pi", "mean-rank", "theta-cdf", "constants"}));
    asym_cmd->add_option("--model", asym.model)->check(model_check);
    asym_cmd->add_option("--n-range", asym.n_range, "a:b or a");
    auto* x_opt = asym_cmd->add_option("--x", asym_x, "Argument of theta-cdf");
    asym_cmd->add_flag("--variance", asym.variance, "mean-rank: second moment pi_n c_{n-1}^2 (exact fractions printed for n <= 20)");

    int fig_which = 0;
    std::string fig_out = "-";
    auto* fig_cmd = app.add_subcommand("figures", "CSV behind figure 1, 2 or 3");
    fig_cmd->add_option("--which", fig_which)->required()->check(CLI::IsMember({1, 2, 3}));
    fig_cmd->add_option("--out", fig_out, "Output path, '-' for standard output")->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    if (args.empty()) argv.push_back("cptree");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "cptree: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*rank_cmd) return cmd_rank(newick_text, out, in);
        if (*unrank_cmd) return cmd_unrank(k_text, out);
        if (*seq_cmd) return cmd_seq(seq_which, seq_max, seq_format, out);
        if (*enum_cmd) return cmd_enumerate(enum_leaves, enum_cap, enum_format, out);
        if (*probs_cmd) return cmd_probs(probs_leaves, probs_cap, probs_model, probs_format, out);
        if (*mom_cmd) return cmd_moments(mom_leaves, model_map.at(mom_model), mom_rank_cap, out);
        if (*sample_cmd) return cmd_sample(sample, out);
        if (*asym_cmd) {
            if (*x_opt) asym.x = asym_x;
            return cmd_asym(asym, out);
        }
        if (fig_out == "-") {
            write_figure_csv(fig_which, out);
            return 0;
        }
        std::ostringstream csv;
        write_figure_csv(fig_which, csv);
        std::ofstream file(fig_out);
        if (!file) throw DomainError("cannot open " + fig_out + " for writing");
        file << csv.str();
        if (!file) throw DomainError("write to " + fig_out + " failed");
        return 0;
    } catch (const UsageError& e) {
        err << "cptree: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "cptree: " << e.what() << '\n';
        return 1;
    } catch (const NewickError& e) {
        err << "cptree: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace cptree
