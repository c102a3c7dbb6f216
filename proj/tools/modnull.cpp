// modnull: modularity null-model statistics from the command line.
//
// Exit codes: 0 success, 2 input validation error, 3 domain error, 1 anything else.
// Errors are reported as one JSON line {code, message, context} on stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "modnull/color_model.hpp"
#include "modnull/error.hpp"
#include "modnull/graph.hpp"
#include "modnull/graph_generators.hpp"
#include "modnull/modularity_stats.hpp"
#include "modnull/null_simulation.hpp"
#include "modnull/regularity_conditions.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace modnull;

constexpr std::uint64_t kDefaultSeed = 1;

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// nlohmann prints the shortest round-trip form; reports use a fixed 17 digits.
void write_json(std::ostream& out, const json& value, int indent, int depth = 0) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    const char* sep = indent > 0 ? "\n" : "";
    switch (value.type()) {
        case json::value_t::object: {
            if (value.empty()) {
                out << "{}";
                break;
            }
            out << '{' << sep;
            bool first = true;
            for (const auto& [key, item] : value.items()) {
                if (!first) out << ',' << sep;
                first = false;
                out << pad << json(key).dump() << (indent > 0 ? ": " : ":");
                write_json(out, item, indent, depth + 1);
            }
            out << sep << close_pad << '}';
            break;
        }
        case json::value_t::array: {
            if (value.empty()) {
                out << "[]";
                break;
            }
            out << '[' << sep;
            bool first = true;
            for (const auto& item : value) {
                if (!first) out << ',' << sep;
                first = false;
                out << pad;
                write_json(out, item, indent, depth + 1);
            }
            out << sep << close_pad << ']';
            break;
        }
        case json::value_t::number_float:
            out << format_double(value.get<double>());
            break;
        default:
            out << value.dump();
    }
}

std::string render_json(const json& value) {
    std::ostringstream out;
    write_json(out, value, 2);
    out << '\n';
    return out.str();
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open output file", path);
    out << text;
    if (!out) throw InputError("failed writing output file", path);
}

struct Options {
    std::string graph;
    std::string partition;
    std::string probs;
    std::optional<std::size_t> K;
    std::string standardize = "sigma";
    std::string sided = "upper";
    std::size_t reps = 0;
    std::optional<std::uint64_t> seed;
    std::string sizes;
    std::string model;
    std::size_t n = 0;
    std::string out;
    std::string summary;
    unsigned threads = 1;
    std::size_t paths = 50;
    double bn_power = 2.0;
};

std::uint64_t resolve_seed(const Options& o, json& config) {
    std::uint64_t seed = kDefaultSeed;
    std::string source = "default";
    if (o.seed) {
        seed = *o.seed;
        source = "flag";
    } else if (const char* env = std::getenv("MODNULL_SEED"); env && *env) {
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (errno != 0 || end == env || *end != '\0' || env[0] == '-') {
            throw InputError("MODNULL_SEED is not an unsigned 64-bit integer", env);
        }
        seed = v;
        source = "env";
    }
    config["master_seed"] = seed;
    config["seed_source"] = source;
    return seed;
}

Standardization parse_standardization(const std::string& s) {
    return s == "delta" ? Standardization::by_delta : Standardization::by_sigma;
}

const char* name(Standardization s) { return s == Standardization::by_sigma ? "sigma" : "delta"; }
const char* name(Sidedness s) { return s == Sidedness::upper ? "upper" : "two"; }

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != item.size() || item.front() == '-') {
            throw InputError("sizes must be comma-separated positive integers", text);
        }
        sizes.push_back(static_cast<std::size_t>(v));
    }
    if (sizes.empty()) throw InputError("no sizes given", "--sizes");
    return sizes;
}

Graph load_graph(const Options& o, json& config) {
    if (o.graph.empty()) throw InputError("missing required flag", "--graph");
    config["graph"] = o.graph;
    return read_edge_list_file(o.graph);
}

std::optional<Coloring> load_partition(const Options& o, const Graph* g, json& config) {
    if (o.partition.empty()) return std::nullopt;
    config["partition"] = o.partition;
    if (o.partition == "all-ones" && !std::filesystem::exists(o.partition)) {
        if (!g) throw InputError("all-ones partition needs a graph", "--partition");
        return Coloring(std::vector<Color>(g->num_vertices(), 1));
    }
    return read_partition_file(o.partition);
}

// Priority: --probs file, empirical frequencies of --partition, uniform over --K,
// then `fallback_uniform` colors if nonzero.
ColorDistribution resolve_distribution(const Options& o, const std::optional<Coloring>& partition, json& config,
                                       std::size_t fallback_uniform = 0) {
    if (!o.probs.empty()) {
        ColorDistribution d = read_probability_file(o.probs);
        if (o.K && *o.K != d.num_colors()) {
            throw InputError("--K disagrees with the probability file", "K=" + std::to_string(*o.K));
        }
        config["probabilities"] = "file:" + o.probs;
        config["K"] = d.num_colors();
        return d;
    }
    if (partition) {
        const std::size_t k = o.K ? *o.K : partition->max_color();
        config["probabilities"] = "empirical";
        config["K"] = k;
        return ColorDistribution::from_partition_counts(*partition, k);
    }
    const std::size_t k = o.K ? *o.K : fallback_uniform;
    if (k == 0) throw InputError("need --probs, --partition or --K", "distribution");
    config["probabilities"] = "uniform";
    config["K"] = k;
    return ColorDistribution::uniform(k);
}

json moments_json(const NullMoments& m) {
    json j;
    j["n"] = m.n;
    j["m"] = m.m;
    j["K"] = m.K;
    j["mu"] = m.mu;
    j["sigma2"] = m.sigma2;
    j["delta2"] = m.delta2;
    j["r1"] = m.r1;
    j["r2"] = m.r2;
    return j;
}

json conditions_json(const ConditionReport& r) {
    json j;
    j["n"] = r.n;
    j["m"] = r.m;
    j["kmax"] = r.kmax;
    j["stat_31"] = r.stat_31;
    j["stat_311"] = r.stat_311;
    j["stat_c1"] = r.stat_c1;
    j["holds_c1"] = r.holds_c1;
    j["implies_311"] = r.implies_311;
    return j;
}

std::string summary_path(const Options& o) {
    if (!o.summary.empty()) return o.summary;
    if (!o.out.empty() && o.out != "-") return o.out + ".summary.json";
    return {};
}

void require_threads(const Options& o) {
    if (o.threads == 0) throw InputError("--threads must be positive", "threads=0");
}

int run_compute(const Options& o) {
    json config;
    config["command"] = "compute";
    const Graph g = load_graph(o, config);
    const auto partition = load_partition(o, &g, config);
    const ColorDistribution d = resolve_distribution(o, partition, config);
    json out = moments_json(null_moments(g, d));
    if (partition) out["Q"] = modularity(g, *partition);
    out["config"] = config;
    emit(render_json(out), o.out);
    return 0;
}

int run_test(const Options& o) {
    json config;
    config["command"] = "test";
    const Graph g = load_graph(o, config);
    const auto partition = load_partition(o, &g, config);
    if (!partition) throw InputError("missing required flag", "--partition");
    const ColorDistribution d = resolve_distribution(o, partition, config);
    const Standardization st = parse_standardization(o.standardize);
    const Sidedness sided = o.sided == "two" ? Sidedness::two_sided : Sidedness::upper;
    config["standardize"] = name(st);
    config["sided"] = name(sided);

    const TestReport r = significance_test(g, *partition, d, sided, st);
    json out;
    out["Q"] = r.Q;
    out["mu"] = r.mu;
    out["sigma"] = r.sigma;
    out["delta"] = r.delta;
    out["z_sigma"] = r.z_sigma;
    out["z_delta"] = r.z_delta;
    out["p_value"] = r.p_value;
    out["sidedness"] = name(r.sidedness);
    out["standardization"] = name(r.standardization);
    if (g.num_vertices() >= 2) out["conditions"] = conditions_json(condition_statistics(g));
    out["config"] = config;
    emit(render_json(out), o.out);
    return 0;
}

int run_conditions(const Options& o) {
    json config;
    config["command"] = "conditions";
    const Graph g = load_graph(o, config);
    json out = conditions_json(condition_statistics(g));
    out["config"] = config;
    emit(render_json(out), o.out);
    return 0;
}

int run_null_sample(const Options& o) {
    require_threads(o);
    json config;
    config["command"] = "null-sample";
    const Graph g = load_graph(o, config);
    const auto partition = load_partition(o, &g, config);
    const ColorDistribution d = resolve_distribution(o, partition, config);
    SimulationOptions sim;
    sim.reps = o.reps ? o.reps : 10000;
    sim.master_seed = resolve_seed(o, config);
    sim.standardization = parse_standardization(o.standardize);
    sim.threads = o.threads;
    config["reps"] = sim.reps;
    config["standardize"] = name(sim.standardization);

    const NullSample s = simulate_null(g, d, sim);
    std::string csv = "replicate,seed,Q,z\n";
    for (std::size_t r = 0; r < s.q.size(); ++r) {
        csv += std::to_string(r) + ',' + std::to_string(replicate_seed(sim.master_seed, r)) + ',' +
               format_double(s.q[r]) + ',' + format_double(s.z[r]) + '\n';
    }
    emit(csv, o.out);

    json summary = moments_json(s.moments);
    summary["reps"] = sim.reps;
    summary["mean"] = s.mean;
    summary["variance"] = s.variance;
    summary["ks"] = s.ks;
    summary["config"] = config;
    if (const auto path = summary_path(o); !path.empty()) emit(render_json(summary), path);
    return 0;
}

StudyConfig study_config(const Options& o, json& config, Standardization default_st) {
    if (o.model.empty()) throw InputError("missing required flag", "--model");
    if (o.sizes.empty()) throw InputError("missing required flag", "--sizes");
    StudyConfig cfg;
    cfg.generator = parse_generator_spec(o.model);
    cfg.sizes = parse_sizes(o.sizes);
    cfg.reps = o.reps ? o.reps : 20000;
    cfg.master_seed = resolve_seed(o, config);
    cfg.standardization = default_st;
    config["model"] = cfg.generator.to_string();
    config["sizes"] = cfg.sizes;
    return cfg;
}

int run_be_study(const Options& o, bool standardize_given) {
    require_threads(o);
    json config;
    config["command"] = "be-study";
    StudyConfig cfg = study_config(o, config, Standardization::by_delta);
    if (standardize_given) cfg.standardization = parse_standardization(o.standardize);
    config["reps"] = cfg.reps;
    config["standardize"] = name(cfg.standardization);
    const ColorDistribution d = resolve_distribution(o, std::nullopt, config, 2);

    const auto rows = be_rate_study(cfg, d, o.threads);
    std::string csv = "n,m,ks,bound_shape,fitted_C,seed_used,ks_sigma,ks_delta,sigma2_over_delta2\n";
    json table = json::array();
    for (const auto& r : rows) {
        csv += std::to_string(r.n) + ',' + std::to_string(r.m) + ',' + format_double(r.ks) + ',' +
               format_double(r.bound_shape) + ',' + format_double(r.fitted_C) + ',' + std::to_string(r.seed_used) +
               ',' + format_double(r.ks_sigma) + ',' + format_double(r.ks_delta) + ',' +
               format_double(r.sigma2_over_delta2) + '\n';
        json row;
        row["n"] = r.n;
        row["m"] = r.m;
        row["ks"] = r.ks;
        row["bound_shape"] = r.bound_shape;
        row["fitted_C"] = r.fitted_C;
        row["seed_used"] = r.seed_used;
        row["simulation_seed"] = simulation_seed(cfg.master_seed, r.n);
        row["ks_sigma"] = r.ks_sigma;
        row["ks_delta"] = r.ks_delta;
        row["sigma2_over_delta2"] = r.sigma2_over_delta2;
        table.push_back(row);
    }
    emit(csv, o.out);
    json summary;
    summary["rows"] = table;
    summary["config"] = config;
    if (const auto path = summary_path(o); !path.empty()) emit(render_json(summary), path);
    return 0;
}

int run_slln_study(const Options& o) {
    require_threads(o);
    json config;
    config["command"] = "slln-study";
    if (o.model.empty()) throw InputError("missing required flag", "--model");
    if (o.sizes.empty()) throw InputError("missing required flag", "--sizes");
    const GeneratorSpec spec = parse_generator_spec(o.model);
    const auto sizes = parse_sizes(o.sizes);
    const std::uint64_t seed = resolve_seed(o, config);
    config["model"] = spec.to_string();
    config["sizes"] = sizes;
    config["paths"] = o.paths;
    config["bn_power"] = o.bn_power;
    const ColorDistribution d = resolve_distribution(o, std::nullopt, config, 2);

    const SllnResult res = slln_study(spec, sizes, o.paths, seed, d, o.bn_power, o.threads);
    std::string csv = "path,n,m,b_n,value\n";
    for (const auto& r : res.rows) {
        csv += std::to_string(r.path) + ',' + std::to_string(r.n) + ',' + std::to_string(r.m) + ',' +
               format_double(r.b_n) + ',' + format_double(r.value) + '\n';
    }
    emit(csv, o.out);
    json paths = json::array();
    for (const auto& p : res.paths) {
        json row;
        row["path"] = p.path;
        row["first_half_max"] = p.first_half_max;
        row["second_half_max"] = p.second_half_max;
        row["decayed"] = p.decayed;
        paths.push_back(row);
    }
    json summary;
    summary["decayed_paths"] = res.decayed_paths;
    summary["paths"] = paths;
    summary["config"] = config;
    if (const auto path = summary_path(o); !path.empty()) emit(render_json(summary), path);
    return 0;
}

int run_generate(const Options& o) {
    json config;
    if (o.model.empty()) throw InputError("missing required flag", "--model");
    if (o.n == 0) throw InputError("missing required flag", "--n");
    const GeneratorSpec spec = parse_generator_spec(o.model);
    const std::uint64_t seed = resolve_seed(o, config);
    const Graph g = generate(spec, o.n, seed);
    std::string text = "# generated model=" + spec.to_string() + " n=" + std::to_string(o.n) +
                       " seed=" + std::to_string(seed) + "\n";
    text += write_edge_list(g);
    emit(text, o.out);
    return 0;
}

int run_enumerate_check(const Options& o) {
    json config;
    config["command"] = "enumerate-check";
    const Graph g = load_graph(o, config);
    const auto partition = load_partition(o, &g, config);
    const ColorDistribution d = resolve_distribution(o, partition, config);
    const ExactMoments exact = exact_moments_by_enumeration(g, d);
    const NullMoments closed = null_moments(g, d);
    const auto rel = [](double got, double want) {
        if (want == 0.0) return std::fabs(got);
        return std::fabs(got - want) / std::fabs(want);
    };
    json out;
    out["n"] = closed.n;
    out["m"] = closed.m;
    out["K"] = closed.K;
    out["mu_exact"] = exact.mu;
    out["sigma2_exact"] = exact.sigma2;
    out["mu_closed_form"] = closed.mu;
    out["sigma2_closed_form"] = closed.sigma2;
    out["rel_error_mu"] = rel(closed.mu, exact.mu);
    out["rel_error_sigma2"] = rel(closed.sigma2, exact.sigma2);
    out["max_rel_error"] = std::max(rel(closed.mu, exact.mu), rel(closed.sigma2, exact.sigma2));
    out["config"] = config;
    emit(render_json(out), o.out);
    return 0;
}

void report_error(const std::string& code, const std::string& message, const std::string& context) {
    json err;
    err["code"] = code;
    err["message"] = message;
    err["context"] = context;
    std::cerr << err.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modularity under the free-labeling null: exact moments, significance tests and Monte Carlo studies"};
    app.require_subcommand(1);
    Options o;

    const auto add_graph = [&](CLI::App* sub) { sub->add_option("--graph", o.graph, "Edge-list file"); };
    const auto add_distribution = [&](CLI::App* sub) {
        sub->add_option("--partition", o.partition, "Partition file, one color per line (or all-ones)");
        sub->add_option("--probs", o.probs, "Color probability file, one per line");
        sub->add_option("--K", o.K, "Number of colors")->check(CLI::PositiveNumber);
    };
    const auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "Master seed (falls back to MODNULL_SEED)");
    };
    const auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "Output path (default stdout)"); };
    const auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", o.threads, "Worker threads; results do not depend on it");
    };
    const auto add_summary = [&](CLI::App* sub) {
        sub->add_option("--summary", o.summary, "Summary JSON path (default <out>.summary.json)");
    };
    const auto standardize_check = CLI::IsMember({"sigma", "delta"});

    auto* compute = app.add_subcommand("compute", "Null moments (and Q when a partition is given)");
    add_graph(compute);
    add_distribution(compute);
    add_out(compute);

    auto* test = app.add_subcommand("test", "Normal-approximation significance test of a partition");
    add_graph(test);
    add_distribution(test);
    test->add_option("--standardize", o.standardize, "sigma or delta")->check(standardize_check);
    test->add_option("--sided", o.sided, "upper or two")->check(CLI::IsMember({"upper", "two"}));
    add_out(test);

    auto* conditions = app.add_subcommand("conditions", "Degree-sequence regularity statistics");
    add_graph(conditions);
    add_out(conditions);

    auto* null_sample = app.add_subcommand("null-sample", "Standardized modularity under seeded null colorings");
    add_graph(null_sample);
    add_distribution(null_sample);
    null_sample->add_option("--reps", o.reps, "Replicates (default 10000)")->check(CLI::PositiveNumber);
    null_sample->add_option("--standardize", o.standardize, "sigma or delta")->check(standardize_check);
    add_seed(null_sample);
    add_threads(null_sample);
    add_out(null_sample);
    add_summary(null_sample);

    auto* be_study = app.add_subcommand("be-study", "Kolmogorov distance to the normal across graph sizes");
    be_study->add_option("--model", o.model, "er:p=<float>, reg:d=<int> or hub:p=<float>");
    be_study->add_option("--sizes", o.sizes, "Comma-separated vertex counts");
    be_study->add_option("--reps", o.reps, "Replicates per size (default 20000)");
    auto* be_standardize =
        be_study->add_option("--standardize", o.standardize, "sigma or delta (default delta)")->check(standardize_check);
    be_study->add_option("--probs", o.probs, "Color probability file");
    be_study->add_option("--K", o.K, "Uniform colors (default 2)")->check(CLI::PositiveNumber);
    add_seed(be_study);
    add_threads(be_study);
    add_out(be_study);
    add_summary(be_study);

    auto* slln = app.add_subcommand("slln-study", "Paths of b_n (Q_n - mu_n) across graph sizes");
    slln->add_option("--model", o.model, "er:p=<float>, reg:d=<int> or hub:p=<float>");
    slln->add_option("--sizes", o.sizes, "Comma-separated vertex counts");
    slln->add_option("--paths", o.paths, "Independent paths (default 50)")->check(CLI::PositiveNumber);
    slln->add_option("--bn-power", o.bn_power, "b_n = sqrt(m) / (ln n)^power, power > 1 (default 2)");
    slln->add_option("--probs", o.probs, "Color probability file");
    slln->add_option("--K", o.K, "Uniform colors (default 2)")->check(CLI::PositiveNumber);
    add_seed(slln);
    add_threads(slln);
    add_out(slln);
    add_summary(slln);

    auto* gen = app.add_subcommand("generate", "Write a seeded random graph as a canonical edge list");
    gen->add_option("--model", o.model, "er:p=<float>, reg:d=<int> or hub:p=<float>");
    gen->add_option("--n", o.n, "Vertex count");
    add_seed(gen);
    add_out(gen);

    auto* enumerate = app.add_subcommand("enumerate-check", "Exact enumeration against the closed-form moments");
    add_graph(enumerate);
    add_distribution(enumerate);
    add_out(enumerate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("usage_error", e.what(), e.get_name());
        std::cout << app.help();
        return 2;
    }

    try {
        if (*compute) return run_compute(o);
        if (*test) return run_test(o);
        if (*conditions) return run_conditions(o);
        if (*null_sample) return run_null_sample(o);
        if (*be_study) return run_be_study(o, be_standardize->count() > 0);
        if (*slln) return run_slln_study(o);
        if (*gen) return run_generate(o);
        if (*enumerate) return run_enumerate_check(o);
    } catch (const InputError& e) {
        report_error(e.code(), e.what(), e.context());
        return 2;
    } catch (const DomainError& e) {
        report_error(e.code(), e.what(), e.context());
        return 3;
    } catch (const std::exception& e) {
        report_error("internal_error", e.what(), "");
        return 1;
    }
    return 1;
}
