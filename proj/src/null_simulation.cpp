#include "modnull/null_simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "modnull/error.hpp"
#include "modnull/numeric.hpp"

namespace modnull {

namespace {

// Contiguous static partition of [0, count); fn(begin, end) per worker.
template <typename Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
    if (workers == 1) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(count, w * chunk);
        const std::size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
}

void require_nondegenerate(const ColorDistribution& d) {
    if (d.degenerate()) {
        throw DomainError("degenerate color distribution (r1 = 0)", "K=" + std::to_string(d.num_colors()));
    }
}

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;
};

MeanVar mean_variance(std::span<const double> xs) {
    CompensatedSum sum;
    for (double x : xs) sum += x;
    MeanVar out;
    out.mean = sum.value() / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        CompensatedSum sq;
        for (double x : xs) sq += (x - out.mean) * (x - out.mean);
        out.variance = sq.value() / static_cast<double>(xs.size() - 1);
    }
    return out;
}

std::vector<double> standardize(std::span<const double> q, double mu, double scale) {
    std::vector<double> z(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) z[i] = (q[i] - mu) / scale;
    return z;
}

// Raw Q (and optionally V_n^2) for replicates [0, reps) of one graph.
void sample_modularity(const Graph& g, const ColorDistribution& d, std::size_t reps, std::uint64_t master,
                       unsigned threads, std::vector<double>& q, std::vector<double>* mart_var) {
    q.assign(reps, 0.0);
    if (mart_var) mart_var->assign(reps, 0.0);
    parallel_chunks(reps, threads, [&](std::size_t begin, std::size_t end) {
        ModularityEvaluator eval(g);
        std::vector<Color> colors;
        for (std::size_t r = begin; r < end; ++r) {
            sample_colors_into(d, g.num_vertices(), replicate_seed(master, r), colors);
            q[r] = eval(colors, d.num_colors());
            if (mart_var) (*mart_var)[r] = martingale_variance(g, Coloring(colors), d);
        }
    });
}

}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw InputError("KS distance needs at least one sample", "N=0");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        const double above = static_cast<double>(i + 1) / n - f;
        const double below = f - static_cast<double>(i) / n;
        worst = std::max({worst, std::fabs(above), std::fabs(below)});
    }
    return worst;
}

NullSample simulate_null(const Graph& g, const ColorDistribution& d, const SimulationOptions& options) {
    require_nondegenerate(d);
    if (g.num_edges() == 0) throw DomainError("graph has no edges", "m=0");
    if (options.reps == 0) throw InputError("reps must be positive", "reps=0");

    NullSample out;
    out.moments = null_moments(g, d);
    sample_modularity(g, d, options.reps, options.master_seed, options.threads, out.q,
                      options.with_martingale_variance ? &out.martingale_variance : nullptr);
    out.z = standardize(out.q, out.moments.mu, out.moments.scale(options.standardization));
    const MeanVar mv = mean_variance(out.z);
    out.mean = mv.mean;
    out.variance = mv.variance;
    out.ks = ks_distance(out.z);
    return out;
}

double p_value_from_z(double z, Sidedness sidedness) {
    if (sidedness == Sidedness::upper) return std_normal_cdf(-z);
    return std::min(1.0, 2.0 * std_normal_cdf(-std::fabs(z)));
}

TestReport significance_test(const Graph& g, const Coloring& c, const std::optional<ColorDistribution>& d,
                             Sidedness sidedness, Standardization standardization) {
    if (c.size() != g.num_vertices()) {
        throw InputError("partition length does not match vertex count",
                         "n=" + std::to_string(g.num_vertices()) + " partition=" + std::to_string(c.size()));
    }
    const ColorDistribution dist = d ? *d : ColorDistribution::from_partition_counts(c, c.max_color());
    if (c.max_color() > dist.num_colors()) {
        throw InputError("partition uses a color above K", "K=" + std::to_string(dist.num_colors()));
    }
    require_nondegenerate(dist);

    const NullMoments mom = null_moments(g, dist);
    TestReport r;
    r.Q = modularity(g, c);
    r.mu = mom.mu;
    r.sigma = std::sqrt(mom.sigma2);
    r.delta = std::sqrt(mom.delta2);
    r.z_sigma = (r.Q - r.mu) / r.sigma;
    r.z_delta = (r.Q - r.mu) / r.delta;
    r.sidedness = sidedness;
    r.standardization = standardization;
    r.p_value = p_value_from_z(standardization == Standardization::by_sigma ? r.z_sigma : r.z_delta, sidedness);
    return r;
}

void StudyConfig::validate() const {
    if (reps < 100) throw InputError("study needs reps >= 100", "reps=" + std::to_string(reps));
    if (sizes.empty()) throw InputError("study needs at least one size", "sizes=[]");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 2) throw InputError("sizes must be >= 2", "n=" + std::to_string(sizes[i]));
        if (i > 0 && sizes[i] <= sizes[i - 1]) {
            throw InputError("sizes must be strictly increasing", "n=" + std::to_string(sizes[i]));
        }
    }
}

namespace {

Graph generate_for_size(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed) {
    try {
        Graph g = generate(spec, n, seed);
        if (g.num_edges() == 0) throw DomainError("generated graph has no edges", "m=0");
        return g;
    } catch (const Error& e) {
        throw DomainError(std::string("generator failed: ") + e.what(), "n=" + std::to_string(n) + " " + e.context());
    }
}

}  // namespace

std::vector<RateRow> be_rate_study(const StudyConfig& cfg, const ColorDistribution& d, unsigned threads) {
    cfg.validate();
    require_nondegenerate(d);

    std::vector<RateRow> rows;
    std::vector<double> q;
    for (std::size_t n : cfg.sizes) {
        const std::uint64_t gseed = graph_seed(cfg.master_seed, n);
        const Graph g = generate_for_size(cfg.generator, n, gseed);
        const NullMoments mom = null_moments(g, d);
        sample_modularity(g, d, cfg.reps, simulation_seed(cfg.master_seed, n), threads, q, nullptr);

        RateRow row;
        row.n = n;
        row.m = g.num_edges();
        row.seed_used = gseed;
        row.ks_sigma = ks_distance(standardize(q, mom.mu, mom.scale(Standardization::by_sigma)));
        row.ks_delta = ks_distance(standardize(q, mom.mu, mom.scale(Standardization::by_delta)));
        row.ks = cfg.standardization == Standardization::by_sigma ? row.ks_sigma : row.ks_delta;
        row.bound_shape = std::pow(static_cast<double>(n), -0.25) * std::log(static_cast<double>(n));
        row.fitted_C = row.ks / row.bound_shape;
        row.sigma2_over_delta2 = mom.sigma2 / mom.delta2;
        rows.push_back(row);
    }
    return rows;
}

double slln_scaling(std::size_t n, std::size_t m, double bn_power) {
    return std::sqrt(static_cast<double>(m)) / std::pow(std::log(static_cast<double>(n)), bn_power);
}

SllnResult slln_study(const GeneratorSpec& generator, std::span<const std::size_t> sizes, std::size_t paths,
                      std::uint64_t master_seed, const ColorDistribution& d, double bn_power, unsigned threads) {
    require_nondegenerate(d);
    if (!(bn_power > 1.0)) {
        throw InputError("b_n exponent must exceed 1", "bn_power=" + std::to_string(bn_power));
    }
    if (paths == 0) throw InputError("paths must be positive", "paths=0");
    if (sizes.size() < 2) throw InputError("SLLN study needs at least two sizes", "sizes");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 2 || (i > 0 && sizes[i] <= sizes[i - 1])) {
            throw InputError("sizes must be >= 2 and strictly increasing", "n=" + std::to_string(sizes[i]));
        }
    }

    const std::size_t num_sizes = sizes.size();
    // value[path * num_sizes + s]
    std::vector<double> value(paths * num_sizes, 0.0);
    std::vector<double> scaling(num_sizes, 0.0);
    std::vector<std::size_t> edges(num_sizes, 0);
    std::vector<double> q;
    for (std::size_t s = 0; s < num_sizes; ++s) {
        const std::size_t n = sizes[s];
        const Graph g = generate_for_size(generator, n, graph_seed(master_seed, n));
        const NullMoments mom = null_moments(g, d);
        edges[s] = g.num_edges();
        scaling[s] = slln_scaling(n, g.num_edges(), bn_power);
        sample_modularity(g, d, paths, simulation_seed(master_seed, n), threads, q, nullptr);
        for (std::size_t p = 0; p < paths; ++p) value[p * num_sizes + s] = scaling[s] * (q[p] - mom.mu);
    }

    SllnResult out;
    const std::size_t first_count = num_sizes / 2;
    for (std::size_t p = 0; p < paths; ++p) {
        SllnPathSummary summary;
        summary.path = p;
        for (std::size_t s = 0; s < num_sizes; ++s) {
            const double v = value[p * num_sizes + s];
            out.rows.push_back({p, sizes[s], edges[s], scaling[s], v});
            double& slot = s < first_count ? summary.first_half_max : summary.second_half_max;
            slot = std::max(slot, std::fabs(v));
        }
        summary.decayed = summary.second_half_max <= summary.first_half_max;
        if (summary.decayed) ++out.decayed_paths;
        out.paths.push_back(summary);
    }
    return out;
}

}  // namespace modnull
