#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "modnull/color_model.hpp"
#include "modnull/graph.hpp"
#include "modnull/graph_generators.hpp"
#include "modnull/modularity_stats.hpp"
#include "modnull/rng.hpp"

namespace modnull {

/// Standard normal CDF, 0.5 * erfc(-x / sqrt 2).
double std_normal_cdf(double x);

/// sup_x |F_N(x) - cdf(x)| for the empirical CDF F_N of `samples`.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf = std_normal_cdf);

/// Stream seed of replicate r under master seed.
inline std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t r) { return derive_seed(master, r); }

struct SimulationOptions {
    std::size_t reps = 1000;
    std::uint64_t master_seed = 0;
    Standardization standardization = Standardization::by_delta;
    unsigned threads = 1;
    bool with_martingale_variance = false;
};

struct NullSample {
    NullMoments moments;
    std::vector<double> q;                    // raw modularity per replicate
    std::vector<double> z;                    // (Q - mu) / scale
    std::vector<double> martingale_variance;  // filled when requested
    double mean = 0.0;                        // of z
    double variance = 0.0;                    // of z, unbiased
    double ks = 0.0;                          // of z against Phi
};

/**
 * Draw `reps` free-labeling colorings (replicate r uses replicate_seed(master, r))
 * and standardize Q. Output is identical for every thread count.
 */
NullSample simulate_null(const Graph& g, const ColorDistribution& d, const SimulationOptions& options);

enum class Sidedness { upper, two_sided };

struct TestReport {
    double Q = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    double delta = 0.0;
    double z_sigma = 0.0;
    double z_delta = 0.0;
    double p_value = 0.0;
    Sidedness sidedness = Sidedness::upper;
    Standardization standardization = Standardization::by_sigma;
};

/// Normal-approximation test of Q for a given partition. Without `d`, the
/// partition's empirical color frequencies are used.
TestReport significance_test(const Graph& g, const Coloring& c, const std::optional<ColorDistribution>& d,
                             Sidedness sidedness = Sidedness::upper,
                             Standardization standardization = Standardization::by_sigma);

double p_value_from_z(double z, Sidedness sidedness);

struct StudyConfig {
    GeneratorSpec generator;
    std::vector<std::size_t> sizes;
    std::size_t reps = 20000;
    std::uint64_t master_seed = 0;
    Standardization standardization = Standardization::by_delta;

    /// Throws InputError unless reps >= 100 and sizes are >= 2 and strictly increasing.
    void validate() const;
};

/// Graph at size n is generate(spec, n, graph_seed(master, n)); its replicates
/// run under simulation_seed(master, n).
inline std::uint64_t graph_seed(std::uint64_t master, std::uint64_t n) { return derive_seed(master, 2 * n); }
inline std::uint64_t simulation_seed(std::uint64_t master, std::uint64_t n) { return derive_seed(master, 2 * n + 1); }

struct RateRow {
    std::size_t n = 0;
    std::size_t m = 0;
    double ks = 0.0;           // under the configured standardization
    double bound_shape = 0.0;  // n^{-1/4} ln n
    double fitted_C = 0.0;     // ks / bound_shape
    std::uint64_t seed_used = 0;
    double ks_sigma = 0.0;
    double ks_delta = 0.0;
    double sigma2_over_delta2 = 0.0;
};

std::vector<RateRow> be_rate_study(const StudyConfig& cfg, const ColorDistribution& d, unsigned threads = 1);

struct SllnRow {
    std::size_t path = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    double b_n = 0.0;
    double value = 0.0;  // b_n (Q_n - mu_n)
};

struct SllnPathSummary {
    std::size_t path = 0;
    double first_half_max = 0.0;
    double second_half_max = 0.0;
    bool decayed = false;  // second_half_max <= first_half_max
};

struct SllnResult {
    std::vector<SllnRow> rows;  // path-major
    std::vector<SllnPathSummary> paths;
    std::size_t decayed_paths = 0;
};

/// b_n = sqrt(m) / (ln n)^bn_power; bn_power > 1 keeps b_n ln n / sqrt(m) -> 0.
double slln_scaling(std::size_t n, std::size_t m, double bn_power);

/**
 * One independent coloring per (path, size). Sizes split into a first half
 * (the floor(S/2) smallest) and the remaining second half.
 */
SllnResult slln_study(const GeneratorSpec& generator, std::span<const std::size_t> sizes, std::size_t paths,
                      std::uint64_t master_seed, const ColorDistribution& d, double bn_power = 2.0,
                      unsigned threads = 1);

}  // namespace modnull
