#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "modnull/color_model.hpp"
#include "modnull/graph.hpp"

namespace modnull {

/// Which scale standardizes Q - mu: the exact null sd, or the leading-order delta.
enum class Standardization { by_sigma, by_delta };

struct NullMoments {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t K = 0;
    double mu = 0.0;
    double sigma2 = 0.0;
    double delta2 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double sum_offdiag_B2 = 0.0;  // sum_{i != j} B_ij^2
    double sum_diag_B2 = 0.0;     // sum_i B_ii^2

    double scale(Standardization s) const;
};

/**
 * Q = (1/m) sum_{i<j} B_ij hbar(c_i, c_j) split into the three centered
 * pieces; their sum reproduces Q exactly in exact arithmetic.
 */
struct Decomposition {
    double constant_term = 0.0;  // (1 - p2)/(2m) sum_i B_ii
    double kernel_term = 0.0;    // (1/m) sum_{i<j} B_ij hbar(c_i, c_j)
    double degree_term = 0.0;    // -(1/m) sum_i B_ii (p_{c_i} - p2)
    double reconstructed_Q = 0.0;
};

/// Newman modularity with diagonal terms included. O(n + m).
double modularity(const Graph& g, const Coloring& c);

/// Closed-form null mean and variance under free labeling. O(n + m).
NullMoments null_moments(const Graph& g, const ColorDistribution& d);

Decomposition center_decompose(const Graph& g, const Coloring& c, const ColorDistribution& d);

/**
 * Normalized conditional variance of the martingale T_n in the natural vertex
 * order: (1/(m^2 delta^2)) sum_j sum_{i,l in N(j), i,l<j} cross(c_i, c_l).
 * Evaluated in O(n + m) through per-vertex color tallies.
 */
double martingale_variance(const Graph& g, const Coloring& c, const ColorDistribution& d);

struct ExactMoments {
    double mu = 0.0;
    double sigma2 = 0.0;
};

inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

/// Enumerate all K^n colorings weighted by prod p_{c_i}. Throws DomainError
/// if K^n exceeds kEnumerationLimit.
ExactMoments exact_moments_by_enumeration(const Graph& g, const ColorDistribution& d);

/// Reusable workspace for evaluating Q on many colorings of one graph.
class ModularityEvaluator {
public:
    explicit ModularityEvaluator(const Graph& g);

    double operator()(std::span<const Color> colors, std::size_t num_colors);

private:
    const Graph* graph_;
    std::vector<double> community_degree_;
};

}  // namespace modnull
