#pragma once

#include <cstddef>
#include <cstdint>

#include "modnull/graph.hpp"

namespace modnull {

/**
 * Degree-sequence regularity statistics for the normal approximation.
 *
 * The two conditions with an unspecified constant are reported as ratios
 * (left side over the rate, constant omitted). Only the sufficient condition
 * with an explicit constant of one is reported as a boolean. log is natural.
 */
struct ConditionReport {
    std::size_t n = 0;
    std::size_t m = 0;
    std::uint32_t kmax = 0;
    double stat_31 = 0.0;   // (kmax / sqrt m) * n^{1/2}
    double stat_311 = 0.0;  // (frobenius / m^2) * n^{5/4} / (log n)^5
    double stat_c1 = 0.0;   // (kmax / sqrt m) * n^{5/8} / (log n)^{5/2}
    bool holds_c1 = false;  // stat_c1 <= 1
    /// holds_c1 implies the two-hop condition; set whenever holds_c1 is.
    bool implies_311 = false;
};

ConditionReport condition_statistics(const Graph& g);

/// D_n = 2 sqrt(m) for the kernel weights a_ij = 2 A_ij.
double tail_scale(const Graph& g);

/**
 * exp(-x / (4e D_n)), an upper bound on P(|sum_{i<j} A_ij hbar(c_i,c_j)| > x).
 * Only asserted for x > 8e D_n; smaller x throws DomainError.
 */
double tail_bound(const Graph& g, double x);

}  // namespace modnull
