#include "modnull/regularity_conditions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "modnull/error.hpp"

namespace modnull {

ConditionReport condition_statistics(const Graph& g) {
    if (g.num_vertices() < 2) {
        throw DomainError("condition statistics need n >= 2", "n=" + std::to_string(g.num_vertices()));
    }
    if (g.num_edges() == 0) throw DomainError("graph has no edges", "m=0");

    const DegreeSummary deg = degree_summary(g);
    const double n = static_cast<double>(deg.n);
    const double m = static_cast<double>(deg.m);
    const double log_n = std::log(n);
    const double max_ratio = static_cast<double>(deg.kmax) / std::sqrt(m);

    ConditionReport r;
    r.n = deg.n;
    r.m = deg.m;
    r.kmax = deg.kmax;
    r.stat_31 = max_ratio * std::sqrt(n);
    r.stat_311 = to_double(common_neighbor_frobenius(g)) / (m * m) * std::pow(n, 1.25) / std::pow(log_n, 5.0);
    r.stat_c1 = max_ratio * std::pow(n, 0.625) / std::pow(log_n, 2.5);
    r.holds_c1 = r.stat_c1 <= 1.0;
    r.implies_311 = r.holds_c1;
    return r;
}

double tail_scale(const Graph& g) { return 2.0 * std::sqrt(static_cast<double>(g.num_edges())); }

double tail_bound(const Graph& g, double x) {
    if (g.num_edges() == 0) throw DomainError("graph has no edges", "m=0");
    const double scale = tail_scale(g);
    const double threshold = 8.0 * std::numbers::e * scale;
    if (!(x > threshold)) {
        throw DomainError("tail bound requires x > 8e*D_n", "threshold=" + std::to_string(threshold));
    }
    return std::exp(-x / (4.0 * std::numbers::e * scale));
}

}  // namespace modnull
