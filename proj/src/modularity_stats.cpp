#include "modnull/modularity_stats.hpp"

#include <cmath>
#include <stdexcept>

#include "modnull/error.hpp"
#include "modnull/numeric.hpp"

namespace modnull {

namespace {

using SignedWide = __int128;

void require_edges(const Graph& g) {
    if (g.num_edges() == 0) throw DomainError("graph has no edges", "m=0");
}

void require_matching(const Graph& g, const Coloring& c) {
    if (c.size() != g.num_vertices()) {
        throw InputError("partition length does not match vertex count",
                         "n=" + std::to_string(g.num_vertices()) + " partition=" + std::to_string(c.size()));
    }
}

void require_colors(const Coloring& c, const ColorDistribution& d) {
    if (c.max_color() > d.num_colors()) {
        throw InputError("partition uses a color above K", "K=" + std::to_string(d.num_colors()));
    }
}

// sum over edges {u,v} of k_u k_v
WideCount edge_degree_products(const Graph& g) {
    WideCount total = 0;
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
        const WideCount ku = g.degree(u);
        for (VertexId v : g.neighbors(u)) {
            if (u < v) total += ku * g.degree(v);
        }
    }
    return total;
}

}  // namespace

double NullMoments::scale(Standardization s) const {
    return s == Standardization::by_sigma ? std::sqrt(sigma2) : std::sqrt(delta2);
}

ModularityEvaluator::ModularityEvaluator(const Graph& g) : graph_(&g) {}

double ModularityEvaluator::operator()(std::span<const Color> colors, std::size_t num_colors) {
    const Graph& g = *graph_;
    community_degree_.assign(num_colors + 1, 0.0);
    std::size_t within = 0;
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
        const Color cu = colors[u];
        community_degree_[cu] += g.degree(u);
        for (VertexId v : g.neighbors(u)) {
            if (u < v && colors[v] == cu) ++within;
        }
    }
    const double two_m = 2.0 * static_cast<double>(g.num_edges());
    CompensatedSum expected;
    for (std::size_t k = 1; k <= num_colors; ++k) {
        const double share = community_degree_[k] / two_m;
        expected += share * share;
    }
    return static_cast<double>(within) / static_cast<double>(g.num_edges()) - expected.value();
}

double modularity(const Graph& g, const Coloring& c) {
    require_matching(g, c);
    require_edges(g);
    ModularityEvaluator eval(g);
    return eval(c.colors(), c.max_color());
}

NullMoments null_moments(const Graph& g, const ColorDistribution& d) {
    require_edges(g);
    const DegreeSummary deg = degree_summary(g);
    const MomentConstants rc = moment_constants(d);

    NullMoments out;
    out.n = deg.n;
    out.m = deg.m;
    out.K = d.num_colors();
    out.r1 = rc.r1;
    out.r2 = rc.r2;

    const double m = static_cast<double>(deg.m);
    const double four_m2 = 4.0 * m * m;

    // 4m^2 * sum_{i != j} B_ij^2 = 8m^3 - 8m sum_E k_u k_v + S2^2 - S4, exactly in integers.
    const SignedWide mw = static_cast<SignedWide>(deg.m);
    const SignedWide s2 = static_cast<SignedWide>(deg.s2);
    const SignedWide numerator = 8 * mw * mw * mw - 8 * mw * static_cast<SignedWide>(edge_degree_products(g)) +
                                 s2 * s2 - static_cast<SignedWide>(deg.s4);
    if (numerator < 0) throw std::logic_error("negative sum of squared modularity entries");

    out.sum_offdiag_B2 = static_cast<double>(numerator) / four_m2;
    out.sum_diag_B2 = to_double(deg.s4) / four_m2;
    out.mu = d.degenerate() ? 0.0 : -(1.0 - d.p2()) * to_double(deg.s2) / four_m2;
    out.sigma2 = rc.r1 / (2.0 * m * m) * out.sum_offdiag_B2 + rc.r2 / (m * m) * out.sum_diag_B2;
    out.delta2 = rc.r1 / m;
    return out;
}

Decomposition center_decompose(const Graph& g, const Coloring& c, const ColorDistribution& d) {
    require_matching(g, c);
    require_edges(g);
    require_colors(c, d);

    const auto p = d.probs_by_color();
    const double p2 = d.p2();
    const double m = static_cast<double>(g.num_edges());
    const double two_m = 2.0 * m;
    const auto h = [&](Color a, Color b) { return (a == b ? 1.0 : 0.0) - p[a] - p[b] + p2; };

    std::vector<double> community_degree(d.num_colors() + 1, 0.0);
    CompensatedSum edge_kernel;        // sum_{edges} hbar(c_u, c_v)
    CompensatedSum degree_weighted_p;  // sum_i k_i p_{c_i}
    CompensatedSum diag_kernel;        // sum_i k_i^2 hbar(c_i, c_i)
    CompensatedSum diag_centered;      // sum_i k_i^2 (p_{c_i} - p2)
    double s2 = 0.0;
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
        const Color cu = c[u];
        const double k = g.degree(u);
        community_degree[cu] += k;
        degree_weighted_p += k * p[cu];
        diag_kernel += k * k * h(cu, cu);
        diag_centered += k * k * (p[cu] - p2);
        s2 += k * k;
        for (VertexId v : g.neighbors(u)) {
            if (u < v) edge_kernel += h(cu, c[v]);
        }
    }
    CompensatedSum community_sq;
    for (double dk : community_degree) community_sq += dk * dk;

    // sum_{i<j} k_i k_j hbar(c_i, c_j), from the full double sum minus its diagonal
    const double full = community_sq.value() - 2.0 * two_m * degree_weighted_p.value() + two_m * two_m * p2;
    const double degree_pairs = 0.5 * (full - diag_kernel.value());

    Decomposition out;
    const double sum_bii = -s2 / two_m;
    out.constant_term = (1.0 - p2) / two_m * sum_bii;
    out.kernel_term = (edge_kernel.value() - degree_pairs / two_m) / m;
    out.degree_term = diag_centered.value() / (two_m * m);
    out.reconstructed_Q = out.constant_term + out.kernel_term + out.degree_term;
    return out;
}

double martingale_variance(const Graph& g, const Coloring& c, const ColorDistribution& d) {
    require_matching(g, c);
    require_edges(g);
    require_colors(c, d);
    const MomentConstants rc = moment_constants(d);
    if (rc.r1 <= 0.0) {
        throw DomainError("degenerate color distribution (r1 = 0)", "K=" + std::to_string(d.num_colors()));
    }

    const auto p = d.probs_by_color();
    const double p2 = d.p2();
    const double tail = d.p3() - p2 * p2;
    std::vector<std::uint32_t> tally(d.num_colors() + 1, 0);
    std::vector<Color> touched;

    CompensatedSum total;
    for (VertexId j = 0; j < g.num_vertices(); ++j) {
        // earlier neighbors form a prefix of the sorted list
        double s = 0.0, sum_p = 0.0, sum_p_sq = 0.0;
        touched.clear();
        for (VertexId i : g.neighbors(j)) {
            if (i >= j) break;
            const Color ci = c[i];
            if (tally[ci]++ == 0) touched.push_back(ci);
            s += 1.0;
            sum_p += p[ci];
            sum_p_sq += p[ci] * p[ci];
        }
        if (s == 0.0) continue;
        double same_color = 0.0;
        for (Color a : touched) {
            const double cnt = tally[a];
            same_color += cnt * cnt * p[a];
            tally[a] = 0;
        }
        total += same_color - 2.0 * s * sum_p_sq - sum_p * sum_p + 2.0 * p2 * s * sum_p + s * s * tail;
    }
    return total.value() / (static_cast<double>(g.num_edges()) * rc.r1);
}

ExactMoments exact_moments_by_enumeration(const Graph& g, const ColorDistribution& d) {
    require_edges(g);
    const std::size_t n = g.num_vertices();
    const std::size_t k = d.num_colors();

    long double count = 1.0L;
    for (std::size_t i = 0; i < n; ++i) {
        count *= static_cast<long double>(k);
        if (count > static_cast<long double>(kEnumerationLimit)) {
            throw DomainError("instance too large to enumerate (K^n > 1e7)",
                              "n=" + std::to_string(n) + " K=" + std::to_string(k));
        }
    }

    // Colors with p_k = 0 carry zero weight; enumerate the support only.
    std::vector<Color> support;
    for (Color a = 1; a <= k; ++a) {
        if (d.probs_by_color()[a] > 0.0) support.push_back(a);
    }
    const auto p = d.probs_by_color();
    ModularityEvaluator eval(g);
    std::vector<std::size_t> digit(n, 0);
    std::vector<Color> colors(n, support.front());

    const auto sweep = [&](auto&& visit) {
        std::fill(digit.begin(), digit.end(), 0);
        std::fill(colors.begin(), colors.end(), support.front());
        while (true) {
            long double weight = 1.0L;
            for (Color ci : colors) weight *= p[ci];
            visit(weight, eval(colors, k));
            std::size_t pos = 0;
            while (pos < n && ++digit[pos] == support.size()) {
                digit[pos] = 0;
                colors[pos] = support.front();
                ++pos;
            }
            if (pos == n) break;
            colors[pos] = support[digit[pos]];
        }
    };

    long double mean = 0.0L;
    sweep([&](long double w, double q) { mean += w * q; });
    long double var = 0.0L;
    sweep([&](long double w, double q) {
        const long double dev = q - mean;
        var += w * dev * dev;
    });
    return {static_cast<double>(mean), static_cast<double>(var)};
}

}  // namespace modnull
