#include "modnull/graph_generators.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>

#include "modnull/error.hpp"
#include "modnull/rng.hpp"

namespace modnull {

namespace {

constexpr int kErRetries = 64;
constexpr int kPairingAttempts = 100;

std::uint64_t edge_key(VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

std::vector<Edge> er_edges(std::size_t n, double p, SplitMix64& rng) {
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u) {
        for (VertexId v = u + 1; v < n; ++v) {
            if (rng.uniform() < p) edges.emplace_back(u, v);
        }
    }
    return edges;
}

void check_probability(double p, bool allow_zero) {
    const bool ok = allow_zero ? (p >= 0.0 && p <= 1.0) : (p > 0.0 && p <= 1.0);
    if (!ok) throw InputError("edge probability out of range", "p=" + std::to_string(p));
}

std::uint32_t ceil_sqrt(std::uint64_t x) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
    while (r * r > x) --r;
    while (r * r < x) ++r;
    return static_cast<std::uint32_t>(r);
}

// One round of configuration-model pairing.
std::vector<Edge> pair_stubs(std::size_t n, std::uint32_t d, SplitMix64& rng) {
    std::vector<VertexId> stubs;
    stubs.reserve(n * d);
    for (VertexId v = 0; v < n; ++v) stubs.insert(stubs.end(), d, v);
    for (std::size_t i = stubs.size(); i > 1; --i) {
        std::swap(stubs[i - 1], stubs[rng.below(i)]);
    }
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) edges.emplace_back(stubs[i], stubs[i + 1]);
    return edges;
}

bool is_simple(const std::vector<Edge>& edges, std::unordered_map<std::uint64_t, int>& mult) {
    mult.clear();
    bool simple = true;
    for (const auto& [u, v] : edges) {
        if (u == v) simple = false;
        if (++mult[edge_key(u, v)] > 1) simple = false;
    }
    return simple;
}

// Degree-preserving switches (a,b),(x,y) -> (a,x),(b,y) that remove every loop
// and surplus parallel copy. A switch never introduces a new defect, so one pass
// over the edge list suffices.
bool repair(std::vector<Edge>& edges, std::unordered_map<std::uint64_t, int>& mult, SplitMix64& rng) {
    const std::size_t budget_per_edge = 1000 + 10 * edges.size();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto is_bad = [&](std::size_t idx) {
            const auto [u, v] = edges[idx];
            return u == v || mult[edge_key(u, v)] > 1;
        };
        std::size_t tries = 0;
        while (is_bad(e)) {
            if (++tries > budget_per_edge) return false;
            const std::size_t f = rng.below(edges.size());
            if (f == e) continue;
            auto [a, b] = edges[e];
            auto [x, y] = edges[f];
            if (rng() & 1U) std::swap(x, y);
            if (a == x || b == y) continue;
            const auto k1 = edge_key(a, x);
            const auto k2 = edge_key(b, y);
            if (k1 == k2) continue;
            if (auto it = mult.find(k1); it != mult.end() && it->second > 0) continue;
            if (auto it = mult.find(k2); it != mult.end() && it->second > 0) continue;
            --mult[edge_key(a, b)];
            --mult[edge_key(edges[f].first, edges[f].second)];
            ++mult[k1];
            ++mult[k2];
            edges[e] = {std::min(a, x), std::max(a, x)};
            edges[f] = {std::min(b, y), std::max(b, y)};
        }
    }
    return true;
}

}  // namespace

std::string GeneratorSpec::to_string() const {
    char buf[64];
    switch (model) {
        case GraphModel::er:
            std::snprintf(buf, sizeof buf, "er:p=%.17g", p);
            break;
        case GraphModel::reg:
            std::snprintf(buf, sizeof buf, "reg:d=%u", d);
            break;
        case GraphModel::hub:
            std::snprintf(buf, sizeof buf, "hub:p=%.17g", p);
            break;
    }
    return buf;
}

GeneratorSpec parse_generator_spec(std::string_view text) {
    const auto colon = text.find(':');
    const auto eq = text.find('=');
    if (colon == std::string_view::npos || eq == std::string_view::npos || eq < colon) {
        throw InputError("model spec must look like er:p=<float>, reg:d=<int> or hub:p=<float>",
                         std::string(text));
    }
    const auto name = text.substr(0, colon);
    const auto key = text.substr(colon + 1, eq - colon - 1);
    const auto value = text.substr(eq + 1);

    GeneratorSpec spec;
    auto parse_p = [&] {
        if (key != "p") throw InputError("expected parameter p", std::string(text));
        double p = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), p);
        if (ec != std::errc() || ptr != value.data() + value.size()) {
            throw InputError("malformed probability", std::string(text));
        }
        return p;
    };
    if (name == "er") {
        spec.model = GraphModel::er;
        spec.p = parse_p();
        check_probability(spec.p, false);
    } else if (name == "hub") {
        spec.model = GraphModel::hub;
        spec.p = parse_p();
        check_probability(spec.p, true);
    } else if (name == "reg") {
        spec.model = GraphModel::reg;
        if (key != "d") throw InputError("expected parameter d", std::string(text));
        std::uint32_t d = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
        if (ec != std::errc() || ptr != value.data() + value.size() || d == 0) {
            throw InputError("degree must be a positive integer", std::string(text));
        }
        spec.d = d;
    } else {
        throw InputError("unknown graph model", std::string(name));
    }
    return spec;
}

Graph gen_er(std::size_t n, double p, std::uint64_t seed) {
    if (n < 2) throw InputError("ER graph needs n >= 2", "n=" + std::to_string(n));
    check_probability(p, false);
    for (int attempt = 0; attempt < kErRetries; ++attempt) {
        SplitMix64 rng(seed + static_cast<std::uint64_t>(attempt));
        auto edges = er_edges(n, p, rng);
        if (!edges.empty()) return Graph(n, edges);
    }
    throw DomainError("ER generator produced only empty graphs",
                      "n=" + std::to_string(n) + " retries=" + std::to_string(kErRetries));
}

Graph gen_regular(std::size_t n, std::uint32_t d, std::uint64_t seed) {
    if (d == 0 || d >= n) {
        throw DomainError("regular graph needs 0 < d < n", "n=" + std::to_string(n) + " d=" + std::to_string(d));
    }
    if ((static_cast<std::uint64_t>(n) * d) % 2 != 0) {
        throw DomainError("n*d must be even", "n=" + std::to_string(n) + " d=" + std::to_string(d));
    }
    SplitMix64 rng(seed);
    std::unordered_map<std::uint64_t, int> mult;
    std::vector<Edge> edges;
    for (int attempt = 0; attempt < kPairingAttempts; ++attempt) {
        edges = pair_stubs(n, d, rng);
        if (is_simple(edges, mult)) return Graph(n, edges);
    }
    if (!repair(edges, mult, rng)) {
        throw DomainError("edge-switch repair did not reach a simple graph",
                          "n=" + std::to_string(n) + " d=" + std::to_string(d));
    }
    for (auto& [u, v] : edges) {
        if (u > v) std::swap(u, v);
    }
    return Graph(n, edges);
}

Graph gen_hub(std::size_t n, double p, std::uint64_t seed) {
    if (n < 4) throw InputError("hub graph needs n >= 4", "n=" + std::to_string(n));
    check_probability(p, true);
    SplitMix64 rng(seed);
    const std::size_t base = n - 1;
    auto edges = er_edges(base, p, rng);

    const std::uint32_t hub_degree = ceil_sqrt(base);
    std::vector<VertexId> pool(base);
    std::iota(pool.begin(), pool.end(), VertexId{0});
    const auto hub = static_cast<VertexId>(base);
    for (std::uint32_t i = 0; i < hub_degree; ++i) {
        std::swap(pool[i], pool[i + rng.below(base - i)]);
        edges.emplace_back(pool[i], hub);
    }
    return Graph(n, edges);
}

Graph generate(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed) {
    switch (spec.model) {
        case GraphModel::er:
            return gen_er(n, spec.p, seed);
        case GraphModel::reg:
            return gen_regular(n, spec.d, seed);
        case GraphModel::hub:
            return gen_hub(n, spec.p, seed);
    }
    throw std::logic_error("unhandled graph model");
}

}  // namespace modnull
