#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "modnull/graph.hpp"

namespace modnull {

enum class GraphModel { er, reg, hub };

/// Model plus its single parameter. String form: "er:p=<float>",
/// "reg:d=<int>" or "hub:p=<float>".
struct GeneratorSpec {
    GraphModel model = GraphModel::reg;
    double p = 0.0;         // er, hub
    std::uint32_t d = 0;    // reg

    std::string to_string() const;
    bool operator==(const GeneratorSpec&) const = default;
};

GeneratorSpec parse_generator_spec(std::string_view text);

/// Erdos-Renyi G(n, p); one uniform per pair in lexicographic order.
/// Retries with seed+1 while the draw is empty.
Graph gen_er(std::size_t n, double p, std::uint64_t seed);

/// Simple d-regular graph: stub pairing with rejection, then edge-switch
/// repair of any remaining loops or multi-edges.
Graph gen_regular(std::size_t n, std::uint32_t d, std::uint64_t seed);

/// ER(n-1, p) plus vertex n-1 joined to ceil(sqrt(n-1)) distinct base vertices.
Graph gen_hub(std::size_t n, double p, std::uint64_t seed);

Graph generate(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace modnull
