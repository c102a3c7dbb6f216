#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace modnull {

/// Community label, 1-based.
using Color = std::uint32_t;

/// Partition C = (c_1, ..., c_n) with entries in 1..K.
class Coloring {
public:
    Coloring() = default;
    explicit Coloring(std::vector<Color> colors);

    std::size_t size() const noexcept { return colors_.size(); }
    Color operator[](std::size_t i) const noexcept { return colors_[i]; }
    std::span<const Color> colors() const noexcept { return colors_; }
    Color max_color() const noexcept;

    bool operator==(const Coloring&) const = default;

private:
    std::vector<Color> colors_;
};

/// One color per line, vertex i on line i (blank lines and '#' comments skipped).
Coloring parse_partition(std::string_view text);
Coloring read_partition_file(const std::string& path);

/**
 * Color law of the free-labeling null: c_i i.i.d. with P(c_i = k) = p_k.
 * Caches the power sums p_(2), p_(3), p_(4).
 */
class ColorDistribution {
public:
    /// Probabilities must be nonnegative and sum to 1 within 1e-12.
    explicit ColorDistribution(std::vector<double> probs);

    static ColorDistribution uniform(std::size_t k);

    /// Empirical frequencies p_k = |{i : c_i = k}| / n.
    static ColorDistribution from_partition_counts(const Coloring& coloring, std::size_t k);

    /// Accepts a sum within 1e-9 of one and renormalizes.
    static ColorDistribution from_unnormalized(std::vector<double> probs);

    std::size_t num_colors() const noexcept { return probs_.size(); }
    double prob(Color a) const;
    std::span<const double> probs() const noexcept { return probs_; }

    /// p indexed by color: element 0 is unused, element k is p_k.
    std::span<const double> probs_by_color() const noexcept { return by_color_; }

    double p2() const noexcept { return p2_; }
    double p3() const noexcept { return p3_; }
    double p4() const noexcept { return p4_; }

    /// r1 = p2 + p2^2 - 2 p3 = Var(hbar(c_i, c_j)); zero iff degenerate.
    bool degenerate() const noexcept;

private:
    std::vector<double> probs_;
    std::vector<double> by_color_;
    double p2_ = 0.0;
    double p3_ = 0.0;
    double p4_ = 0.0;
};

/// One probability per line; sum validated within 1e-9 then renormalized.
ColorDistribution parse_probabilities(std::string_view text);
ColorDistribution read_probability_file(const std::string& path);

double power_sum(const ColorDistribution& d, int l);

/// delta_{a,b} - p_a - p_b + p_(2).
double hbar(const ColorDistribution& d, Color a, Color b);

/// E[hbar(a, c)^2] for c ~ d.
double cond_second_moment(const ColorDistribution& d, Color a);

/// E[hbar(a, c) hbar(b, c)] for c ~ d.
double cond_cross_moment(const ColorDistribution& d, Color a, Color b);

struct MomentConstants {
    double r1 = 0.0;  // p2 + p2^2 - 2 p3
    double r2 = 0.0;  // p3 - p2^2
};

MomentConstants moment_constants(const ColorDistribution& d);

/**
 * Draw n i.i.d. colors by inverse-CDF lookup on SplitMix64(stream_seed).
 * Throws DomainError on a degenerate distribution unless allow_degenerate.
 */
Coloring sample_coloring(const ColorDistribution& d, std::size_t n, std::uint64_t stream_seed,
                         bool allow_degenerate = false);

/// Allocation-free variant for hot loops; `out` is resized to n.
void sample_colors_into(const ColorDistribution& d, std::size_t n, std::uint64_t stream_seed,
                        std::vector<Color>& out);

}  // namespace modnull
