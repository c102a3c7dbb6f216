#include "modnull/color_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "modnull/error.hpp"
#include "modnull/numeric.hpp"
#include "modnull/rng.hpp"

namespace modnull {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string slurp(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(std::string("cannot open ") + what + " file", path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

template <typename Fn>
void for_each_data_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = trim(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (line.empty() || line.front() == '#') continue;
        fn(line, line_no);
    }
}

std::string line_context(std::size_t line) { return "line " + std::to_string(line); }

void check_color(const ColorDistribution& d, Color a) {
    if (a < 1 || a > d.num_colors()) {
        throw InputError("color out of range 1.." + std::to_string(d.num_colors()),
                         "color=" + std::to_string(a));
    }
}

}  // namespace

Coloring::Coloring(std::vector<Color> colors) : colors_(std::move(colors)) {
    for (std::size_t i = 0; i < colors_.size(); ++i) {
        if (colors_[i] == 0) {
            throw InputError("colors are 1-based", "vertex " + std::to_string(i));
        }
    }
}

Color Coloring::max_color() const noexcept {
    return colors_.empty() ? 0 : *std::max_element(colors_.begin(), colors_.end());
}

Coloring parse_partition(std::string_view text) {
    std::vector<Color> colors;
    for_each_data_line(text, [&](std::string_view line, std::size_t line_no) {
        std::uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
        if (ec != std::errc() || ptr != line.data() + line.size() || value == 0 || value > 0xFFFFFFFFULL) {
            throw InputError("expected a positive integer color", line_context(line_no));
        }
        colors.push_back(static_cast<Color>(value));
    });
    if (colors.empty()) throw InputError("partition is empty", "n=0");
    return Coloring(std::move(colors));
}

Coloring read_partition_file(const std::string& path) { return parse_partition(slurp(path, "partition")); }

ColorDistribution::ColorDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw InputError("color distribution needs at least one color", "K=0");
    CompensatedSum total;
    for (std::size_t k = 0; k < probs_.size(); ++k) {
        if (!(probs_[k] >= 0.0) || !std::isfinite(probs_[k])) {
            throw InputError("probabilities must be finite and nonnegative", "p_" + std::to_string(k + 1));
        }
        total += probs_[k];
    }
    if (std::fabs(total.value() - 1.0) > 1e-12) {
        throw InputError("probabilities must sum to 1", "sum=" + std::to_string(total.value()));
    }
    by_color_.reserve(probs_.size() + 1);
    by_color_.push_back(0.0);
    by_color_.insert(by_color_.end(), probs_.begin(), probs_.end());
    p2_ = power_sum(*this, 2);
    p3_ = power_sum(*this, 3);
    p4_ = power_sum(*this, 4);
}

ColorDistribution ColorDistribution::uniform(std::size_t k) {
    if (k == 0) throw InputError("color distribution needs at least one color", "K=0");
    return ColorDistribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

ColorDistribution ColorDistribution::from_partition_counts(const Coloring& coloring, std::size_t k) {
    if (coloring.size() == 0) throw InputError("partition is empty", "n=0");
    if (coloring.max_color() > k) {
        throw InputError("partition uses a color above K", "K=" + std::to_string(k));
    }
    std::vector<std::size_t> counts(k, 0);
    for (Color c : coloring.colors()) ++counts[c - 1];
    std::vector<double> probs(k);
    const double n = static_cast<double>(coloring.size());
    for (std::size_t i = 0; i < k; ++i) probs[i] = static_cast<double>(counts[i]) / n;
    return from_unnormalized(std::move(probs));
}

ColorDistribution ColorDistribution::from_unnormalized(std::vector<double> probs) {
    CompensatedSum total;
    for (double p : probs) total += p;
    const double sum = total.value();
    if (!std::isfinite(sum) || std::fabs(sum - 1.0) > 1e-9) {
        throw InputError("probabilities must sum to 1 within 1e-9", "sum=" + std::to_string(sum));
    }
    for (double& p : probs) p /= sum;
    return ColorDistribution(std::move(probs));
}

double ColorDistribution::prob(Color a) const {
    check_color(*this, a);
    return by_color_[a];
}

bool ColorDistribution::degenerate() const noexcept {
    return std::count_if(probs_.begin(), probs_.end(), [](double p) { return p > 0.0; }) <= 1;
}

ColorDistribution parse_probabilities(std::string_view text) {
    std::vector<double> probs;
    for_each_data_line(text, [&](std::string_view line, std::size_t line_no) {
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
        if (ec != std::errc() || ptr != line.data() + line.size()) {
            throw InputError("expected a probability", line_context(line_no));
        }
        probs.push_back(value);
    });
    if (probs.empty()) throw InputError("probability file is empty", "K=0");
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (!(probs[k] >= 0.0)) {
            throw InputError("probabilities must be nonnegative", "p_" + std::to_string(k + 1));
        }
    }
    return ColorDistribution::from_unnormalized(std::move(probs));
}

ColorDistribution read_probability_file(const std::string& path) {
    return parse_probabilities(slurp(path, "probability"));
}

double power_sum(const ColorDistribution& d, int l) {
    if (l < 1) throw InputError("power sum order must be >= 1", "l=" + std::to_string(l));
    CompensatedSum s;
    for (double p : d.probs()) s += std::pow(p, l);
    return s.value();
}

double hbar(const ColorDistribution& d, Color a, Color b) {
    check_color(d, a);
    check_color(d, b);
    const auto p = d.probs_by_color();
    return (a == b ? 1.0 : 0.0) - p[a] - p[b] + d.p2();
}

double cond_second_moment(const ColorDistribution& d, Color a) {
    check_color(d, a);
    const double pa = d.probs_by_color()[a];
    const double p2 = d.p2();
    return pa - 3.0 * pa * pa + 2.0 * p2 * pa - p2 * p2 + d.p3();
}

double cond_cross_moment(const ColorDistribution& d, Color a, Color b) {
    check_color(d, a);
    check_color(d, b);
    const auto p = d.probs_by_color();
    const double pa = p[a];
    const double pb = p[b];
    const double p2 = d.p2();
    const double same = a == b ? (pa + pb) / 2.0 : 0.0;
    return same - pa * pb - pa * pa + pa * p2 - pb * pb + pb * p2 + d.p3() - p2 * p2;
}

MomentConstants moment_constants(const ColorDistribution& d) {
    const double p2 = d.p2();
    const double p3 = d.p3();
    MomentConstants c;
    c.r1 = d.degenerate() ? 0.0 : p2 + p2 * p2 - 2.0 * p3;
    c.r2 = d.degenerate() ? 0.0 : p3 - p2 * p2;
    // rounding can push a zero r2 (uniform law) slightly negative
    if (c.r2 < 0.0 && c.r2 > -1e-15) c.r2 = 0.0;
    return c;
}

void sample_colors_into(const ColorDistribution& d, std::size_t n, std::uint64_t stream_seed,
                        std::vector<Color>& out) {
    const auto probs = d.probs();
    std::vector<double> cdf(probs.size());
    CompensatedSum running;
    Color last_positive = 1;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        running += probs[k];
        cdf[k] = running.value();
        if (probs[k] > 0.0) last_positive = static_cast<Color>(k + 1);
    }
    SplitMix64 rng(stream_seed);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        out[i] = it == cdf.end() ? last_positive : static_cast<Color>(it - cdf.begin() + 1);
    }
}

Coloring sample_coloring(const ColorDistribution& d, std::size_t n, std::uint64_t stream_seed,
                         bool allow_degenerate) {
    if (n == 0) throw InputError("sample size must be positive", "n=0");
    if (d.degenerate() && !allow_degenerate) {
        throw DomainError("degenerate color distribution (r1 = 0)", "K=" + std::to_string(d.num_colors()));
    }
    std::vector<Color> colors;
    sample_colors_into(d, n, stream_seed, colors);
    return Coloring(std::move(colors));
}

}  // namespace modnull
