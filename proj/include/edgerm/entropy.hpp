#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

namespace edgerm {

using Symbol = std::uint32_t;

/// Documented accuracy of every entropy reported in bits.
inline constexpr double entropy_tolerance_bits = 1e-9;

/// One random variable as its value on each of n equiprobable outcomes.
struct Column {
    std::span<const Symbol> values;
    std::uint64_t alphabet = 1;
};

/// Shannon entropy in bits of the joint value of the columns when the
/// outcome index is uniform on [0, n). Counts are exact integers; the only
/// floating point step is the final log-sum.
inline double joint_entropy_columns(std::span<const Column> columns, std::uint64_t n) {
    if (columns.empty() || n == 0) return 0.0;
    std::vector<std::uint64_t> counts;
    bool fits = true;
    std::uint64_t span = 1;
    for (const auto& c : columns) {
        if (c.alphabet != 0 && span > std::numeric_limits<std::uint64_t>::max() / c.alphabet) {
            fits = false;
            break;
        }
        span *= c.alphabet;
    }
    if (fits) {
        std::unordered_map<std::uint64_t, std::uint64_t> hist;
        for (std::uint64_t i = 0; i < n; ++i) {
            std::uint64_t key = 0;
            for (const auto& c : columns) key = key * c.alphabet + c.values[i];
            ++hist[key];
        }
        for (const auto& [k, v] : hist) counts.push_back(v);
    } else {
        std::map<std::vector<Symbol>, std::uint64_t> hist;
        std::vector<Symbol> key(columns.size());
        for (std::uint64_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < columns.size(); ++k) key[k] = columns[k].values[i];
            ++hist[key];
        }
        for (const auto& [k, v] : hist) counts.push_back(v);
    }
    double total = static_cast<double>(n);
    double acc = 0.0;
    for (auto c : counts) acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
    double h = std::log2(total) - acc / total;
    return h < 0.0 ? 0.0 : h;
}

}  // namespace edgerm
