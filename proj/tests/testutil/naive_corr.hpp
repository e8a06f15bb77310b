#pragma once

// Naive correlation oracles, independent of the library implementations:
// midrank-by-counting SRCC, O(n^2) pair-counting tau-b, covariance-formula
// Pearson. Kept dumb on purpose.

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace testutil {

inline std::optional<double> naive_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double num = 0, dx2 = 0, dy2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        dx2 += (x[i] - mx) * (x[i] - mx);
        dy2 += (y[i] - my) * (y[i] - my);
    }
    if (dx2 == 0 || dy2 == 0) return std::nullopt;
    return num / std::sqrt(dx2 * dy2);
}

// rank_i = 1 + #(x_j < x_i) + #(x_j == x_i, j != i)/2
inline std::vector<double> naive_midranks(const std::vector<double>& x) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double below = 0, equal = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (j == i) continue;
            if (x[j] < x[i]) below += 1;
            if (x[j] == x[i]) equal += 1;
        }
        r[i] = 1.0 + below + equal / 2.0;
    }
    return r;
}

inline std::optional<double> naive_srcc(const std::vector<double>& x, const std::vector<double>& y) {
    return naive_pearson(naive_midranks(x), naive_midranks(y));
}

inline std::optional<double> naive_krcc(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = x[i] - x[j], dy = y[i] - y[j];
            if (dx == 0 && dy == 0) {
                ++ties_x;
                ++ties_y;
            } else if (dx == 0) {
                ++ties_x;
            } else if (dy == 0) {
                ++ties_y;
            } else if (dx * dy > 0) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    long long n0 = static_cast<long long>(n) * (n - 1) / 2;
    double den = std::sqrt(static_cast<double>(n0 - ties_x) * static_cast<double>(n0 - ties_y));
    if (den == 0) return std::nullopt;
    return static_cast<double>(concordant - discordant) / den;
}

}  // namespace testutil
