#pragma once

#include "mss/panel.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace helpers {

inline std::vector<std::string> asset_labels(int d) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) labels.push_back("A" + std::to_string(j + 1));
    return labels;
}

inline std::vector<std::string> period_labels(int T, int start = 1) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "p%05d", start + t);
        labels.emplace_back(buf);
    }
    return labels;
}

/// Panel of iid standard normal returns.
inline mss::ReturnPanel random_panel(int T, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd values(T, d);
    for (int t = 0; t < T; ++t)
        for (int j = 0; j < d; ++j) values(t, j) = normal(rng);
    return mss::ReturnPanel(std::move(values), asset_labels(d), period_labels(T));
}

/// Gauss-Jordan solve with partial pivoting, independent of the library's
/// linear algebra. Returns x with a x = b.
inline std::vector<double> gauss_jordan_solve(std::vector<std::vector<double>> a,
                                              std::vector<double> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        const double diag = a[col][col];
        for (std::size_t c = col; c < n; ++c) a[col][c] /= diag;
        b[col] /= diag;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[r][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    return b;
}

}  // namespace helpers
