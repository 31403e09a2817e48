#pragma once

#include <vector>

namespace pwlab {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
    void append(const Rule& o);
    size_t size() const { return x.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre(int n);

/// Composite Gauss-Legendre on [lo, hi], panels of width <= h, split at breaks.
Rule composite_gauss(double lo, double hi, double h, const std::vector<double>& breaks = {},
                     int order = 16);

}  // namespace pwlab
