#include "pwlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "pwlab/grid.hpp"

namespace pwlab {

void Rule::append(const Rule& o) {
    x.insert(x.end(), o.x.begin(), o.x.end());
    w.insert(w.end(), o.w.begin(), o.w.end());
}

const Rule& gauss_legendre(int n) {
    static std::mutex m;
    static std::map<int, Rule> cache;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    // Newton on P_n from the Tricomi initial guess
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return cache.emplace(n, std::move(r)).first->second;
}

Rule composite_gauss(double lo, double hi, double h, const std::vector<double>& breaks, int order) {
    Rule out;
    if (!(hi > lo)) return out;
    std::vector<double> pts{lo, hi};
    for (double b : breaks)
        if (b > lo && b < hi) pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    const Rule& g = gauss_legendre(order);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const double l = pts[i], r = pts[i + 1];
        if (r - l <= 0.0) continue;
        const int np = std::max(1, static_cast<int>(std::ceil((r - l) / h)));
        const double w = (r - l) / np;
        for (int p = 0; p < np; ++p) {
            const double pl = l + p * w;
            for (int q = 0; q < order; ++q) {
                out.x.push_back(pl + 0.5 * w * (g.x[q] + 1.0));
                out.w.push_back(0.5 * w * g.w[q]);
            }
        }
    }
    return out;
}

}  // namespace pwlab
