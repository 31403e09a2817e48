#include "pwlab/pnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace pwlab {

double conjugate_exponent(double p) {
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

namespace {

double vnorm(const VecC& v, double p) {
    if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
    double s = v.cwiseAbs().maxCoeff();
    if (s == 0.0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / s, p);
    return s * std::pow(acc, 1.0 / p);
}

// dual vector: <x, dual(x)> = ||x||_p, ||dual(x)||_q = 1
VecC dual(const VecC& x, double p) {
    VecC d = VecC::Zero(x.size());
    const double nx = vnorm(x, p);
    if (nx == 0.0) return d;
    if (std::isinf(p)) {
        Eigen::Index imax;
        x.cwiseAbs().maxCoeff(&imax);
        d[imax] = x[imax] / std::abs(x[imax]);
        return d;
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double r = std::abs(x[i]);
        if (r > 0.0) d[i] = (x[i] / r) * std::pow(r / nx, p - 1.0);
    }
    return d;
}

}  // namespace

double pnorm_lower(const LinearOp& A, const LinearOp& AH, int n, double p, const PowerOptions& opt) {
    if (std::isnan(p) || p < 1.0) throw std::domain_error("pnorm: p must be >= 1");
    const double q = conjugate_exponent(p);
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> nd;
    double best = 0.0;
    for (int r = 0; r < opt.restarts; ++r) {
        VecC x(n);
        if (r == 0) {
            x.setOnes();
        } else {
            for (int i = 0; i < n; ++i) x[i] = cplx(nd(rng), nd(rng));
        }
        x /= vnorm(x, p);
        double gamma = 0.0;
        for (int it = 0; it < opt.max_iter; ++it) {
            VecC y = A(x);
            const double g = vnorm(y, p);
            best = std::max(best, g);
            if (g == 0.0) break;
            VecC z = AH(dual(y, p));
            VecC xn = dual(z, q);
            const double nn = vnorm(xn, p);
            if (nn == 0.0) break;
            xn /= nn;
            if (it > 0 && g <= gamma * (1.0 + opt.tol)) break;
            gamma = g;
            x = xn;
        }
    }
    return best;
}

double spectral_norm(const MatC& M) {
    if (M.size() == 0) return 0.0;
    Eigen::BDCSVD<MatC> svd(M);
    return svd.singularValues()(0);
}

double pnorm_upper(const MatC& M, double p) {
    if (std::isnan(p) || p < 1.0) throw std::domain_error("pnorm: p must be >= 1");
    const double n1 = M.cwiseAbs().colwise().sum().maxCoeff();
    const double ninf = M.cwiseAbs().rowwise().sum().maxCoeff();
    if (p == 1.0) return n1;
    if (std::isinf(p)) return ninf;
    const double n2 = spectral_norm(M);
    if (p == 2.0) return n2;
    const double q = conjugate_exponent(p);
    double best = std::pow(n1, 1.0 / p) * std::pow(ninf, 1.0 / q);
    if (p < 2.0) {
        const double th = 2.0 * (1.0 - 1.0 / p);
        best = std::min(best, std::pow(n1, 1.0 - th) * std::pow(n2, th));
    } else {
        const double th = 2.0 / p;
        best = std::min(best, std::pow(n2, th) * std::pow(ninf, 1.0 - th));
    }
    return best;
}

NormBounds matrix_pnorm(const MatC& M, double p, const PowerOptions& opt) {
    if (std::isnan(p) || p < 1.0) throw std::domain_error("matrix_pnorm: p must be >= 1");
    NormBounds b;
    b.upper = pnorm_upper(M, p);
    if (p == 2.0 || p == 1.0 || std::isinf(p)) {
        b.lower = b.upper;
        return b;
    }
    const MatC MH = M.adjoint();
    b.lower = pnorm_lower([&](const VecC& x) -> VecC { return M * x; },
                          [&](const VecC& y) -> VecC { return MH * y; },
                          static_cast<int>(M.cols()), p, opt);
    b.lower = std::min(b.lower, b.upper);
    return b;
}

}  // namespace pwlab
