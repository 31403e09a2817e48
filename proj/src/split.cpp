#include "pwlab/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "pwlab/quadrature.hpp"

namespace pwlab {

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double e0 = std::exp(-1.0 / u);
    const double e1 = std::exp(-1.0 / (1.0 - u));
    return e0 / (e0 + e1);
}

namespace {

double psi_left(double x) { return smooth_step(0.5 * (x + 4.0)) * smooth_step(-4.0 * x - 1.0); }

}  // namespace

double bump(double x, Part which) {
    switch (which) {
        case Part::L:
            return psi_left(x);
        case Part::R:
            return psi_left(-x);
        case Part::C:
            if (std::abs(x) > 0.5) return 0.0;
            return 1.0 - psi_left(x) - psi_left(-x);
    }
    return 0.0;
}

std::pair<double, double> bump_support(Part which, double a) {
    switch (which) {
        case Part::L:
            return {-4.0 * a, -0.25 * a};
        case Part::R:
            return {0.25 * a, 4.0 * a};
        case Part::C:
            return {-0.5 * a, 0.5 * a};
    }
    return {0.0, 0.0};
}

namespace {

// inverse transform of psi_X(xi / a), frequency grid scaled with a
SampledFunction bump_transform(Part which, double a) {
    const Grid xi(-1024.0 * a, a / 512.0, 1 << 20);
    SampledFunction f = SampledFunction::from(xi, [&](double s) { return cplx(bump(s / a, which)); });
    return fft_spectrum(f);
}

}  // namespace

double bump_l1(Part which, double a) {
    Band{a};
    static std::mutex mu;
    static std::map<std::pair<int, double>, double> memo;
    const std::pair<int, double> key{static_cast<int>(which), a};
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    const double v = lp_norm(bump_transform(which, a), 1.0);
    std::lock_guard<std::mutex> lock(mu);
    memo[key] = v;
    return v;
}

double bump_decay_profile(Part which, double lo, double hi) {
    SampledFunction t = bump_transform(which, 1.0);
    double m = 0.0;
    for (int k = 0; k < t.size(); ++k) {
        const double x = std::abs(t.grid().x(k));
        if (x >= lo && x <= hi) m = std::max(m, std::pow(x, 6) * std::abs(t[k]));
    }
    return m;
}

namespace {

double support_residual(const SampledFunction& f, std::pair<double, double> sup) {
    SampledFunction s = fft_spectrum(f);
    const double tol = 0.5 * s.grid().step;
    double out = 0.0, tot = 0.0;
    for (int m = 0; m < s.size(); ++m) {
        const double e = std::norm(s[m]);
        const double xi = s.grid().x(m);
        tot += e;
        if (xi < sup.first - tol || xi > sup.second + tol) out += e;
    }
    return tot == 0.0 ? 0.0 : out / tot;
}

SymbolPtr part_symbol(SymbolPtr phi, Part which, double a) {
    const auto [lo, hi] = bump_support(which, a);
    return filtered(std::move(phi), [which, a](double s) { return bump(s / a, which); }, lo, hi);
}

}  // namespace

SplitResult split_symbol(SymbolPtr phi, double a, const Grid& g) {
    Band{a};
    if (!(g.nyquist() > 4.0 * a)) throw std::invalid_argument("split_symbol: grid does not resolve 4a");
    SplitResult r;
    r.left = part_symbol(phi, Part::L, a);
    r.central = part_symbol(phi, Part::C, a);
    r.right = part_symbol(phi, Part::R, a);
    r.l1_left = bump_l1(Part::L, a);
    r.l1_central = bump_l1(Part::C, a);
    r.l1_right = bump_l1(Part::R, a);
    r.cert_left = support_residual(r.left->sample(g), bump_support(Part::L, a));
    r.cert_central = support_residual(r.central->sample(g), bump_support(Part::C, a));
    r.cert_right = support_residual(r.right->sample(g), bump_support(Part::R, a));

    if (phi->has_density()) {
        Rule q = composite_gauss(-2.0 * a, 2.0 * a, a / 64.0, {-0.5 * a, -0.25 * a, 0.25 * a, 0.5 * a});
        std::vector<cplx> d(q.size()), dl(q.size()), dc(q.size()), dr(q.size());
        phi->density(q.x, d);
        r.left->density(q.x, dl);
        r.central->density(q.x, dc);
        r.right->density(q.x, dr);
        double num = 0.0, den = 0.0;
        for (size_t k = 0; k < q.size(); ++k) {
            num = std::max(num, std::abs(dl[k] + dc[k] + dr[k] - d[k]));
            den = std::max(den, std::abs(d[k]));
        }
        r.partition_residual = den == 0.0 ? num : num / den;
    }
    r.schwartz_warning = phi->extent() > 0.25 * g.half_length();
    for (const auto& m : phi->masses())
        if (m.order > 0) r.schwartz_warning = true;
    return r;
}

JensenReport jensen_certificate(SymbolPtr phi, double a, double p, const Basis& b, const Grid& g) {
    JensenReport rep;
    SplitResult s = split_symbol(phi, a, g);
    rep.t_phi = matrix_pnorm(toeplitz_matrix(*phi, b), p).lower;
    const SymbolPtr parts[3] = {s.left, s.central, s.right};
    rep.l1[0] = s.l1_left;
    rep.l1[1] = s.l1_central;
    rep.l1[2] = s.l1_right;
    rep.constant = s.constant();
    for (int i = 0; i < 3; ++i) {
        rep.t_part[i] = matrix_pnorm(toeplitz_matrix(*parts[i], b), p).lower;
        if (rep.t_part[i] > rep.l1[i] * rep.t_phi * (1.0 + 1e-3)) rep.holds = false;
    }
    return rep;
}

cplx central_recover(const GridOperator& tc, double a, double x, const Grid& g) {
    const double eps = a / 8.0;
    SampledFunction probe = sinc_kernel(eps, x, g);
    return evaluate_offgrid(tc(probe), x) / (2.0 * eps);
}

double sinc_lp_norm(double b, double p) {
    if (!(b > 0.0)) throw std::invalid_argument("sinc_lp_norm: b must be > 0");
    if (!(p > 1.0)) throw std::domain_error("sinc_lp_norm: p must be > 1");
    if (std::isinf(p)) return 2.0 * b;
    // S_p = 2 int_0^inf |sin(pi u)/(pi u)|^p du, one Gauss panel per lobe
    const int lobes = 8192;
    const Rule& gl = gauss_legendre(32);
    double acc = 0.0;
    for (int n = 0; n < lobes; ++n) {
        double lobe = 0.0;
        for (size_t q = 0; q < gl.size(); ++q) {
            const double u = n + 0.5 * (gl.x[q] + 1.0);
            lobe += 0.5 * gl.w[q] * std::pow(std::abs(sinc(0.5, u)), p);
        }
        acc += lobe;
    }
    const double mp = std::tgamma(0.5 * (p + 1.0)) / (std::sqrt(pi) * std::tgamma(0.5 * p + 1.0));
    acc += mp * std::pow(pi, -p) * std::pow(static_cast<double>(lobes), 1.0 - p) / (p - 1.0);
    const double sp = 2.0 * acc;
    return std::pow(2.0 * b, (p - 1.0) / p) * std::pow(sp, 1.0 / p);
}

SincNormConstant sinc_norm_constant(double p) {
    if (!(p > 1.0) || std::isinf(p)) throw std::domain_error("sinc_norm_constant: p must lie in (1, inf)");
    SincNormConstant c;
    c.product = sinc_lp_norm(1.0, conjugate_exponent(p)) * sinc_lp_norm(0.125, p);
    c.bound = (4.0 / pi) * (p + 1.0 / (p - 1.0));
    return c;
}

}  // namespace pwlab
