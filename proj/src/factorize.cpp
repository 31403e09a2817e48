#include "pwlab/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pwlab/kernels.hpp"
#include "pwlab/pnorm.hpp"

namespace pwlab {

namespace {

double resolve_margin(const BandlimitedFunction& h, double a, double margin) {
    Band{a};
    const double b = margin < 0.0 ? 0.5 * h.a : margin;
    if (!(b > 0.0)) throw std::invalid_argument("factorize: margin must be > 0");
    if (!(b < a)) throw std::domain_error("factorize: margin b must satisfy b < a");
    return b;
}

double sup_abs(const SampledFunction& f) {
    double m = 0.0;
    for (int k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f[k]));
    return m;
}

// t - c folded into [-L/2, L/2)
double centered(double t, const Grid& g) {
    const double L = g.length();
    const double c = g.start + 0.5 * L;
    double u = std::fmod(t - c + 0.5 * L, L);
    if (u < 0.0) u += L;
    return u - 0.5 * L;
}

// samples at arbitrary points of a window-periodic function, direct lookup on grid points
CVec periodic_samples(const SampledFunction& f, const std::vector<double>& xs) {
    const Grid& g = f.grid();
    CVec out(xs.size());
    std::vector<double> off;
    std::vector<size_t> where;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double u = (xs[i] - g.start) / g.step;
        const double r = std::round(u);
        if (std::abs(u - r) < 1e-9) {
            long k = static_cast<long>(r) % g.count;
            if (k < 0) k += g.count;
            out[i] = f[static_cast<int>(k)];
        } else {
            off.push_back(xs[i]);
            where.push_back(i);
        }
    }
    if (!off.empty()) {
        const CVec v = evaluate_offgrid(f, off);
        for (size_t i = 0; i < off.size(); ++i) out[where[i]] = v[i];
    }
    return out;
}

Factorization empty_factorization(double a, double p) {
    Factorization F;
    F.a = a;
    F.p = p;
    return F;
}

}  // namespace

SampledFunction fejer_deconvolve(const BandlimitedFunction& h, double a, double margin) {
    const double b = resolve_margin(h, a, margin);
    const Grid& g = h.f.grid();
    if (!(g.nyquist() > 2.0 * a)) throw std::invalid_argument("fejer_deconvolve: grid does not resolve 2a");
    if (band_residual(h.f, 2.0 * b) > 1e-8)
        throw std::invalid_argument("fejer_deconvolve: target is not band-certified at 2b");
    const BandlimitedFunction s = sinc_member(a, 0.0, g);
    const SampledFunction K = fft_spectrum(pointwise(s.f, s.f));
    SampledFunction W = fft_spectrum(h.f);
    const Grid& fg = W.grid();
    for (int m = 0; m < fg.count; ++m) {
        if (std::abs(fg.x(m)) <= 2.0 * b + 0.5 * fg.step)
            W[m] /= K[m].real();
        else
            W[m] = 0.0;
    }
    return inverse_spectrum(W, g);
}

Factorization weak_factorize(const BandlimitedFunction& h, double a, double p, const FactorizeOptions& opt) {
    Band{a};
    if (!(p > 1.0) || std::isinf(p)) throw std::domain_error("weak_factorize: p must lie in (1, inf)");
    const Grid& g = h.f.grid();
    const double q = conjugate_exponent(p);
    Factorization F = empty_factorization(a, p);
    const double hmax = sup_abs(h.f);
    if (hmax == 0.0) return F;

    // a single atom sinc_a(. - t)^2 is returned as it is
    {
        int kmax = 0;
        for (int k = 0; k < g.count; ++k)
            if (std::abs(h.f[k]) > std::abs(h.f[kmax])) kmax = k;
        const BandlimitedFunction s = sinc_member(a, g.x(kmax), g, p);
        double dev = 0.0;
        for (int k = 0; k < g.count; ++k) dev = std::max(dev, std::abs(h.f[k] - s.f[k] * s.f[k]));
        if (dev <= 1e-12 * hmax) {
            BandlimitedFunction gq = s;
            gq.p = q;
            F.pairs.push_back({s, gq});
            F.nuclear_sum = lp_norm(s.f, p) * lp_norm(s.f, q);
            F.residual_sup = dev;
            F.passthrough = true;
            return F;
        }
    }

    const double b = resolve_margin(h, a, opt.margin);
    const SampledFunction w = fejer_deconvolve(h, a, b);
    const double bound = 1.0 / (2.0 * (a + b));
    const double L = g.length();
    double delta = opt.spacing;
    if (delta > 0.0) {
        if (!(delta < bound)) throw std::invalid_argument("weak_factorize: spacing violates the Poisson condition");
        const double per = L / delta;
        if (std::abs(per - std::round(per)) > 1e-9 * per)
            throw std::invalid_argument("weak_factorize: spacing must divide the window length");
    } else {
        int m = 1;
        while (2 * m * g.step < bound && g.count % (2 * m) == 0) m *= 2;
        if (!(m * g.step < bound)) throw std::invalid_argument("weak_factorize: grid step too coarse for the atom plan");
        delta = m * g.step;
    }
    const int K = static_cast<int>(std::llround(L / delta));

    FejerAtomPlan& plan = F.plan;
    plan.spacing = delta;
    plan.margin = b;
    plan.centers.resize(K);
    for (int k = 0; k < K; ++k) plan.centers[k] = g.start + k * delta;
    plan.weights = periodic_samples(w, plan.centers);
    for (int k = 0; k < K; ++k) {
        const double t = centered(plan.centers[k], g);
        plan.decay_constant = std::max(plan.decay_constant, std::abs(plan.weights[k]) * (1.0 + t * t));
    }

    F.pairs.resize(K);
    std::vector<double> norms(K);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < K; ++k) {
        BandlimitedFunction s = sinc_member(a, plan.centers[k], g, q);
        BandlimitedFunction f = s;
        f.p = p;
        f.f *= delta * plan.weights[k];
        norms[k] = lp_norm(f.f, p) * lp_norm(s.f, q);
        F.pairs[k] = {std::move(f), std::move(s)};
    }
    for (double v : norms) F.nuclear_sum += v;

    SampledFunction rec(g);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.count; ++i) {
        cplx acc = 0.0;
        for (int k = 0; k < K; ++k) acc += F.pairs[k].f.f[i] * std::conj(F.pairs[k].g.f[i]);
        rec[i] = acc;
    }
    const SampledFunction diff = rec - h.f;
    F.residual_sup = sup_abs(diff);
    F.residual_l1 = lp_norm(diff, 1.0);
    F.truncation_flag = F.residual_sup > 1e-6 * hmax || F.residual_l1 > 1e-5 * lp_norm(h.f, 1.0);
    return F;
}

namespace {

MatC nyquist_columns(const Factorization& F, const Basis& b, bool use_f) {
    const std::vector<double> nodes = b.nodes();
    const int K = static_cast<int>(F.pairs.size());
    MatC out(b.count, K);
    const double s = 1.0 / std::sqrt(2.0 * b.a);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < K; ++k) {
        const CVec v = periodic_samples(use_f ? F.pairs[k].f.f : F.pairs[k].g.f, nodes);
        for (int j = 0; j < b.count; ++j) out(j, k) = s * v[j];
    }
    return out;
}

void check_bands(const OperatorMatrix& T, const Factorization& F) {
    if (std::abs(T.a - F.a) > 1e-12 * std::max(1.0, F.a) || std::abs(T.basis.a - F.a) > 1e-12 * std::max(1.0, F.a))
        throw std::invalid_argument("pair: band mismatch between operator and factorization");
}

}  // namespace

cplx pair(const OperatorMatrix& T, const Factorization& F) {
    check_bands(T, F);
    if (F.pairs.empty()) return 0.0;
    const MatC Fc = nyquist_columns(F, T.basis, true);
    const MatC Gc = nyquist_columns(F, T.basis, false);
    const MatC TF = kernels::matmul(T.entries, Fc);
    return Gc.conjugate().cwiseProduct(TF).sum();
}

double holder_ratio(const OperatorMatrix& T, const Factorization& F) {
    check_bands(T, F);
    if (F.pairs.empty()) return 0.0;
    const double nt = matrix_pnorm(T.entries, F.p).upper;
    if (nt == 0.0) return 0.0;
    const MatC Fc = nyquist_columns(F, T.basis, true);
    const MatC Gc = nyquist_columns(F, T.basis, false);
    const MatC TF = kernels::matmul(T.entries, Fc);
    const double q = conjugate_exponent(F.p);
    double worst = 0.0;
    for (size_t k = 0; k < F.pairs.size(); ++k) {
        const auto c = static_cast<Eigen::Index>(k);
        const VecC fk = Fc.col(c), gk = Gc.col(c);
        const double den = nt * lp_norm(std::span<const cplx>(fk.data(), fk.size()), F.p) *
                           lp_norm(std::span<const cplx>(gk.data(), gk.size()), q);
        if (den > 0.0) worst = std::max(worst, std::abs(Gc.col(c).dot(TF.col(c))) / den);
    }
    return worst;
}

std::vector<OperatorMatrix> xpq_test_set(double a, double p, const Basis& b, int n, std::uint64_t seed) {
    Band{a};
    std::vector<OperatorMatrix> out;
    if (n <= 0) return out;
    OperatorMatrix id;
    id.entries = MatC::Identity(b.count, b.count);
    id.a = a;
    id.p = p;
    id.basis = b;
    out.push_back(id);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (static_cast<int>(out.size()) < n) {
        const cplx amp = std::polar(1.0, 2.0 * pi * u(rng));
        const double beta = 0.5 + 1.5 * u(rng);
        const double center = 4.0 * u(rng) - 2.0;
        const double freq = (4.0 * u(rng) - 2.0) * a;
        OperatorMatrix T = assemble_toeplitz(*gaussian(amp, beta, center, freq), b, p);
        const double nt = matrix_pnorm(T.entries, p).upper;
        if (!(nt > 0.0)) continue;
        T.entries /= nt;
        out.push_back(std::move(T));
    }
    return out;
}

XpqEstimate xpq_norm_estimate(const BandlimitedFunction& h, double a, double p,
                              const std::vector<OperatorMatrix>& test_set, const FactorizeOptions& opt) {
    XpqEstimate x;
    x.l1 = lp_norm(h.f, 1.0);
    if (x.l1 == 0.0) return x;
    const Factorization F = weak_factorize(h, a, p, opt);
    x.nuclear_sum = F.nuclear_sum;
    for (const auto& T : test_set) x.estimate = std::max(x.estimate, std::abs(pair(T, F)));
    const double slack = 1.0 + 1e-6;
    x.sandwich = x.l1 <= x.nuclear_sum * slack && x.estimate <= x.nuclear_sum * slack;
    return x;
}

nlohmann::json to_json(const Factorization& F, bool summary) {
    nlohmann::json j;
    j["a"] = F.a;
    j["p"] = F.p;
    j["nuclear_sum"] = F.nuclear_sum;
    j["residual_l1"] = F.residual_l1;
    j["residual_sup"] = F.residual_sup;
    j["truncation_flag"] = F.truncation_flag;
    j["passthrough"] = F.passthrough;
    j["pair_count"] = F.pairs.size();
    j["plan"] = {{"spacing", F.plan.spacing},
                 {"margin", F.plan.margin},
                 {"atoms", F.plan.centers.size()},
                 {"decay_constant", F.plan.decay_constant}};
    if (!summary) {
        nlohmann::json centers = nlohmann::json::array(), weights = nlohmann::json::array();
        for (size_t k = 0; k < F.plan.centers.size(); ++k) {
            centers.push_back(F.plan.centers[k]);
            weights.push_back(complex_to_json(F.plan.weights[k]));
        }
        j["plan"]["centers"] = centers;
        j["plan"]["weights"] = weights;
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& pr : F.pairs) pairs.push_back({{"f", to_json(pr.f.f)}, {"g", to_json(pr.g.f)}});
        j["pairs"] = pairs;
    }
    return j;
}

nlohmann::json to_json(const XpqEstimate& x) {
    return {{"estimate", x.estimate}, {"l1", x.l1}, {"nuclear_sum", x.nuclear_sum}, {"sandwich", x.sandwich}};
}

}  // namespace pwlab
