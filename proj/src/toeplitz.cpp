#include "pwlab/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>

#include "pwlab/quadrature.hpp"

namespace pwlab {

Basis Basis::centered(double a, double half, double edge) {
    Band{a};
    const int n = static_cast<int>(std::llround(2.0 * a * half));
    if (2 * n < 8) throw std::invalid_argument("basis: window yields fewer than 8 basis functions");
    Basis b;
    b.a = a;
    b.k0 = -n;
    b.count = 2 * n;
    b.window = half;
    b.edge = edge;
    return b;
}

std::vector<double> Basis::nodes() const {
    std::vector<double> t(count);
    for (int k = 0; k < count; ++k) t[k] = node(k);
    return t;
}

bool Basis::interior(int k) const { return std::abs(node(k)) <= (1.0 - edge) * window; }

std::vector<int> Basis::interior_indices() const {
    std::vector<int> idx;
    for (int k = 0; k < count; ++k)
        if (interior(k)) idx.push_back(k);
    return idx;
}

SampledFunction Basis::element(int k, const Grid& g) const {
    SampledFunction e = sinc_member(a, node(k), g).f;
    return (1.0 / std::sqrt(2.0 * a)) * std::move(e);
}

nlohmann::json to_json(const Basis& b) {
    return {{"a", b.a}, {"k0", b.k0}, {"count", b.count}, {"window", b.window}, {"edge", b.edge}};
}

Basis basis_from_json(const nlohmann::json& j) {
    for (const char* key : {"a", "k0", "count", "window"})
        if (!j.contains(key)) throw std::invalid_argument(std::string("basis: missing field '") + key + "'");
    Basis b;
    b.a = j.at("a").get<double>();
    b.k0 = j.at("k0").get<int>();
    b.count = j.at("count").get<int>();
    b.window = j.at("window").get<double>();
    b.edge = j.value("edge", 0.1);
    Band{b.a};
    if (b.count < 8) throw std::invalid_argument("basis: field 'count' must be >= 8");
    return b;
}

nlohmann::json to_json(const OperatorMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.entries.rows(); ++j) {
        nlohmann::json r = nlohmann::json::array();
        for (Eigen::Index k = 0; k < m.entries.cols(); ++k) r.push_back(complex_to_json(m.entries(j, k)));
        rows.push_back(std::move(r));
    }
    return {{"band", m.a}, {"p", m.p}, {"basis", to_json(m.basis)}, {"entries", rows}};
}

OperatorMatrix operator_from_json(const nlohmann::json& j) {
    for (const char* key : {"band", "p", "basis", "entries"})
        if (!j.contains(key)) throw std::invalid_argument(std::string("operator: missing field '") + key + "'");
    OperatorMatrix m;
    m.a = j.at("band").get<double>();
    m.p = j.at("p").get<double>();
    m.basis = basis_from_json(j.at("basis"));
    if (std::abs(m.basis.a - m.a) > 1e-15 * m.a)
        throw std::invalid_argument("operator: basis spacing does not match field 'band'");
    const auto& e = j.at("entries");
    const int n = m.basis.count;
    if (!e.is_array() || static_cast<int>(e.size()) != n)
        throw std::invalid_argument("operator: field 'entries' must be count x count");
    m.entries.resize(n, n);
    for (int r = 0; r < n; ++r) {
        if (!e[r].is_array() || static_cast<int>(e[r].size()) != n)
            throw std::invalid_argument("operator: field 'entries' must be count x count");
        for (int c = 0; c < n; ++c) {
            const cplx v = complex_from_json(e[r][c]);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("operator: field 'entries' has a non-finite value");
            m.entries(r, c) = v;
        }
    }
    return m;
}

Grid default_grid(double a, double half, double oversample) {
    Band{a};
    // step a power of two fraction so that band edges land on frequency bins
    const double target = 1.0 / (2.0 * a * oversample);
    const double step = std::pow(2.0, std::floor(std::log2(target)));
    return Grid::window(-half, half, step);
}

Grid assembly_grid(double a, double half, double oversample) {
    const Grid g = default_grid(a, half, oversample);
    // odd 2aL: no frequency bin sits on the band edge
    const double trim = 0.25 / a;
    return Grid::window(-half + trim, half - trim, g.step);
}

MatC toeplitz_matrix(const Symbol& phi, const Basis& b, Exec ex) {
    const double a = b.a;
    const double a2 = 2.0 * a;
    const std::vector<double> t = b.nodes();
    const int n = b.count;
    std::vector<cplx> pp(n, 0.0), pm(n, 0.0), dg(n, 0.0);

    for (const auto& m : phi.masses()) {
        if (m.w == 0.0 || std::abs(m.s) >= a2 * (1.0 - 1e-12)) continue;
        if (m.order > 0)
            throw std::invalid_argument("toeplitz: polynomial symbol with frequency inside (-2a, 2a) is unsupported");
        for (int k = 0; k < n; ++k) {
            const cplx e = std::exp(2.0 * pi * I * m.s * t[k]);
            if (m.s > 0.0) pp[k] += m.w * e;
            if (m.s < 0.0) pm[k] += m.w * e;
            dg[k] += m.w * (a2 - std::abs(m.s)) * e;
        }
    }

    if (phi.has_density()) {
        const auto [l, r] = phi.hull();
        const double lo = std::max(l, -a2), hi = std::min(r, a2);
        if (hi > lo) {
            // mirror-symmetric nodes on [0, 2a]; a real symbol then gives an exactly Hermitian matrix
            std::vector<double> br;
            for (double v : phi.breakpoints()) br.push_back(std::abs(v));
            br.push_back(std::abs(lo));
            br.push_back(std::abs(hi));
            const double tmax = std::max(std::abs(t.front()), std::abs(t.back()));
            const int panels = static_cast<int>(std::ceil(4.0 * a2 * (tmax + phi.extent()))) + 32;
            Rule half = composite_gauss(0.0, a2, a2 / panels, br);
            std::vector<double> sp, sm;
            std::vector<double> wp, wm;
            for (size_t q = 0; q < half.size(); ++q) {
                if (half.x[q] <= hi) {
                    sp.push_back(half.x[q]);
                    wp.push_back(half.w[q]);
                }
                if (-half.x[q] >= lo) {
                    sm.push_back(-half.x[q]);
                    wm.push_back(half.w[q]);
                }
            }
            std::vector<cplx> dp(sp.size()), dm(sm.size());
            phi.density(sp, dp);
            phi.density(sm, dm);
            std::vector<cplx> cwp(sp.size()), cwm(sm.size());
            for (size_t q = 0; q < sp.size(); ++q) cwp[q] = wp[q] * dp[q];
            for (size_t q = 0; q < sm.size(); ++q) cwm[q] = wm[q] * dm[q];
            std::vector<cplx> tmp(n);
            kernels::exp_sum(sp, cwp, t, +1.0, tmp, ex);
            for (int k = 0; k < n; ++k) pp[k] += tmp[k];
            kernels::exp_sum(sm, cwm, t, +1.0, tmp, ex);
            for (int k = 0; k < n; ++k) pm[k] += tmp[k];
            for (size_t q = 0; q < sp.size(); ++q) cwp[q] *= (a2 - sp[q]);
            for (size_t q = 0; q < sm.size(); ++q) cwm[q] *= (a2 + sm[q]);
            kernels::exp_sum(sp, cwp, t, +1.0, tmp, ex);
            for (int k = 0; k < n; ++k) dg[k] += tmp[k];
            kernels::exp_sum(sm, cwm, t, +1.0, tmp, ex);
            for (int k = 0; k < n; ++k) dg[k] += tmp[k];
        }
    }
    return kernels::toeplitz_from_moments(pp, pm, dg, a, ex);
}

OperatorMatrix assemble_toeplitz(const Symbol& phi, const Basis& b, double p) {
    return {toeplitz_matrix(phi, b), b.a, p, b};
}

OperatorMatrix assemble_matrix(const GridOperator& apply, const Basis& b, double p, const Grid& g) {
    const double lo = g.x(0), hi = g.x(g.count - 1);
    if (b.node(0) < lo || b.node(b.count - 1) > hi)
        throw std::invalid_argument("assemble_matrix: basis window exceeds the grid");
    const std::vector<double> t = b.nodes();
    OperatorMatrix M;
    M.entries.resize(b.count, b.count);
    M.a = b.a;
    M.p = p;
    M.basis = b;
    const double scale = 1.0 / std::sqrt(2.0 * b.a);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < b.count; ++k) {
        try {
            SampledFunction col = apply(b.element(k, g));
            CVec v = evaluate_offgrid(col, t);
            for (int j = 0; j < b.count; ++j) M.entries(j, k) = scale * v[j];
        } catch (...) {
#pragma omp critical
            err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return M;
}

namespace {

double spectral_radius(const Symbol& phi) {
    double r = 0.0;
    if (phi.has_density()) {
        const auto [l, h] = phi.hull();
        r = std::max(std::abs(l), std::abs(h));
    }
    for (const auto& m : phi.masses())
        if (m.w != 0.0) r = std::max(r, std::abs(m.s));
    return r;
}

}  // namespace

BandlimitedFunction toeplitz_apply(const Symbol& phi, const BandlimitedFunction& f) {
    const double need = f.a + spectral_radius(phi);
    if (!(f.f.grid().nyquist() > need))
        throw std::invalid_argument("toeplitz_apply: grid does not resolve the band of phi*f");
    SampledFunction prod = pointwise(phi.sample(f.f.grid()), f.f);
    return project_band(prod, f.a, f.p);
}

SampledFunction hankel_apply(const Symbol& phi, const SampledFunction& f) {
    if (halfline_residual(f) > 1e-6)
        throw std::invalid_argument("hankel_apply: input is not in the analytic half-line class");
    return project_halfline(pointwise(phi.sample(f.grid()), f), -1);
}

NormBounds operator_pnorm(const OperatorMatrix& M, std::optional<bool> interior_only) {
    if (interior_only.value_or(false)) {
        const auto idx = M.basis.interior_indices();
        MatC S(idx.size(), idx.size());
        for (size_t j = 0; j < idx.size(); ++j)
            for (size_t k = 0; k < idx.size(); ++k) S(j, k) = M.entries(idx[j], idx[k]);
        return matrix_pnorm(S, M.p);
    }
    return matrix_pnorm(M.entries, M.p);
}

double spectral_residual(const SampledFunction& lhs, const SampledFunction& rhs,
                         const std::vector<double>& null_bins) {
    SampledFunction d = fft_spectrum(lhs - rhs);
    SampledFunction r = fft_spectrum(rhs);
    const double df = d.grid().step;
    double num = 0.0, den = 0.0;
    for (int m = 0; m < d.size(); ++m) {
        const double xi = d.grid().x(m);
        bool skip = false;
        for (double b : null_bins)
            if (std::abs(xi - b) < 0.5 * df) skip = true;
        den += std::norm(r[m]);
        if (!skip) num += std::norm(d[m]);
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

SampledFunction random_smooth(const Grid& g, std::uint64_t seed, double lo, double hi, int terms) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const double sigma = 2.0;
    const double margin = std::min(0.75, 0.25 * (hi - lo));
    std::uniform_real_distribution<double> uxi(lo + margin, hi - margin);
    const double span = 0.3 * g.half_length();
    std::uniform_real_distribution<double> ux(-span, span);
    const double w = std::min(sigma, 1.42 / margin);
    std::vector<double> xs(terms), xis(terms);
    std::vector<cplx> cs(terms);
    for (int j = 0; j < terms; ++j) {
        xs[j] = ux(rng);
        xis[j] = uxi(rng);
        cs[j] = cplx(nd(rng), nd(rng));
    }
    return SampledFunction::from(g, [&](double x) {
        cplx acc = 0.0;
        for (int j = 0; j < terms; ++j) {
            const double d = (x - xs[j]) / w;
            acc += cs[j] * std::exp(-0.5 * d * d) * std::exp(2.0 * pi * I * xis[j] * x);
        }
        return acc;
    });
}

IdentityReport identity_residuals(double a, double p, std::uint64_t seed, int trials) {
    (void)p;
    IdentityReport rep;
    const Grid g = default_grid(a);
    const std::vector<double> null_bins{-2.0 * a, -a, 0.0, a, 2.0 * a};
    const double reach = std::min(4.0 * a, 0.45 * g.nyquist() - 2.0 * a);
    for (int i = 0; i < trials; ++i) {
        SampledFunction f = random_smooth(g, seed + i, -reach, reach);
        SampledFunction pa = project_band(f, a).f;
        SampledFunction r1 = modulate(project_halfline(modulate(f, a), +1), -a) -
                             modulate(project_halfline(modulate(f, -a), +1), a);
        SampledFunction r1l = modulate(project_halfline(modulate(f, 2.0 * a), +1), -2.0 * a) -
                              modulate(project_halfline(modulate(f, -a), +1), a);
        SampledFunction r2 =
            modulate(project_halfline(modulate(project_halfline(modulate(f, a), +1), -2.0 * a), -1), a);
        rep.band_decomposition = std::max(rep.band_decomposition, spectral_residual(r1, pa, null_bins));
        rep.band_decomposition_literal =
            std::max(rep.band_decomposition_literal, spectral_residual(r1l, pa, null_bins));
        rep.band_chain = std::max(rep.band_chain, spectral_residual(r2, pa, null_bins));

        // analytic input and a symbol with spectrum in the right half-line
        SampledFunction h = project_halfline(random_smooth(g, seed + 100 + i, 0.0, 3.0 * a), +1);
        SymbolPtr phi = gaussian(cplx(1.0, 0.5 * i), 0.25 * a * a, 0.37 * i, (1.1 + 0.2 * (i % 3)) * a);
        SymbolPtr b = modulated(phi, -2.0 * a);
        SampledFunction lhs = hankel_apply(*b, h);
        BandlimitedFunction inner = project_band(
            modulate(project_halfline(modulate(h, -2.0 * a), -1), a), a);
        SampledFunction rhs = modulate(toeplitz_apply(*phi, inner).f, -a);
        rep.hankel_factor = std::max(rep.hankel_factor, spectral_residual(lhs, rhs, null_bins));
    }
    return rep;
}

}  // namespace pwlab
