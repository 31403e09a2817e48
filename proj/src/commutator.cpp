#include "pwlab/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pwlab {

namespace {

double eps_of(double a) { return std::exp(-4.0 * pi * a); }

cplx omega_at(double x) { return (x - I) / (x + I); }

cplx kernel_at(double a, double x) {
    const cplx th = theta(a, x);
    return (th - eps_of(a) * std::conj(th)) / (2.0 * pi * I * (x - I));
}

// rank-one part of T_omega at node t: -alpha (omega k - T_omega-image of k)
cplx outer_factor(double a, double t) {
    const double e = eps_of(a);
    const double alpha = 4.0 * pi / (1.0 - e * e);
    const cplx th = theta(a, t);
    const cplx tk = e / (2.0 * pi) * (e * th - std::conj(th)) / (I * t - 1.0);
    return -alpha * (omega_at(t) * kernel_at(a, t) - tk) / std::sqrt(2.0 * a);
}

// sum over nodes outside [k0, k0 + count) of |f(t_m)|^2, 1/t^2 tails closed off at the end
template <class F>
double outside_sum(const Basis& b, F&& f) {
    const int K = 1 << 21;
    double s = 0.0;
    for (int side : {-1, +1}) {
        const int first = side < 0 ? b.k0 - 1 : b.k0 + b.count;
        double last2 = 0.0;
        for (int i = 0; i < K; ++i) {
            const int m = first + side * i;
            const double v = std::norm(f(m / (2.0 * b.a)));
            s += v;
            if (i >= K - 2) last2 += 0.5 * v;
        }
        s += last2 * (std::abs(first) + K);
    }
    return s;
}

}  // namespace

cplx omega(cplx z) { return (z - I) / (z + I); }

ConformalFrame build_frame(double a, double p, const Grid& g, const Basis& b) {
    Band{a};
    if (!(p > 1.0) || std::isinf(p)) throw std::domain_error("frame: p must lie in (1, inf)");
    if (!(g.nyquist() > a)) throw std::invalid_argument("frame: grid does not resolve the band");
    ConformalFrame fr;
    fr.a = a;
    fr.p = p;
    fr.grid = g;
    fr.basis = b;
    fr.omega = SampledFunction::from(g, [](double x) { return omega(cplx(x)); });
    fr.kernel = SampledFunction::from(g, [a](double x) { return kernel_at(a, x); });
    fr.sigma = SampledFunction::from(g, [p](double x) { return std::pow(cplx(x, 1.0), 2.0 / p); });
    const double e2 = eps_of(a) * eps_of(a);
    fr.alpha = 4.0 * pi / (1.0 - e2);
    const SampledFunction hi = cauchy_kernel(I, g);
    fr.eta = SampledFunction(g);
    for (int i = 0; i < g.count; ++i) fr.eta[i] = fr.alpha * std::pow(-std::conj(hi[i]), 2.0 / p);
    fr.k.resize(b.count);
    fr.omega_nodes.resize(b.count);
    for (int j = 0; j < b.count; ++j) {
        fr.k[j] = kernel_at(a, b.node(j)) / std::sqrt(2.0 * a);
        fr.omega_nodes[j] = omega(cplx(b.node(j)));
    }
    fr.k_tail2 = outside_sum(b, [a](double t) { return kernel_at(a, t) / std::sqrt(2.0 * a); });
    return fr;
}

Compatibility omega_compatible(const BandlimitedFunction& f, const ConformalFrame& fr) {
    Compatibility c;
    const double nf = lp_norm(f.f, 2.0);
    if (nf == 0.0) return c;
    c.defect = std::abs(inner(f.f, fr.kernel)) / (nf * lp_norm(fr.kernel, 2.0));
    c.flag = c.defect <= 1e-6;
    c.band_residual = band_residual(pointwise(fr.omega, f.f), fr.a);
    return c;
}

BandlimitedFunction k_projector(const BandlimitedFunction& f, const ConformalFrame& fr) {
    const cplx c = inner(f.f, fr.kernel) / inner(fr.kernel, fr.kernel).real();
    BandlimitedFunction out = f;
    out.f = f.f - c * fr.kernel;
    out.residual = band_residual(out.f, fr.a);
    return out;
}

CompressionOps lambda_ops(const ConformalFrame& fr) {
    CompressionOps ops;
    ops.Lambda = assemble_toeplitz(*omega_series(1.0, {{1, 1.0}}), fr.basis, fr.p);
    ops.LambdaBar = assemble_toeplitz(*omega_series(1.0, {{-1, 1.0}}), fr.basis, fr.p);
    return ops;
}

cplx lambda_outer(const ConformalFrame& fr, int m) { return outer_factor(fr.a, m / (2.0 * fr.a)); }

MatC lambda_structural(const ConformalFrame& fr) {
    const Basis& b = fr.basis;
    MatC L(b.count, b.count);
    for (int m = 0; m < b.count; ++m) {
        const cplx v = lambda_outer(fr, b.k0 + m);
        for (int j = 0; j < b.count; ++j) L(m, j) = v * std::conj(fr.k[j]);
        L(m, m) += fr.omega_nodes[m];
    }
    return L;
}

double defect_residual(const CompressionOps& ops, const ConformalFrame& fr) {
    const MatC& L = ops.Lambda.entries;
    const double out = outside_sum(fr.basis, [&](double t) { return outer_factor(fr.a, t); });
    MatC G = kernels::matmul(ops.LambdaBar.entries, L);
    G += out * fr.k * fr.k.adjoint();
    MatC D = MatC::Identity(L.rows(), L.cols()) - G - fr.alpha * fr.k * fr.k.adjoint();
    return spectral_norm(D);
}

CommutatorResult commutator_test(const OperatorMatrix& T, const ConformalFrame& fr) {
    CommutatorResult r;
    const MatC& M = T.entries;
    if (M.rows() != fr.basis.count || M.cols() != fr.basis.count)
        throw std::invalid_argument("commutator_test: matrix does not match the frame basis");
    const double nt = spectral_norm(M);
    if (nt == 0.0) return r;
    const auto idx = fr.basis.interior_indices();
    const VecC& k = fr.k;
    const double kk = k.squaredNorm();
    // Ran K: interior basis vectors with the kernel direction removed
    MatC F(M.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t c = 0; c < idx.size(); ++c) {
        VecC e = VecC::Zero(M.rows());
        e[idx[c]] = 1.0;
        e -= k * (k.dot(e) / kk);
        F.col(static_cast<Eigen::Index>(c)) = e / e.norm();
    }
    MatC WF = fr.omega_nodes.asDiagonal() * F;
    const MatC lhs = F.adjoint() * kernels::matmul(M, F);
    const MatC rhs = WF.adjoint() * kernels::matmul(M, WF);
    r.deviation = (lhs - rhs).cwiseAbs().maxCoeff() / nt;
    r.is_toeplitz = r.deviation <= 1e-6;
    return r;
}

OperatorMatrix series_reconstruct(const OperatorMatrix& T, int N, const CompressionOps& ops) {
    if (N < 0) throw std::invalid_argument("series_reconstruct: N must be >= 0");
    const MatC& L = ops.Lambda.entries;
    const MatC& Lb = ops.LambdaBar.entries;
    MatC A = T.entries - kernels::matmul(Lb, kernels::matmul(T.entries, L));
    OperatorMatrix S = T;
    S.entries = A;
    for (int n = 1; n <= N; ++n) {
        A = kernels::matmul(Lb, kernels::matmul(A, L));
        S.entries += A;
    }
    return S;
}

double series_residual(const OperatorMatrix& S, const OperatorMatrix& T) {
    const double nt = spectral_norm(T.entries);
    if (nt == 0.0) return spectral_norm(S.entries);
    double worst = 0.0;
    for (int j : T.basis.interior_indices()) worst = std::max(worst, (S.entries.col(j) - T.entries.col(j)).norm());
    return worst / nt;
}

CVec nodal_derivative(const CVec& g, const Basis& b) {
    const int n = b.count;
    const double a2 = 2.0 * b.a;
    CVec out(n, 0.0);
    for (int j = 0; j < n; ++j) {
        cplx acc = 0.0;
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const int d = j - k;
            acc += g[k] * ((d % 2 == 0) ? 1.0 : -1.0) * a2 / static_cast<double>(d);
        }
        out[j] = acc;
    }
    // fit (c0 + c1 (-1)^m)/t + (c2 + c3 (-1)^m)/t^2 on each edge, sum the model beyond it
    const int nfit = std::min(12, n / 4);
    const int ext = 20000;
    for (int side : {-1, +1}) {
        Eigen::MatrixXd A(nfit, 4);
        VecC y(nfit);
        for (int i = 0; i < nfit; ++i) {
            const int loc = side < 0 ? i : n - 1 - i;
            const int m = b.k0 + loc;
            const double t = m / a2;
            const double sg = (m % 2 == 0) ? 1.0 : -1.0;
            A(i, 0) = 1.0 / t;
            A(i, 1) = sg / t;
            A(i, 2) = 1.0 / (t * t);
            A(i, 3) = sg / (t * t);
            y[i] = g[loc];
        }
        const Eigen::MatrixXcd Ac = A.cast<cplx>();
        const VecC c = Ac.colPivHouseholderQr().solve(y);
        for (int i = 1; i <= ext; ++i) {
            const int m = side < 0 ? b.k0 - i : b.k0 + n - 1 + i;
            const double t = m / a2;
            const double sg = (m % 2 == 0) ? 1.0 : -1.0;
            const cplx gm = (c[0] + sg * c[1]) / t + (c[2] + sg * c[3]) / (t * t);
            for (int j = 0; j < n; ++j) {
                const int d = (b.k0 + j) - m;
                out[j] += gm * ((d % 2 == 0) ? 1.0 : -1.0) * a2 / static_cast<double>(d);
            }
        }
    }
    return out;
}

MatC nodal_toeplitz(const CVec& phib, const CVec& dphib, const CVec& psi, const CVec& dpsi, double a) {
    const int n = static_cast<int>(phib.size());
    MatC M(n, n);
    const double a2 = 2.0 * a;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (j == k) {
                M(j, j) = (a2 * phib[j] + dphib[j] / (2.0 * pi * I) + a2 * psi[j] - dpsi[j] / (2.0 * pi * I)) / a2;
                continue;
            }
            const int d = j - k;
            const double tau = d / a2;
            const double sg = (d % 2 == 0) ? 1.0 : -1.0;
            M(j, k) = sg * ((psi[k] - psi[j]) + (phib[j] - phib[k])) / (2.0 * pi * I * tau) / a2;
        }
    }
    return M;
}

RecoveredSymbol recover_symbol(const OperatorMatrix& T, const ConformalFrame& fr, const CompressionOps& ops) {
    if (fr.p != 2.0) throw std::domain_error("recover_symbol: only p = 2 is supported");
    const Basis& b = fr.basis;
    const int n = b.count;
    if (T.entries.rows() != n || T.entries.cols() != n)
        throw std::invalid_argument("recover_symbol: matrix does not match the frame basis");
    const double a = fr.a;
    const MatC& L = ops.Lambda.entries;
    const MatC& Lb = ops.LambdaBar.entries;
    const MatC C = T.entries - kernels::matmul(Lb, kernels::matmul(T.entries, L));
    const VecC ck = C * fr.k;
    const VecC csk = C.adjoint() * fr.k;

    const double e2 = eps_of(a) * eps_of(a);
    const cplx s = 2.0 * pi * I / (1.0 - e2) * std::sqrt(2.0 * a);
    CVec g1(n), g2(n);
    for (int j = 0; j < n; ++j) {
        g1[j] = s * ck[j];
        g2[j] = s * csk[j];
    }
    const CVec dg1 = nodal_derivative(g1, b);
    const CVec dg2 = nodal_derivative(g2, b);
    CVec phib(n), dphib(n), psi(n), dpsi(n);
    for (int j = 0; j < n; ++j) {
        const double t = b.node(j);
        const cplx th = theta(a, t);
        phib[j] = std::conj(th) * (t - I) * g1[j];
        dphib[j] = std::conj(th) * ((-2.0 * pi * I * a) * (t - I) * g1[j] + g1[j] + (t - I) * dg1[j]);
        const cplx h = std::conj(g2[j]), dh = std::conj(dg2[j]);
        psi[j] = th * (t + I) * h;
        dpsi[j] = th * ((2.0 * pi * I * a) * (t + I) * h + h + (t + I) * dh);
    }
    MatC Tr = nodal_toeplitz(phib, dphib, psi, dpsi, a);
    // the constant is fixed by matching the commutator along k
    const MatC Cr = Tr - kernels::matmul(Lb, kernels::matmul(Tr, L));
    const MatC CI = MatC::Identity(n, n) - kernels::matmul(Lb, L);
    const cplx den = fr.k.dot(CI * fr.k);
    const cplx c = den == 0.0 ? cplx(0.0) : fr.k.dot((Cr - C) * fr.k) / den;
    Tr -= c * MatC::Identity(n, n);

    RecoveredSymbol r;
    r.constant = -c;
    const Grid ng(b.node(0), 1.0 / (2.0 * a), n);
    r.phi = SampledFunction(ng);
    r.psi = SampledFunction(ng);
    for (int j = 0; j < n; ++j) {
        r.phi[j] = std::conj(phib[j]);
        r.psi[j] = psi[j] - c;
    }
    r.reassembled = T;
    r.reassembled.entries = Tr;
    const double nt = spectral_norm(T.entries);
    const double err = spectral_norm(Tr - T.entries);
    r.round_trip = nt == 0.0 ? err : err / nt;
    return r;
}

std::vector<double> komega_gram_spectrum(const ConformalFrame& fr, int n, std::uint64_t seed) {
    const Grid& g = fr.grid;
    const SampledFunction wb = conj(fr.omega);
    MatC P(g.count, n);
    for (int i = 0; i < n; ++i) {
        SampledFunction h = project_halfline(random_smooth(g, seed + i, 0.0, 3.0 * fr.a), +1);
        SampledFunction q = h - pointwise(fr.omega, project_halfline(pointwise(wb, h), +1));
        for (int k = 0; k < g.count; ++k) P(k, i) = q[k] * std::sqrt(g.step);
    }
    const MatC G = P.adjoint() * P;
    Eigen::SelfAdjointEigenSolver<MatC> es(G);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(ev.rbegin(), ev.rend());
    std::vector<double> out;
    for (double v : ev) out.push_back(ev[0] > 0.0 ? std::sqrt(std::max(v, 0.0) / ev[0]) : 0.0);
    return out;
}

nlohmann::json to_json(const CommutatorResult& r) {
    return {{"is_toeplitz", r.is_toeplitz}, {"deviation", r.deviation}};
}

nlohmann::json to_json(const RecoveredSymbol& r) {
    nlohmann::json j;
    j["phi"] = to_json(r.phi);
    j["psi"] = to_json(r.psi);
    j["constant"] = complex_to_json(r.constant);
    j["round_trip"] = r.round_trip;
    j["reassembled"] = to_json(r.reassembled);
    return j;
}

}  // namespace pwlab
