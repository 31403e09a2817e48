#include "pwlab/nehari.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pwlab {

namespace {

int pow2_at_least(int n) {
    int m = 1;
    while (m < n) m <<= 1;
    return m;
}

// Gamma v by linear convolution of the Hankel generator with reversed v
class HankelOp {
public:
    explicit HankelOp(const HankelData& h) : M_(h.M), L_(pow2_at_least(3 * h.M)) {
        gen_.assign(L_, 0.0);
        for (int n = 0; n < 2 * M_ - 1; ++n) gen_[n] = h.coeff(-(n + 1));
        dft_inplace(gen_, -1);
    }
    VecC apply(const VecC& v) const {
        CVec buf(L_, 0.0);
        for (int k = 0; k < M_; ++k) buf[k] = v[M_ - 1 - k];
        dft_inplace(buf, -1);
        for (int i = 0; i < L_; ++i) buf[i] *= gen_[i];
        dft_inplace(buf, +1);
        VecC out(M_);
        for (int j = 0; j < M_; ++j) out[j] = buf[j + M_ - 1] / static_cast<double>(L_);
        return out;
    }
    // Gamma is symmetric, so Gamma^H x = conj(Gamma conj(x))
    VecC adjoint(const VecC& x) const { return apply(x.conjugate()).conjugate(); }

private:
    int M_, L_;
    CVec gen_;
};

VecC random_unit(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    VecC v(n);
    for (int k = 0; k < n; ++k) v[k] = cplx(nd(rng), nd(rng));
    return v / v.norm();
}

}  // namespace

cplx line_to_circle(double x, double beta) { return (x - I * beta) / (x + I * beta); }

HankelData line_to_disk(const Symbol& b, int M, double beta, double cutoff) {
    if (M < 1) throw std::invalid_argument("line_to_disk: M must be >= 1");
    if (!(beta > 0.0)) throw std::invalid_argument("line_to_disk: beta must be > 0");
    const int N = pow2_at_least(std::max(4096, 16 * M));
    // half-shifted angles keep x = infinity off the grid
    std::vector<double> xs;
    std::vector<int> idx;
    for (int m = 0; m < N; ++m) {
        const double x = -beta / std::tan(pi * (m + 0.5) / N);
        if (cutoff > 0.0 && std::abs(x) > cutoff) continue;
        xs.push_back(x);
        idx.push_back(m);
    }
    std::vector<cplx> vals(xs.size());
    b.values(xs, vals);
    CVec buf(N, 0.0);
    double near = 0.0, far = 0.0;
    for (size_t i = 0; i < idx.size(); ++i) {
        if (!std::isfinite(vals[i].real()) || !std::isfinite(vals[i].imag()))
            throw std::domain_error("line_to_disk: symbol is not finite on the line");
        buf[idx[i]] = vals[i];
        const bool at_infinity = idx[i] < N / 64 || idx[i] >= N - N / 64;
        (at_infinity ? near : far) = std::max(at_infinity ? near : far, std::abs(vals[i]));
    }
    if (near > 10.0 * far && near > 1.0)
        throw std::domain_error("line_to_disk: symbol blows up as |x| -> infinity");
    dft_inplace(buf, -1);

    HankelData h;
    h.beta = beta;
    h.M = M;
    h.circle_points = N;
    h.disk_coeffs.resize(4 * M + 1);
    double cmax = 0.0;
    for (int n = -2 * M; n <= 2 * M; ++n) {
        const double ph = -pi * n / N;
        const cplx c = buf[((n % N) + N) % N] * cplx(std::cos(ph), std::sin(ph)) / static_cast<double>(N);
        h.disk_coeffs[n + 2 * M] = c;
        cmax = std::max(cmax, std::abs(c));
    }
    double tail = 0.0;
    for (int n = M; n <= 2 * M; ++n) tail = std::max(tail, std::abs(h.coeff(-n)));
    h.tail = cmax == 0.0 ? 0.0 : tail / cmax;
    h.hankel_matrix.resize(M, M);
    for (int j = 0; j < M; ++j)
        for (int k = 0; k < M; ++k) h.hankel_matrix(j, k) = h.coeff(-(j + k + 1));
    return h;
}

SampledFunction disk_to_line(const HankelData& h, const Grid& g) {
    return SampledFunction::from(g, [&](double x) {
        const cplx z = line_to_circle(x, h.beta);
        const cplx zb = std::conj(z);
        cplx acc = h.coeff(0), zp = 1.0, zm = 1.0;
        for (int n = 1; n <= 2 * h.M; ++n) {
            zp *= z;
            zm *= zb;
            acc += h.coeff(n) * zp + h.coeff(-n) * zm;
        }
        return acc;
    });
}

cplx AakResult::psi_coeff(int n) const {
    if (psi_coeffs.empty()) return 0.0;
    const int N = static_cast<int>(psi_coeffs.size());
    return psi_coeffs[((n % N) + N) % N];
}

cplx AakResult::eval(cplx z) const {
    if (sigma0 == 0.0 || v.size() == 0) return 0.0;
    cplx f = 0.0, g = 0.0;
    const cplx zi = 1.0 / z;
    for (Eigen::Index k = v.size() - 1; k >= 0; --k) f = f * z + v[k];
    for (Eigen::Index j = w.size() - 1; j >= 0; --j) g = g * zi + w[j];
    g *= zi;
    if (std::abs(f) < 1e-8 * f_max) {
        const int N = circle_points;
        double t = std::arg(z);
        if (t < 0.0) t += 2.0 * pi;
        return psi_disk[static_cast<int>(std::lround(t * N / (2.0 * pi))) % N];
    }
    return sigma0 * g / f;
}

AakResult aak_solve(const HankelData& h, const AakOptions& opt) {
    const int M = h.M;
    if (M < 1) throw std::invalid_argument("aak_solve: empty Hankel data");
    AakResult r;
    r.circle_points = pow2_at_least(std::max(h.circle_points, 16 * M));
    const int N = r.circle_points;

    double gmax = 0.0;
    for (int n = 1; n < 2 * M; ++n) gmax = std::max(gmax, std::abs(h.coeff(-n)));
    if (gmax == 0.0) {
        r.psi_disk.assign(N, 0.0);
        r.psi_coeffs.assign(N, 0.0);
        return r;
    }

    HankelOp G(h);
    VecC v = random_unit(M, opt.seed);
    double lam = 0.0;
    for (r.iterations = 1; r.iterations <= opt.max_iter; ++r.iterations) {
        VecC y = G.adjoint(G.apply(v));
        lam = v.dot(y).real();
        const double res = (y - lam * v).norm() / std::max(lam, 1e-300);
        v = y / y.norm();
        if (res < opt.tol) break;
    }
    VecC gv = G.apply(v);
    r.sigma0 = gv.norm();
    if (r.sigma0 < 1e-15 * gmax) {
        r.sigma0 = 0.0;
        r.psi_disk.assign(N, 0.0);
        r.psi_coeffs.assign(N, 0.0);
        return r;
    }
    r.v = v;
    r.w = gv / r.sigma0;

    // second singular value on the complement of v
    VecC u = random_unit(M, opt.seed + 1);
    u -= v * v.dot(u);
    u /= u.norm();
    double lam1 = 0.0;
    for (int it = 0; it < 300; ++it) {
        VecC y = G.adjoint(G.apply(u));
        y -= v * v.dot(y);
        lam1 = u.dot(y).real();
        const double ny = y.norm();
        if (ny == 0.0) break;
        u = y / ny;
    }
    r.sigma1 = std::sqrt(std::max(lam1, 0.0));

    CVec fb(N, 0.0), gb(N, 0.0);
    for (int k = 0; k < M; ++k) fb[k] = r.v[k];
    for (int j = 0; j < M && j + 1 < N; ++j) gb[j + 1] = r.w[j];
    dft_inplace(fb, +1);
    dft_inplace(gb, -1);
    for (const auto& x : fb) r.f_max = std::max(r.f_max, std::abs(x));
    r.psi_disk.assign(N, 0.0);
    std::vector<char> good(N, 1);
    for (int m = 0; m < N; ++m) {
        if (std::abs(fb[m]) < 1e-8 * r.f_max) {
            good[m] = 0;
            ++r.guarded_points;
        } else {
            r.psi_disk[m] = r.sigma0 * gb[m] / fb[m];
        }
    }
    if (r.guarded_points > 0 && r.guarded_points < N) {
        for (int m = 0; m < N; ++m) {
            if (good[m]) continue;
            for (int d = 1; d < N; ++d) {
                if (good[(m + d) % N]) {
                    r.psi_disk[m] = r.psi_disk[(m + d) % N];
                    break;
                }
                if (good[(m - d + N) % N]) {
                    r.psi_disk[m] = r.psi_disk[(m - d + N) % N];
                    break;
                }
            }
        }
    }
    r.psi_coeffs = r.psi_disk;
    dft_inplace(r.psi_coeffs, -1);
    for (auto& c : r.psi_coeffs) c /= static_cast<double>(N);
    for (const auto& x : r.psi_disk) r.sup_modulus = std::max(r.sup_modulus, std::abs(x));
    for (int n = 1; n <= 2 * M; ++n)
        r.moment_residual = std::max(r.moment_residual, std::abs(r.psi_coeff(-n) - h.coeff(-n)));
    r.moment_residual /= r.sigma0;
    return r;
}

double line_hankel_norm(const Symbol& b, const Grid& g, int iters) {
    const SampledFunction bs = b.sample(g);
    const SampledFunction bc = conj(bs);
    VecC r0 = random_unit(g.count, 7);
    SampledFunction f = project_halfline(SampledFunction(g, CVec(r0.data(), r0.data() + r0.size())), +1);
    double est = 0.0;
    for (int it = 0; it < iters; ++it) {
        const double nf = lp_norm(f, 2.0);
        if (nf == 0.0) return 0.0;
        f *= 1.0 / nf;
        SampledFunction hf = project_halfline(pointwise(bs, f), -1);
        est = lp_norm(hf, 2.0);
        f = project_halfline(pointwise(bc, hf), +1);
    }
    return est;
}

namespace {

bool has_negative_spectrum(const Symbol& b) {
    const auto [lo, hi] = b.hull();
    if (hi > lo && lo < 0.0) return true;
    for (const auto& m : b.masses())
        if (m.s < 0.0 && m.w != 0.0) return true;
    return false;
}

// negative coefficients beyond 2M are aliasing noise of the analytic part
SymbolPtr psi_symbol(std::shared_ptr<const AakResult> r, double beta, int M) {
    const double floor = 1e-13 * r->sigma0;
    const int N = r->circle_points;
    std::vector<std::pair<int, cplx>> coeffs;
    for (int n = -2 * M; n < N / 2; ++n) {
        const cplx c = r->psi_coeff(n);
        if (std::abs(c) > floor) coeffs.emplace_back(n, c);
    }
    return omega_series(beta, std::move(coeffs), -1.0,
                        [r, beta](double x) { return r->eval(line_to_circle(x, beta)); });
}

// psi carries high analytic frequencies, so the pairing runs on an 8x finer grid
double pairing_residual(const Symbol& psi, const Symbol& b, const Grid& coarse, double a, std::uint64_t seed,
                        int trials) {
    const Grid g(coarse.start, coarse.step / 8.0, coarse.count * 8);
    const SampledFunction diff = psi.sample(g) - b.sample(g);
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        SampledFunction f = project_halfline(random_smooth(g, seed + i, 0.0, 3.0 * a), +1);
        SampledFunction h = project_halfline(random_smooth(g, seed + 1000 + i, -3.0 * a, 0.0), -1);
        const cplx pr = inner(pointwise(diff, f), h);
        worst = std::max(worst, std::abs(pr) / (lp_norm(f, 2.0) * lp_norm(h, 2.0)));
    }
    return worst;
}

}  // namespace

NehariResult nehari_solve(SymbolPtr b, double a, double p, const Grid& g, const NehariOptions& opt) {
    Band{a};
    if (!(p > 1.0)) throw std::domain_error("nehari: p must be > 1");
    const auto [lo, hi] = b->hull();
    if (hi > lo && lo < -2.0 * a * (1.0 + 1e-12))
        throw std::invalid_argument("nehari: precondition violated, spectrum of b extends below -2a");
    for (const auto& m : b->masses()) {
        if (m.s < -2.0 * a * (1.0 + 1e-12))
            throw std::invalid_argument("nehari: precondition violated, spectrum of b extends below -2a");
        if (m.s < 0.0 && m.order > 0)
            throw std::invalid_argument("nehari: b is unbounded on the line");
    }

    NehariResult r;
    if (!has_negative_spectrum(*b)) {
        r.zero_hankel = true;
        r.psi = zero_symbol();
        r.samples = SampledFunction(g);
        return r;
    }

    const double beta = 24.0 / a;
    const double cutoff = 40.0 * beta;
    int M = opt.M;
    for (;;) {
        r.data = line_to_disk(*b, M, beta, cutoff);
        if (r.data.tail_certified() || 2 * M > opt.max_M) break;
        M *= 2;
    }
    if (!r.data.tail_certified())
        r.warnings.push_back("coefficient tail " + std::to_string(r.data.tail) + " above 1e-8 at M = " +
                             std::to_string(M));
    AakOptions ao;
    ao.seed = opt.seed;
    r.aak = aak_solve(r.data, ao);
    if (r.aak.sigma1 > r.aak.sigma0 * (1.0 - 1e-6) && r.aak.sigma0 > 0.0) {
        r.warnings.push_back("degenerate top singular value; truncation perturbed to M + 1");
        r.data = line_to_disk(*b, M + 1, beta, cutoff);
        r.aak = aak_solve(r.data, ao);
    }
    if (r.aak.guarded_points > 0)
        r.warnings.push_back(std::to_string(r.aak.guarded_points) + " circle points filled by continuation");

    if (r.aak.sigma0 == 0.0) {
        r.zero_hankel = true;
        r.psi = zero_symbol();
    } else {
        r.psi = psi_symbol(std::make_shared<const AakResult>(r.aak), beta, r.data.M);
    }
    r.samples = r.psi->sample(g);
    r.sup_norm = lp_norm(r.samples, INFINITY);
    const double half = std::max(256.0, 12.0 * beta);
    r.hankel_norm = line_hankel_norm(*b, Grid::window(-half, half, 1.0 / (8.0 * a)));
    r.pairing_residual = pairing_residual(*r.psi, *b, g, a, opt.seed, opt.trials);
    return r;
}

BoundedSymbolResult bounded_symbol(SymbolPtr phi, double a, double p, const Grid& g, const Basis& basis,
                                   const NehariOptions& opt) {
    BoundedSymbolResult r;
    r.a = a;
    r.p = p;
    SplitResult s;
    try {
        s = split_symbol(phi, a, g);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("bounded_symbol[split]: ") + e.what());
    }
    r.split_constant = s.constant();
    try {
        r.right = nehari_solve(modulated(s.right, -2.0 * a), a, p, g, opt);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("bounded_symbol[nehari right]: ") + e.what());
    }
    try {
        // R[phi_L] has its spectrum in [a/4, 4a]
        r.left = nehari_solve(modulated(reflected(s.left), -2.0 * a), a, p, g, opt);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("bounded_symbol[nehari left]: ") + e.what());
    }
    r.psi_r = r.right.psi;
    r.psi_l = reflected(r.left.psi);
    r.phi_c = s.central;
    r.psi = sum({{1.0, modulated(r.psi_l, -2.0 * a)}, {1.0, r.phi_c}, {1.0, modulated(r.psi_r, 2.0 * a)}});
    r.samples = r.psi->sample(g);
    r.sup_norm = lp_norm(r.samples, INFINITY);

    const MatC tphi = toeplitz_matrix(*phi, basis);
    const MatC tpsi = toeplitz_matrix(*r.psi, basis);
    r.t_phi = matrix_pnorm(tphi, p).lower;
    r.operator_residual = matrix_pnorm(tphi - tpsi, p).upper;
    r.ratio = r.t_phi == 0.0 ? 0.0 : r.sup_norm / ((p + 1.0 / (p - 1.0)) * r.t_phi);
    return r;
}

nlohmann::json to_json(const NehariResult& r) {
    nlohmann::json j;
    j["zero_hankel"] = r.zero_hankel;
    j["sigma0"] = r.aak.sigma0;
    j["sigma1"] = r.aak.sigma1;
    j["M"] = r.data.M;
    j["beta"] = r.data.beta;
    j["certificate"] = {{"coefficient_tail", r.data.tail},
                        {"tail_certified", r.zero_hankel || r.data.tail_certified()},
                        {"moment_residual", r.aak.moment_residual},
                        {"circle_sup", r.aak.sup_modulus},
                        {"sup_norm", r.sup_norm},
                        {"hankel_norm", r.hankel_norm},
                        {"pairing_residual", r.pairing_residual}};
    j["warnings"] = r.warnings;
    j["psi"] = to_json(r.samples);
    return j;
}

nlohmann::json to_json(const BoundedSymbolResult& r) {
    nlohmann::json j;
    j["band"] = r.a;
    j["p"] = r.p;
    j["sup_norm"] = r.sup_norm;
    j["operator_residual"] = r.operator_residual;
    j["t_phi"] = r.t_phi;
    j["tolerance"] = r.tolerance;
    j["ratio"] = r.ratio;
    j["split_constant"] = r.split_constant;
    j["ok"] = r.ok();
    j["psi"] = to_json(r.samples);
    const Grid& g = r.samples.grid();
    j["parts"] = {{"psi_l", to_json(r.psi_l->sample(g))},
                  {"phi_c", to_json(r.phi_c->sample(g))},
                  {"psi_r", to_json(r.psi_r->sample(g))}};
    j["right"] = to_json(r.right);
    j["left"] = to_json(r.left);
    j["right"].erase("psi");
    j["left"].erase("psi");
    return j;
}

}  // namespace pwlab
