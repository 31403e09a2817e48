#include "pwlab/verify.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pwlab {

void RunConfig::validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("band: a must be a positive finite number");
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p: must lie in (1, inf)");
    if (oversample < 4) throw std::invalid_argument("oversample: must be >= 4");
    if (!(window > 0.0)) throw std::invalid_argument("window: must be > 0");
}

namespace {

struct Recorder {
    const RunConfig& cfg;
    CheckResult& r;

    double tol(const std::string& name, double dflt) const {
        auto it = cfg.tolerances.find(r.id + "." + name);
        return it == cfg.tolerances.end() ? dflt : it->second;
    }
    void upper(const std::string& name, double measured, double bound) {
        const double b = tol(name, bound);
        r.items.push_back({name, measured, b, false, std::isfinite(measured) && measured <= b});
    }
    void lower(const std::string& name, double measured, double bound) {
        const double b = tol(name, bound);
        r.items.push_back({name, measured, b, true, std::isfinite(measured) && measured >= b});
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

Basis work_basis(const RunConfig& c) { return Basis::centered(c.a, 0.5 * c.window); }
Basis period_basis(const RunConfig& c) { return Basis::centered(c.a, c.window); }

std::vector<SymbolPtr> schwartz_family(int n, double a, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<SymbolPtr> out;
    for (int i = 0; i < n; ++i) {
        const cplx amp = std::polar(0.5 + u(rng), 2.0 * pi * u(rng));
        const double beta = 0.5 + 1.5 * u(rng);
        const double center = 4.0 * u(rng) - 2.0;
        const double freq = (4.0 * u(rng) - 2.0) * a;
        out.push_back(gaussian(amp, beta, center, freq));
    }
    return out;
}

double pnorm_upper(const MatC& M, double p) { return matrix_pnorm(M, p).upper; }
double pnorm_lower(const MatC& M, double p) { return matrix_pnorm(M, p).lower; }

void check_reproducing(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const Grid g = c.grid();
    const BandlimitedFunction f = sinc_member(0.5 * c.a, 0.0, g);
    const BandlimitedFunction pf = project_band(f.f, c.a);
    const double fmax = lp_norm(f.f, INFINITY);
    rec.upper("projection", lp_norm(pf.f - f.f, INFINITY) / fmax, 1e-10);
    BandlimitedFunction fa = f;
    fa.a = c.a;
    double cross = 0.0;
    for (cplx z : {cplx(0.3), cplx(1.7), cplx(-5.2), cplx(10.0), cplx(0.2, 0.1), cplx(-2.5, -0.3)})
        cross = std::max(cross, std::abs(eval_functional(fa, z / c.a) - eval_functional_direct(f.f, c.a, z / c.a)));
    rec.upper("spectral_vs_quadrature", cross / fmax, 1e-4);
}

void check_zero_symbol(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const MatC T = toeplitz_matrix(*mod_poly(1, 2.0 * c.a), work_basis(c));
    rec.upper("norm", pnorm_upper(T, c.p), 1e-8);
}

void check_vanishing(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const Basis b = work_basis(c);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 3; ++i) {
        const double w = (0.2 + 0.6 * u(rng)) * c.a;
        const double side = u(rng) < 0.5 ? -1.0 : 1.0;
        const double freq = side * (2.0 * c.a + 2.0 * w + (0.25 + u(rng)) * c.a);
        const double center = 6.0 * u(rng) - 3.0;
        const cplx amp = std::polar(1.0, 2.0 * pi * u(rng));
        const MatC T = toeplitz_matrix(*fejer(amp, w, center, freq), b);
        rec.upper("norm_" + std::to_string(i), pnorm_upper(T, c.p), 1e-8);
    }
}

void check_projector(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const IdentityReport ir = identity_residuals(c.a, c.p, c.seed, 10);
    rec.upper("decomposition_residual", ir.band_decomposition, 1e-10);
    const Grid g = c.grid();
    for (double p : {1.5, 2.0, 3.0}) {
        const double pa = band_projector_norm_estimate(c.a, p, g);
        const double ap = riesz_constant_estimate(p, g);
        rec.upper("band_projector_p" + fmt(p), pa, 2.0 * ap + 1e-3);
    }
}

void check_splitting(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const Grid g = c.grid();
    const Basis b = work_basis(c);
    double worst_sum = 0.0, worst_jensen = 0.0;
    for (const auto& phi : schwartz_family(5, c.a, c.seed)) {
        const SplitResult s = split_symbol(phi, c.a, g);
        const MatC T = toeplitz_matrix(*phi, b);
        const MatC TL = toeplitz_matrix(*s.left, b), TC = toeplitz_matrix(*s.central, b),
                   TR = toeplitz_matrix(*s.right, b);
        const double tp = pnorm_lower(T, c.p);
        worst_sum = std::max(worst_sum, pnorm_upper(T - TL - TC - TR, c.p) / tp);
        const double l1[3] = {s.l1_left, s.l1_central, s.l1_right};
        const MatC* parts[3] = {&TL, &TC, &TR};
        for (int i = 0; i < 3; ++i) worst_jensen = std::max(worst_jensen, pnorm_lower(*parts[i], c.p) / (l1[i] * tp));
    }
    rec.upper("operator_sum_residual", worst_sum, 1e-6);
    rec.upper("jensen_ratio", worst_jensen, 1.0 + 1e-3);
    double drift = 0.0;
    for (Part P : {Part::L, Part::C, Part::R}) {
        const double ref = bump_l1(P, 1.0);
        for (double a : {0.5, 1.0, 2.0, 4.0}) drift = std::max(drift, std::abs(bump_l1(P, a) - ref));
    }
    rec.upper("constant_drift", drift, 1e-6);
}

void check_central(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const Grid g = c.grid();
    const SplitResult s = split_symbol(gaussian(1.0, 1.0), c.a, g);
    const SymbolPtr C = s.central;
    const GridOperator tc = [&](const SampledFunction& f) {
        BandlimitedFunction bf;
        bf.f = f;
        bf.a = c.a;
        return toeplitz_apply(*C, bf).f;
    };
    const Grid fine = Grid::window(-0.5 * c.window, 0.5 * c.window, g.step / 4.0);
    const double cmax = C->sup_norm(fine);
    double err = 0.0;
    for (int i = 0; i <= 16; ++i) {
        const double x = -4.0 + 0.5 * i;
        err = std::max(err, std::abs(central_recover(tc, c.a, x, g) - C->value(x)));
    }
    rec.upper("recovery_error", err / cmax, 1e-5);
    const double q = conjugate_exponent(c.p);
    const double tcn = pnorm_lower(toeplitz_matrix(*C, work_basis(c)), c.p);
    const double k = (4.0 / c.a) * sinc_lp_norm(c.a, q) * sinc_lp_norm(c.a / 8.0, c.p);
    rec.upper("sup_bound", cmax, k * tcn * 1.05);
}

void check_sinc_constant(Recorder& rec) {
    for (double p : {1.1, 1.5, 2.0, 3.0, 8.0}) {
        const SincNormConstant s = sinc_norm_constant(p);
        rec.upper("product_p" + fmt(p), s.product, s.bound);
    }
    rec.upper("p2_deviation", std::abs(sinc_norm_constant(2.0).product - std::sqrt(2.0) / 2.0), 1e-3);
}

void check_carlsson(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const Basis b = work_basis(c);
    const Grid fine = Grid::window(-0.5 * c.window, 0.5 * c.window, 1.0 / (64.0 * c.a));
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a = c.a;
    std::vector<SymbolPtr> syms;
    syms.push_back(fejer(1.0, (0.3 + 0.5 * u(rng)) * a, 2.0 * u(rng) - 1.0));
    {
        const double w = (0.2 + 0.3 * u(rng)) * a, f = (2.0 * a - 2.0 * w) * u(rng), x0 = 2.0 * u(rng) - 1.0;
        syms.push_back(sum({{1.0, fejer(1.0, w, x0, f)}, {1.0, fejer(1.0, w, x0, -f)}}));
    }
    {
        const double w1 = (0.2 + 0.6 * u(rng)) * a, w2 = (0.2 + 0.6 * u(rng)) * a;
        syms.push_back(sum({{1.0, fejer(1.0, w1, -2.0 * u(rng))}, {-0.7, fejer(1.0, w2, 2.0 * u(rng))}}));
    }
    double lo = INFINITY, hi = 0.0;
    for (const auto& s : syms) {
        const double ratio = spectral_norm(toeplitz_matrix(*s, b)) / s->sup_norm(fine);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    rec.lower("min_ratio", lo, 0.95 / 3.0);
    rec.upper("max_ratio", hi, 1.001);
}

void check_nehari(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const Grid g = c.grid();
    const SplitResult s = split_symbol(gaussian(1.0, 1.0), c.a, g);
    NehariOptions opt;
    opt.seed = c.seed;
    const NehariResult r = nehari_solve(modulated(s.right, -2.0 * c.a), c.a, c.p, g, opt);
    const double s0 = r.aak.sigma0;
    rec.upper("moment_residual", r.aak.moment_residual, 1e-6);
    rec.upper("sup_over_sigma0", s0 == 0.0 ? 0.0 : r.sup_norm / s0, 1.05);
    rec.upper("sigma0_vs_line_norm", r.hankel_norm == 0.0 ? 0.0 : std::abs(s0 - r.hankel_norm) / r.hankel_norm, 0.05);
}

void check_bounded(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const Grid g = c.grid();
    const Basis b = work_basis(c);
    NehariOptions opt;
    opt.seed = c.seed;
    double worst_res = 0.0, worst_ratio = 0.0;
    for (const auto& phi : schwartz_family(3, c.a, c.seed + 1)) {
        for (double p : {1.5, 2.0, 3.0}) {
            const BoundedSymbolResult r = bounded_symbol(phi, c.a, p, g, b, opt);
            worst_res = std::max(worst_res, r.operator_residual / r.t_phi);
            worst_ratio = std::max(worst_ratio, r.ratio);
        }
    }
    rec.upper("operator_residual", worst_res, 1e-3);
    rec.upper("sup_ratio", worst_ratio, 20.0);
}

void check_commutator(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const Basis b = work_basis(c);
    const ConformalFrame fr = build_frame(c.a, c.p, c.grid(), b);
    const CompressionOps ops = lambda_ops(fr);
    double worst = 0.0, spoiled = INFINITY;
    const int m = b.count / 2;
    for (const auto& phi : schwartz_family(3, c.a, c.seed + 2)) {
        OperatorMatrix T = assemble_toeplitz(*phi, b, c.p);
        worst = std::max(worst, commutator_test(T, fr).deviation);
        VecC e = VecC::Zero(b.count);
        e[m] = e[m + 3] = 1.0 / std::sqrt(2.0);
        T.entries += spectral_norm(T.entries) * e * e.adjoint();
        spoiled = std::min(spoiled, commutator_test(T, fr).deviation);
    }
    rec.upper("toeplitz_deviation", worst, 1e-6);
    rec.lower("spoiled_deviation", spoiled, 1e-3);
    rec.upper("defect", defect_residual(ops, fr), 1e-6);
}

void check_series(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const Basis b = work_basis(c);
    const ConformalFrame fr = build_frame(c.a, c.p, c.grid(), b);
    const CompressionOps ops = lambda_ops(fr);
    OperatorMatrix id;
    id.entries = MatC::Identity(b.count, b.count);
    id.a = c.a;
    id.p = c.p;
    id.basis = b;
    const OperatorMatrix tg = assemble_toeplitz(*gaussian(1.0, 1.0), b, c.p);
    for (const auto& [name, T] : {std::pair<std::string, const OperatorMatrix*>{"identity", &id}, {"gaussian", &tg}}) {
        const double r8 = series_residual(series_reconstruct(*T, 8, ops), *T);
        const double r64 = series_residual(series_reconstruct(*T, 64, ops), *T);
        rec.upper(name + "_N64", r64, 0.05);
        rec.upper(name + "_N64_vs_N8", r64, r8);
    }
}

BandlimitedFunction fejer_target(double b, const Grid& g) {
    const BandlimitedFunction s = sinc_member(b, 0.0, g);
    BandlimitedFunction h = s;
    h.f = pointwise(s.f, s.f);
    h.a = 2.0 * b;
    h.residual = band_residual(h.f, h.a);
    return h;
}

void check_factorization(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const Grid g = c.grid();
    const BandlimitedFunction h = fejer_target(0.9 * c.a, g);
    const Factorization F = weak_factorize(h, c.a, c.p);
    rec.upper("sup_residual", F.residual_sup / lp_norm(h.f, INFINITY), 1e-6);
    rec.upper("l1_residual", F.residual_l1 / lp_norm(h.f, 1.0), 1e-5);
    rec.upper("nuclear_sum", F.nuclear_sum, std::numeric_limits<double>::max());
    FactorizeOptions half;
    half.spacing = 0.5 * F.plan.spacing;
    const Factorization F2 = weak_factorize(h, c.a, c.p, half);
    const OperatorMatrix T = assemble_toeplitz(*gaussian(1.0, 1.0), period_basis(c), c.p);
    const cplx v1 = pair(T, F), v2 = pair(T, F2);
    rec.upper("pairing_well_defined", std::abs(v1 - v2) / std::abs(v1), 1e-6);
}

void check_xpq(Recorder& rec) {
    const RunConfig& c = rec.cfg;
    const Grid g = c.grid();
    std::vector<BandlimitedFunction> targets{fejer_target(0.9 * c.a, g)};
    {
        const BandlimitedFunction s1 = sinc_member(0.5 * c.a, 3.0, g), s2 = sinc_member(0.4 * c.a, -2.0, g);
        BandlimitedFunction h = s1;
        h.f = pointwise(s1.f, s2.f);
        h.a = 0.9 * c.a;
        targets.push_back(h);
    }
    const auto tests = xpq_test_set(c.a, c.p, period_basis(c), 6, c.seed);
    double l1r = 0.0, er = 0.0;
    for (const auto& h : targets) {
        const XpqEstimate x = xpq_norm_estimate(h, c.a, c.p, tests);
        l1r = std::max(l1r, x.l1 / x.nuclear_sum);
        er = std::max(er, x.estimate / x.nuclear_sum);
    }
    rec.upper("l1_over_nuclear", l1r, 1.0 + 1e-6);
    rec.upper("estimate_over_nuclear", er, 1.0 + 1e-6);
}

struct Entry {
    const char* id;
    const char* ref;
    void (*run)(Recorder&);
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> r{
        {"reproducing_identity", "integral representation of the band projector", check_reproducing},
        {"zero_symbol", "nonzero symbol with zero Toeplitz operator", check_zero_symbol},
        {"vanishing_spectrum", "symbols with spectrum outside [-2a, 2a] give zero operators", check_vanishing},
        {"projector_decomposition", "band projector through half-line projectors", check_projector},
        {"splitting", "three-part splitting of the symbol", check_splitting},
        {"central_recovery", "central part recovered from the operator", check_central},
        {"sinc_constant", "sinc norm product against c (p + 1/(p-1))", check_sinc_constant},
        {"carlsson_sandwich", "(1/3) ||phi|| <= ||T_phi|| <= ||phi|| for real symbols", check_carlsson},
        {"nehari_aak", "Nehari extension with ||psi|| <= ||H||", check_nehari},
        {"bounded_symbol", "bounded symbol assembled from the three parts", check_bounded},
        {"commutator", "Toeplitz operators commute with the omega shift", check_commutator},
        {"series_reconstruction", "series reconstruction from T - conj(Lambda) T Lambda", check_series},
        {"weak_factorization", "h = sum f_k conj(g_k) with finite nuclear sum", check_factorization},
        {"xpq_sandwich", "||h||_1 <= ||h||_X <= nuclear sum", check_xpq},
    };
    return r;
}

}  // namespace

std::vector<std::string> check_ids() {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.emplace_back(e.id);
    return out;
}

CheckResult run_check(const std::string& id, const RunConfig& cfg) {
    cfg.validate();
    for (const auto& e : registry()) {
        if (id != e.id) continue;
        CheckResult r;
        r.id = e.id;
        r.paper_ref = e.ref;
        Recorder rec{cfg, r};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.run(rec);
        } catch (const std::exception& ex) {
            r.error = ex.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.pass = r.error.empty() && !r.items.empty();
        for (const auto& it : r.items) r.pass = r.pass && it.pass;
        return r;
    }
    throw std::invalid_argument("unknown check: " + id);
}

std::vector<CheckResult> run_verify(const RunConfig& cfg, const std::vector<std::string>& only) {
    std::vector<CheckResult> out;
    for (const auto& id : only.empty() ? check_ids() : only) out.push_back(run_check(id, cfg));
    return out;
}

nlohmann::json report_json(const std::vector<CheckResult>& rs, const RunConfig& cfg) {
    nlohmann::json j;
    j["config"] = {{"band", cfg.a},
                   {"p", cfg.p},
                   {"oversample", cfg.oversample},
                   {"window", cfg.window},
                   {"seed", cfg.seed},
                   {"tolerances", cfg.tolerances}};
    bool all = true;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& r : rs) {
        nlohmann::json items = nlohmann::json::array();
        for (const auto& it : r.items)
            items.push_back({{"name", it.name},
                             {"measured", it.measured},
                             {"bound", it.bound},
                             {"kind", it.lower ? "lower" : "upper"},
                             {"pass", it.pass}});
        nlohmann::json c{{"id", r.id}, {"paper_ref", r.paper_ref}, {"pass", r.pass}, {"items", items}};
        if (!r.error.empty()) c["error"] = r.error;
        checks.push_back(c);
        all = all && r.pass;
    }
    j["checks"] = checks;
    j["pass"] = all;
    return j;
}

std::string report_csv(const std::vector<CheckResult>& rs) {
    std::ostringstream os;
    os.precision(17);
    os << "check_id,paper_ref,measured,bound,pass\n";
    for (const auto& r : rs) {
        if (r.items.empty()) os << r.id << ",\"" << r.paper_ref << "\",nan,nan," << (r.pass ? "true" : "false") << "\n";
        for (const auto& it : r.items)
            os << r.id << "." << it.name << ",\"" << r.paper_ref << "\"," << it.measured << "," << it.bound << ","
               << (it.pass ? "true" : "false") << "\n";
    }
    return os.str();
}

}  // namespace pwlab
