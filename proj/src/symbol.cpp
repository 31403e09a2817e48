#include "pwlab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pwlab/kernels.hpp"
#include "pwlab/pwspace.hpp"
#include "pwlab/quadrature.hpp"

namespace pwlab {

cplx Symbol::value(double x) const {
    cplx out;
    values(std::span<const double>(&x, 1), std::span<cplx>(&out, 1));
    return out;
}

std::vector<cplx> Symbol::values(std::span<const double> x) const {
    std::vector<cplx> out(x.size());
    values(x, out);
    return out;
}

SampledFunction Symbol::sample(const Grid& g) const {
    std::vector<double> x(g.count);
    for (int k = 0; k < g.count; ++k) x[k] = g.x(k);
    return SampledFunction(g, values(x));
}

double Symbol::sup_norm(const Grid& g) const { return lp_norm(sample(g), INFINITY); }

namespace {

inline cplx expi(double ph) { return {std::cos(ph), std::sin(ph)}; }

constexpr std::pair<double, double> kEmpty{0.0, 0.0};

class Gaussian final : public Symbol {
public:
    Gaussian(cplx amp, double beta, double x0, double c) : amp_(amp), beta_(beta), x0_(x0), c_(c) {
        if (!(beta > 0.0)) throw std::invalid_argument("gaussian: beta must be > 0");
    }
    void values(std::span<const double> x, std::span<cplx> out) const override {
        for (size_t k = 0; k < x.size(); ++k) {
            const double d = x[k] - x0_;
            out[k] = amp_ * std::exp(-beta_ * d * d) * expi(2.0 * pi * c_ * x[k]);
        }
    }
    void density(std::span<const double> s, std::span<cplx> out) const override {
        const double pre = std::sqrt(pi / beta_);
        for (size_t k = 0; k < s.size(); ++k) {
            const double d = s[k] - c_;
            out[k] = amp_ * pre * std::exp(-pi * pi * d * d / beta_) * expi(-2.0 * pi * d * x0_);
        }
    }
    std::pair<double, double> hull() const override {
        const double r = std::sqrt(45.0 * beta_) / pi;
        return {c_ - r, c_ + r};
    }
    double extent() const override { return std::abs(x0_) + std::sqrt(45.0 / beta_); }

private:
    cplx amp_;
    double beta_, x0_, c_;
};

class ModPoly final : public Symbol {
public:
    ModPoly(int n, double c, cplx amp) : n_(n), c_(c), amp_(amp) {
        if (n < 0) throw std::invalid_argument("mod_poly: n must be >= 0");
    }
    void values(std::span<const double> x, std::span<cplx> out) const override {
        for (size_t k = 0; k < x.size(); ++k)
            out[k] = amp_ * std::pow(x[k], n_) * expi(2.0 * pi * c_ * x[k]);
    }
    void density(std::span<const double> s, std::span<cplx> out) const override {
        std::fill(out.begin(), out.begin() + s.size(), cplx(0.0));
    }
    std::vector<PointMass> masses() const override { return {{c_, amp_, n_}}; }
    std::pair<double, double> hull() const override { return kEmpty; }
    double extent() const override { return 0.0; }

private:
    int n_;
    double c_;
    cplx amp_;
};

class Fejer final : public Symbol {
public:
    Fejer(cplx amp, double b, double x0, double c) : amp_(amp), b_(b), x0_(x0), c_(c) {
        if (!(b > 0.0)) throw std::invalid_argument("fejer: b must be > 0");
    }
    void values(std::span<const double> x, std::span<cplx> out) const override {
        for (size_t k = 0; k < x.size(); ++k) {
            const double v = sinc(b_, x[k] - x0_);
            out[k] = amp_ * v * v * expi(2.0 * pi * c_ * x[k]);
        }
    }
    void density(std::span<const double> s, std::span<cplx> out) const override {
        for (size_t k = 0; k < s.size(); ++k) {
            const double d = s[k] - c_;
            const double tri = std::max(2.0 * b_ - std::abs(d), 0.0);
            out[k] = amp_ * tri * expi(-2.0 * pi * d * x0_);
        }
    }
    std::pair<double, double> hull() const override { return {c_ - 2.0 * b_, c_ + 2.0 * b_}; }
    std::vector<double> breakpoints() const override { return {c_ - 2.0 * b_, c_, c_ + 2.0 * b_}; }
    double extent() const override { return std::abs(x0_) + 1.0 / b_; }

private:
    cplx amp_;
    double b_, x0_, c_;
};

class Sampled final : public Symbol {
public:
    explicit Sampled(SampledFunction f) : f_(std::move(f)) {}
    void values(std::span<const double> x, std::span<cplx> out) const override {
        // Whittaker interpolant at the sampling band
        const Grid& g = f_.grid();
        const double nyq = g.nyquist();
        for (size_t k = 0; k < x.size(); ++k) {
            const double r = (x[k] - g.start) / g.step;
            const double rk = std::round(r);
            if (std::abs(r - rk) < 1e-12) {
                out[k] = (rk >= 0 && rk < g.count) ? f_[static_cast<int>(rk)] : cplx(0.0);
                continue;
            }
            cplx acc = 0.0;
            for (int m = 0; m < g.count; ++m) acc += f_[m] * sinc(nyq, x[k] - g.x(m));
            out[k] = acc * g.step;
        }
    }
    void density(std::span<const double> s, std::span<cplx> out) const override {
        const Grid& g = f_.grid();
        std::vector<double> x(g.count);
        for (int m = 0; m < g.count; ++m) x[m] = g.x(m);
        std::vector<cplx> w(f_.values().begin(), f_.values().end());
        for (auto& v : w) v *= g.step;
        kernels::exp_sum(x, w, s, -1.0, out.subspan(0, s.size()));
        const double nyq = g.nyquist();
        for (size_t k = 0; k < s.size(); ++k)
            if (std::abs(s[k]) > nyq) out[k] = 0.0;
    }
    std::pair<double, double> hull() const override {
        return {-f_.grid().nyquist(), f_.grid().nyquist()};
    }
    double extent() const override {
        const Grid& g = f_.grid();
        return std::max(std::abs(g.start), std::abs(g.x(g.count - 1)));
    }

private:
    SampledFunction f_;
};

class OmegaSeries final : public Symbol {
public:
    OmegaSeries(double beta, std::vector<std::pair<int, cplx>> coeffs, double extent,
                std::function<cplx(double)> closed)
        : beta_(beta), extent_(extent > 0.0 ? extent : 10.0 * beta), closed_(std::move(closed)) {
        if (!(beta > 0.0)) throw std::invalid_argument("omega: beta must be > 0");
        for (const auto& [n, c] : coeffs) {
            if (n == 0) {
                c0_ += c;
            } else if (n > 0) {
                if (static_cast<int>(pos_.size()) < n) pos_.resize(n, 0.0);
                pos_[n - 1] += c;
            } else {
                if (static_cast<int>(neg_.size()) < -n) neg_.resize(-n, 0.0);
                neg_[-n - 1] += c;
            }
        }
    }
    void values(std::span<const double> x, std::span<cplx> out) const override {
        for (size_t k = 0; k < x.size(); ++k) {
            if (closed_) {
                out[k] = closed_(x[k]);
                continue;
            }
            const cplx w = (x[k] - I * beta_) / (x[k] + I * beta_);
            cplx acc = c0_, pw = 1.0;
            for (const auto& c : pos_) acc += c * (pw *= w);
            pw = 1.0;
            const cplx wb = std::conj(w);
            for (const auto& c : neg_) acc += c * (pw *= wb);
            out[k] = acc;
        }
    }
    void density(std::span<const double> s, std::span<cplx> out) const override {
        for (size_t k = 0; k < s.size(); ++k) {
            if (s[k] > 0.0)
                out[k] = omega_combined_density(pos_, beta_, s[k]);
            else if (s[k] < 0.0)
                out[k] = omega_combined_density(neg_, beta_, -s[k]);
            else
                out[k] = 0.0;
        }
    }
    std::vector<PointMass> masses() const override {
        cplx tot = c0_;
        for (const auto& c : pos_) tot += c;
        for (const auto& c : neg_) tot += c;
        return {{0.0, tot, 0}};
    }
    std::pair<double, double> hull() const override {
        auto reach = [&](size_t n) {
            const double xm = 4.0 * n + 60.0 + 12.0 * std::sqrt(n + 1.0);
            return xm / (4.0 * pi * beta_);
        };
        return {neg_.empty() ? 0.0 : -reach(neg_.size()), pos_.empty() ? 0.0 : reach(pos_.size())};
    }
    std::vector<double> breakpoints() const override { return {0.0}; }
    double extent() const override { return extent_; }

private:
    double beta_;
    double extent_;
    std::function<cplx(double)> closed_;
    cplx c0_ = 0.0;
    std::vector<cplx> pos_, neg_;
};

// trapezoid alias images stay this far (times 1/width) from the evaluation point
constexpr double kAliasGuard = 500.0;

class Filtered final : public Symbol {
public:
    Filtered(SymbolPtr child, std::function<double(double)> m, double lo, double hi)
        : child_(std::move(child)), m_(std::move(m)), lo_(lo), hi_(hi) {
        if (!(hi > lo)) throw std::invalid_argument("filtered: empty multiplier support");
        for (const auto& pm : child_->masses()) {
            if (pm.s < lo_ || pm.s > hi_) continue;
            const double mv = m_(pm.s);
            if (pm.order > 0) {
                const double h = 1e-6 * (hi_ - lo_);
                if (std::abs(m_(pm.s + h) - m_(pm.s - h)) > 1e-12)
                    throw std::invalid_argument(
                        "filtered: polynomial mass on a non-flat part of the multiplier");
            }
            if (mv != 0.0) masses_.push_back({pm.s, pm.w * mv, pm.order});
        }
    }
    void values(std::span<const double> x, std::span<cplx> out) const override {
        std::fill(out.begin(), out.begin() + x.size(), cplx(0.0));
        const auto [l, r] = hull();
        if (r > l && !x.empty()) {
            // points grouped by |x| within a factor 2, each group with its own trapezoid step
            std::vector<size_t> order(x.size());
            for (size_t k = 0; k < x.size(); ++k) order[k] = k;
            std::sort(order.begin(), order.end(),
                      [&](size_t i, size_t j) { return std::abs(x[i]) < std::abs(x[j]); });
            size_t start = 0;
            while (start < order.size()) {
                const double top = std::max(16.0, 2.0 * std::abs(x[order[start]]));
                size_t stop = start;
                while (stop < order.size() && std::abs(x[order[stop]]) <= top) ++stop;
                std::vector<double> xs(stop - start);
                for (size_t i = start; i < stop; ++i) xs[i - start] = x[order[i]];
                std::vector<cplx> tmp(xs.size());
                trapezoid(l, r, top, xs, tmp);
                for (size_t i = start; i < stop; ++i) out[order[i]] += tmp[i - start];
                start = stop;
            }
        }
        for (const auto& pm : masses_)
            for (size_t k = 0; k < x.size(); ++k)
                out[k] += pm.w * std::pow(x[k], pm.order) * expi(2.0 * pi * pm.s * x[k]);
    }
    void density(std::span<const double> s, std::span<cplx> out) const override {
        child_->density(s, out);
        for (size_t k = 0; k < s.size(); ++k)
            out[k] = (s[k] >= lo_ && s[k] <= hi_) ? out[k] * m_(s[k]) : cplx(0.0);
    }
    std::vector<PointMass> masses() const override { return masses_; }
    std::pair<double, double> hull() const override {
        if (!child_->has_density()) return kEmpty;
        const auto [l, r] = child_->hull();
        const double nl = std::max(l, lo_), nr = std::min(r, hi_);
        return nr > nl ? std::make_pair(nl, nr) : kEmpty;
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> b = child_->breakpoints();
        b.push_back(lo_);
        b.push_back(hi_);
        return b;
    }
    double extent() const override { return child_->extent() + 20.0 / (hi_ - lo_); }

private:
    // trapezoid sum of the spectrum; the integrand vanishes smoothly at both ends
    void trapezoid(double l, double r, double xmax, std::span<const double> x, std::span<cplx> out) const {
        const double guard = kAliasGuard / (hi_ - lo_);
        const double ds = std::min(1.0 / (2.5 * (xmax + child_->extent() + 1.0) + guard), (r - l) / 64.0);
        const int n = static_cast<int>(std::ceil((r - l) / ds));
        const double h = (r - l) / n;
        std::vector<double> s(n + 1);
        for (int q = 0; q <= n; ++q) s[q] = l + q * h;
        std::vector<cplx> w(n + 1);
        density(s, w);
        for (auto& v : w) v *= h;
        w.front() *= 0.5;
        w.back() *= 0.5;
        kernels::exp_sum(s, w, x, +1.0, out);
    }

    SymbolPtr child_;
    std::function<double(double)> m_;
    double lo_, hi_;
    std::vector<PointMass> masses_;
};

class Modulated final : public Symbol {
public:
    Modulated(SymbolPtr child, double c) : child_(std::move(child)), c_(c) {}
    void values(std::span<const double> x, std::span<cplx> out) const override {
        child_->values(x, out);
        for (size_t k = 0; k < x.size(); ++k) out[k] *= expi(2.0 * pi * c_ * x[k]);
    }
    void density(std::span<const double> s, std::span<cplx> out) const override {
        std::vector<double> t(s.begin(), s.end());
        for (auto& v : t) v -= c_;
        child_->density(t, out);
    }
    std::vector<PointMass> masses() const override {
        auto m = child_->masses();
        for (auto& pm : m) pm.s += c_;
        return m;
    }
    std::pair<double, double> hull() const override {
        if (!child_->has_density()) return kEmpty;
        const auto [l, r] = child_->hull();
        return {l + c_, r + c_};
    }
    std::vector<double> breakpoints() const override {
        auto b = child_->breakpoints();
        for (auto& v : b) v += c_;
        return b;
    }
    double extent() const override { return child_->extent(); }

private:
    SymbolPtr child_;
    double c_;
};

class Reflected final : public Symbol {
public:
    explicit Reflected(SymbolPtr child) : child_(std::move(child)) {}
    void values(std::span<const double> x, std::span<cplx> out) const override {
        std::vector<double> t(x.begin(), x.end());
        for (auto& v : t) v = -v;
        child_->values(t, out);
    }
    void density(std::span<const double> s, std::span<cplx> out) const override {
        std::vector<double> t(s.begin(), s.end());
        for (auto& v : t) v = -v;
        child_->density(t, out);
    }
    std::vector<PointMass> masses() const override {
        auto m = child_->masses();
        for (auto& pm : m) {
            pm.s = -pm.s;
            if (pm.order % 2) pm.w = -pm.w;
        }
        return m;
    }
    std::pair<double, double> hull() const override {
        if (!child_->has_density()) return kEmpty;
        const auto [l, r] = child_->hull();
        return {-r, -l};
    }
    std::vector<double> breakpoints() const override {
        auto b = child_->breakpoints();
        for (auto& v : b) v = -v;
        return b;
    }
    double extent() const override { return child_->extent(); }

private:
    SymbolPtr child_;
};

class Sum final : public Symbol {
public:
    explicit Sum(std::vector<std::pair<cplx, SymbolPtr>> t) : terms_(std::move(t)) {}
    void values(std::span<const double> x, std::span<cplx> out) const override {
        std::fill(out.begin(), out.begin() + x.size(), cplx(0.0));
        std::vector<cplx> tmp(x.size());
        for (const auto& [c, s] : terms_) {
            s->values(x, tmp);
            for (size_t k = 0; k < x.size(); ++k) out[k] += c * tmp[k];
        }
    }
    void density(std::span<const double> s, std::span<cplx> out) const override {
        std::fill(out.begin(), out.begin() + s.size(), cplx(0.0));
        std::vector<cplx> tmp(s.size());
        for (const auto& [c, sym] : terms_) {
            if (!sym->has_density()) continue;
            sym->density(s, tmp);
            for (size_t k = 0; k < s.size(); ++k) out[k] += c * tmp[k];
        }
    }
    std::vector<PointMass> masses() const override {
        std::vector<PointMass> m;
        for (const auto& [c, s] : terms_)
            for (auto pm : s->masses()) {
                pm.w *= c;
                m.push_back(pm);
            }
        return m;
    }
    std::pair<double, double> hull() const override {
        double l = INFINITY, r = -INFINITY;
        for (const auto& [c, s] : terms_) {
            if (!s->has_density()) continue;
            const auto [a, b] = s->hull();
            l = std::min(l, a);
            r = std::max(r, b);
        }
        return r > l ? std::make_pair(l, r) : kEmpty;
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> b;
        for (const auto& [c, s] : terms_) {
            auto sb = s->breakpoints();
            b.insert(b.end(), sb.begin(), sb.end());
            if (s->has_density()) {
                b.push_back(s->hull().first);
                b.push_back(s->hull().second);
            }
        }
        return b;
    }
    double extent() const override {
        double e = 0.0;
        for (const auto& [c, s] : terms_) e = std::max(e, s->extent());
        return e;
    }

private:
    std::vector<std::pair<cplx, SymbolPtr>> terms_;
};

}  // namespace

double omega_power_density(int n, double beta, double s) {
    std::vector<cplx> v(n, 0.0);
    v[n - 1] = 1.0;
    return omega_combined_density(v, beta, s).real();
}

cplx omega_combined_density(std::span<const cplx> c, double beta, double s) {
    if (c.empty() || s <= 0.0) return 0.0;
    const double x = 4.0 * pi * beta * s;
    // forward Laguerre recurrence, alpha = 1, with a running scale exponent
    double lprev = 1.0, lcur = 1.0, lscale = 0.0;
    double fac = std::exp(-0.5 * x);
    cplx acc = c[0] * lcur * fac;
    lcur = 2.0 - x;
    for (size_t m = 1; m < c.size(); ++m) {
        acc += c[m] * lcur * fac;
        const double k = static_cast<double>(m);
        const double next = ((2.0 * k + 2.0 - x) * lcur - (k + 1.0) * lprev) / (k + 1.0);
        lprev = lcur;
        lcur = next;
        if (std::abs(lcur) > 1e150) {
            lprev *= 1e-150;
            lcur *= 1e-150;
            lscale += 150.0 * std::log(10.0);
            fac = std::exp(lscale - 0.5 * x);
        }
    }
    return -4.0 * pi * beta * acc;
}

SymbolPtr gaussian(cplx amp, double beta, double center, double freq) {
    return std::make_shared<Gaussian>(amp, beta, center, freq);
}
SymbolPtr mod_poly(int n, double freq, cplx amp) { return std::make_shared<ModPoly>(n, freq, amp); }
SymbolPtr fejer(cplx amp, double b, double center, double freq) {
    return std::make_shared<Fejer>(amp, b, center, freq);
}
SymbolPtr sampled(const SampledFunction& f) { return std::make_shared<Sampled>(f); }
SymbolPtr omega_series(double beta, std::vector<std::pair<int, cplx>> coeffs, double extent,
                       std::function<cplx(double)> closed_form) {
    return std::make_shared<OmegaSeries>(beta, std::move(coeffs), extent, std::move(closed_form));
}
SymbolPtr filtered(SymbolPtr child, std::function<double(double)> m, double lo, double hi) {
    return std::make_shared<Filtered>(std::move(child), std::move(m), lo, hi);
}
SymbolPtr modulated(SymbolPtr child, double c) { return std::make_shared<Modulated>(std::move(child), c); }
SymbolPtr reflected(SymbolPtr child) { return std::make_shared<Reflected>(std::move(child)); }
SymbolPtr sum(std::vector<std::pair<cplx, SymbolPtr>> terms) {
    return std::make_shared<Sum>(std::move(terms));
}
SymbolPtr zero_symbol() { return sum({}); }

namespace {

double num(const nlohmann::json& j, const char* family, const char* key, std::optional<double> def = {}) {
    if (!j.contains(key)) {
        if (def) return *def;
        throw std::invalid_argument(std::string(family) + ": missing field '" + key + "'");
    }
    if (!j.at(key).is_number())
        throw std::invalid_argument(std::string(family) + ": field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

cplx cnum(const nlohmann::json& j, const char* family, const char* key, cplx def) {
    if (!j.contains(key)) return def;
    try {
        return complex_from_json(j.at(key));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(std::string(family) + ": field '" + key + "' must be a number or [re, im]");
    }
}

void check_support(const Symbol& s, const nlohmann::json& sup) {
    if (!sup.is_array() || sup.size() != 2 || !sup[0].is_number() || !sup[1].is_number())
        throw std::invalid_argument("symbol: field 'spectral_support' must be [lo, hi]");
    const double lo = sup[0].get<double>(), hi = sup[1].get<double>();
    const double tol = 1e-9 * (1.0 + std::abs(lo) + std::abs(hi));
    if (s.has_density()) {
        // measure the density mass outside the declared interval
        const auto [l, r] = s.hull();
        Rule q = composite_gauss(l, r, (r - l) / 256.0, s.breakpoints());
        std::vector<cplx> d(q.size());
        s.density(q.x, d);
        double out = 0.0, tot = 0.0;
        for (size_t k = 0; k < q.size(); ++k) {
            const double e = q.w[k] * std::norm(d[k]);
            tot += e;
            if (q.x[k] < lo - tol || q.x[k] > hi + tol) out += e;
        }
        if (tot > 0.0 && out / tot > 1e-6)
            throw std::invalid_argument("symbol: spectrum exceeds the declared 'spectral_support'");
    }
    for (const auto& pm : s.masses())
        if (pm.w != 0.0 && (pm.s < lo - tol || pm.s > hi + tol))
            throw std::invalid_argument("symbol: spectral mass outside the declared 'spectral_support'");
}

}  // namespace

SymbolPtr symbol_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("symbol: expected an object");
    SymbolPtr s;
    if (j.contains("gaussian")) {
        const auto& g = j.at("gaussian");
        s = gaussian(cnum(g, "gaussian", "amp", 1.0), num(g, "gaussian", "beta", 1.0),
                     num(g, "gaussian", "center", 0.0), num(g, "gaussian", "freq", 0.0));
    } else if (j.contains("mod_poly")) {
        const auto& g = j.at("mod_poly");
        const double n = num(g, "mod_poly", "n");
        if (n < 0 || n != std::floor(n)) throw std::invalid_argument("mod_poly: field 'n' must be a non-negative integer");
        s = mod_poly(static_cast<int>(n), num(g, "mod_poly", "freq"), cnum(g, "mod_poly", "amp", 1.0));
    } else if (j.contains("fejer")) {
        const auto& g = j.at("fejer");
        s = fejer(cnum(g, "fejer", "amp", 1.0), num(g, "fejer", "b"), num(g, "fejer", "center", 0.0),
                  num(g, "fejer", "freq", 0.0));
    } else if (j.contains("sampled")) {
        s = sampled(sampled_from_json(j.at("sampled")));
    } else if (j.contains("omega")) {
        const auto& g = j.at("omega");
        if (!g.contains("coeffs") || !g.at("coeffs").is_array())
            throw std::invalid_argument("omega: missing field 'coeffs'");
        std::vector<std::pair<int, cplx>> c;
        for (const auto& e : g.at("coeffs")) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer())
                throw std::invalid_argument("omega: field 'coeffs' entries must be [n, value]");
            c.emplace_back(e[0].get<int>(), complex_from_json(e[1]));
        }
        s = omega_series(num(g, "omega", "beta", 1.0), std::move(c));
    } else if (j.contains("modulated")) {
        const auto& g = j.at("modulated");
        if (!g.contains("symbol")) throw std::invalid_argument("modulated: missing field 'symbol'");
        s = modulated(symbol_from_json(g.at("symbol")), num(g, "modulated", "freq"));
    } else if (j.contains("sum")) {
        if (!j.at("sum").is_array()) throw std::invalid_argument("sum: field 'sum' must be an array");
        std::vector<std::pair<cplx, SymbolPtr>> t;
        for (const auto& e : j.at("sum")) t.emplace_back(cnum(e, "sum", "coef", 1.0), symbol_from_json(e));
        s = sum(std::move(t));
    } else {
        throw std::invalid_argument(
            "symbol: missing family (one of gaussian, mod_poly, fejer, sampled, omega, modulated, sum)");
    }
    if (j.contains("spectral_support")) check_support(*s, j.at("spectral_support"));
    return s;
}

}  // namespace pwlab
