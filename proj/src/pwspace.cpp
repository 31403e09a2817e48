#include "pwlab/pwspace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pwlab/pnorm.hpp"

namespace pwlab {

Band::Band(double a_) : a(a_) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("band: a must be > 0");
}

double sinc(double a, double x) {
    const double u = 2.0 * pi * a * x;
    if (std::abs(u) < 1e-4) return 2.0 * a * (1.0 - u * u / 6.0 + u * u * u * u / 120.0);
    return std::sin(u) / (pi * x);
}

cplx sinc(double a, cplx z) {
    const cplx u = 2.0 * pi * a * z;
    if (std::abs(u) < 1e-4) return 2.0 * a * (1.0 - u * u / 6.0 + u * u * u * u / 120.0);
    return std::sin(u) / (pi * z);
}

namespace {

// closed band [-a, a] with a relative guard for bins landing on +-a
inline bool in_band(double xi, double a) { return std::abs(xi) <= a * (1.0 + 1e-12); }

void check_resolved(const Grid& g, double a) {
    if (!(g.nyquist() > a))
        throw std::invalid_argument("grid does not resolve band " + std::to_string(a) +
                                    " (nyquist " + std::to_string(g.nyquist()) + ")");
}

}  // namespace

SampledFunction sinc_kernel(double a, double t, const Grid& g) {
    Band{a};
    return SampledFunction::from(g, [&](double x) { return cplx(sinc(a, x - t)); });
}

BandlimitedFunction sinc_member(double a, double t, const Grid& g, double p) {
    Band{a};
    const double L = g.length();
    const double m = 2.0 * a * L;
    if (std::abs(m - std::round(m)) > 1e-9 * m) return project_band(sinc_kernel(a, t, g), a, p);
    // window-periodic sinc: sum_n sinc_a(x - t + nL), a trigonometric polynomial of band a
    const bool even = static_cast<long>(std::llround(m)) % 2 == 0;
    SampledFunction f = SampledFunction::from(g, [&](double x) {
        const double w = x - t;
        const double u = pi * w / L;
        const double su = std::sin(u);
        if (std::abs(su) < 1e-12) {
            const long n = std::lround(w / L);
            const double sgn = (even || n % 2 == 0) ? 1.0 : -1.0;
            return cplx(2.0 * a * sgn);
        }
        const double num = std::sin(2.0 * pi * a * w);
        return cplx(even ? num * std::cos(u) / (su * L) : num / (su * L));
    });
    check_resolved(g, a);
    BandlimitedFunction out;
    out.f = std::move(f);
    out.a = a;
    out.p = p;
    out.residual = band_residual(out.f, a);
    return out;
}

BandlimitedFunction project_band(const SampledFunction& f, double a, double p) {
    Band{a};
    check_resolved(f.grid(), a);
    BandlimitedFunction out;
    out.f = fourier_multiply(f, [a](double xi) { return in_band(xi, a) ? 1.0 : 0.0; });
    out.a = a;
    out.p = p;
    out.residual = band_residual(out.f, a);
    return out;
}

SampledFunction project_halfline(const SampledFunction& f, int sign) {
    SampledFunction plus = fourier_multiply(f, [](double xi) { return xi >= 0.0 ? 1.0 : 0.0; });
    if (sign > 0) return plus;
    return f - plus;
}

SampledFunction modulate(const SampledFunction& f, double a) {
    if (a == 0.0) return f;
    CVec v(f.size());
    for (int k = 0; k < f.size(); ++k) {
        const double ph = 2.0 * pi * a * f.grid().x(k);
        v[k] = f[k] * cplx(std::cos(ph), std::sin(ph));
    }
    return SampledFunction(f.grid(), std::move(v));
}

cplx theta(double a, cplx z) { return std::exp(2.0 * pi * I * a * z); }

double band_residual(const SampledFunction& f, double a) {
    SampledFunction s = fft_spectrum(f);
    double out = 0.0, tot = 0.0;
    for (int m = 0; m < s.size(); ++m) {
        const double e = std::norm(s[m]);
        tot += e;
        if (!in_band(s.grid().x(m), a)) out += e;
    }
    return tot == 0.0 ? 0.0 : out / tot;
}

double halfline_residual(const SampledFunction& f) {
    SampledFunction s = fft_spectrum(f);
    double out = 0.0, tot = 0.0;
    for (int m = 0; m < s.size(); ++m) {
        const double e = std::norm(s[m]);
        tot += e;
        if (s.grid().x(m) < 0.0) out += e;
    }
    return tot == 0.0 ? 0.0 : out / tot;
}

cplx eval_functional(const BandlimitedFunction& f, cplx z) {
    // Dirichlet kernel over the in-band frequency bins: the window-periodic sinc
    const Grid& g = f.f.grid();
    const double L = g.length();
    const int mmax = static_cast<int>(std::floor(f.a * L * (1.0 + 1e-12)));
    const double nn = 2.0 * mmax + 1.0;
    cplx acc = 0.0;
    for (int k = 0; k < g.count; ++k) {
        const cplx w = (z - g.x(k)) / L;
        const cplx den = std::sin(pi * w);
        cplx ker;
        if (std::abs(den) < 1e-7) {
            // w near an integer n: limit nn * (-1)^{n (nn-1)} = nn for odd nn
            ker = nn;
        } else {
            ker = std::sin(pi * nn * w) / den;
        }
        acc += ker * f.f[k];
    }
    return acc * g.step / L;
}

cplx eval_functional_direct(const SampledFunction& f, double a, cplx z) {
    cplx acc = 0.0;
    const Grid& g = f.grid();
    for (int k = 0; k < g.count; ++k) acc += sinc(a, z - g.x(k)) * f[k];
    return g.step * acc;
}

namespace {

double projector_norm_estimate(double p, const Grid& g, const std::function<double(double)>& mask) {
    if (!(p > 1.0) || std::isinf(p)) throw std::domain_error("p must lie in (1, inf)");
    auto op = [&](const VecC& x) -> VecC {
        SampledFunction f(g, CVec(x.data(), x.data() + x.size()));
        SampledFunction y = fourier_multiply(f, mask);
        return Eigen::Map<const VecC>(y.values().data(), y.size());
    };
    PowerOptions opt;
    opt.restarts = 12;
    opt.max_iter = 300;
    return pnorm_lower(op, op, g.count, p, opt);
}

}  // namespace

double riesz_constant_estimate(double p, const Grid& g) {
    return projector_norm_estimate(p, g, [](double xi) { return xi >= 0.0 ? 1.0 : 0.0; });
}

double band_projector_norm_estimate(double a, double p, const Grid& g) {
    check_resolved(g, a);
    return projector_norm_estimate(p, g, [a](double xi) { return in_band(xi, a) ? 1.0 : 0.0; });
}

SampledFunction cauchy_kernel(cplx z, const Grid& g) {
    if (!(z.imag() > 0.0)) throw std::invalid_argument("cauchy_kernel: Im z must be > 0");
    return SampledFunction::from(g, [&](double x) { return 1.0 / (2.0 * pi * I * (std::conj(z) - x)); });
}

InnerExp inner_from_json(const nlohmann::json& j) {
    if (!j.contains("type")) throw std::invalid_argument("inner function: missing field 'type'");
    if (j.at("type") != "exp") throw std::invalid_argument("inner function: unsupported type");
    if (!j.contains("b")) throw std::invalid_argument("inner function: missing field 'b'");
    InnerExp th{j.at("b").get<double>()};
    if (!(th.b > 0.0)) throw std::invalid_argument("inner function: b must be > 0");
    return th;
}

SampledFunction repro_kernel(const InnerExp& th, cplx z, const Grid& g) {
    if (!(th.b > 0.0)) throw std::invalid_argument("repro_kernel: unsupported inner function");
    if (!(z.imag() > 0.0)) throw std::invalid_argument("repro_kernel: Im z must be > 0");
    const cplx tz = std::conj(theta(th.b, z));
    return SampledFunction::from(g, [&](double x) {
        return (1.0 - tz * theta(th.b, x)) / (2.0 * pi * I * (std::conj(z) - x));
    });
}

SampledFunction conj_kernel(const InnerExp& th, cplx z, const Grid& g) {
    if (!(th.b > 0.0)) throw std::invalid_argument("conj_kernel: unsupported inner function");
    if (z.imag() < 0.0) throw std::invalid_argument("conj_kernel: Im z must be >= 0");
    const cplx tz = theta(th.b, z);
    return SampledFunction::from(g, [&](double x) -> cplx {
        const cplx d = cplx(x) - z;
        // removable point: (1/2 pi i) theta'(x) = b theta(x), plus the next Taylor term
        if (std::abs(d) < 1e-6) return th.b * theta(th.b, x) * (1.0 - pi * I * th.b * d);
        return (theta(th.b, x) - tz) / (2.0 * pi * I * d);
    });
}

}  // namespace pwlab
