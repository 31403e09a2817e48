#include "pwlab/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

#include "pwlab/kernels.hpp"

namespace pwlab {

Grid::Grid(double start_, double step_, int count_) : start(start_), step(step_), count(count_) {
    if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("grid: step must be > 0");
    if (count < 2) throw std::invalid_argument("grid: count must be >= 2");
    if (!std::isfinite(start) || !std::isfinite(start + (count - 1) * step))
        throw std::invalid_argument("grid: non-finite sample positions");
}

Grid Grid::window(double lo, double hi, double step) {
    int n = static_cast<int>(std::llround((hi - lo) / step));
    return Grid(lo, step, n);
}

Grid Grid::frequencies() const {
    const double df = 1.0 / (count * step);
    return Grid(-(count / 2) * df, df, count);
}

bool Grid::operator==(const Grid& o) const {
    return count == o.count && std::abs(start - o.start) <= 1e-12 * (1.0 + std::abs(start)) &&
           std::abs(step - o.step) <= 1e-14 * step;
}

SampledFunction::SampledFunction(Grid g, CVec values) : grid_(g), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.count)
        throw std::invalid_argument("sampled function: values length != grid count");
    for (const auto& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("sampled function: non-finite value");
}

SampledFunction::SampledFunction(Grid g) : grid_(g), values_(g.count, cplx(0.0)) {}

SampledFunction& SampledFunction::operator+=(const SampledFunction& o) {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("grid mismatch");
    for (int k = 0; k < size(); ++k) values_[k] += o.values_[k];
    return *this;
}

SampledFunction& SampledFunction::operator-=(const SampledFunction& o) {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("grid mismatch");
    for (int k = 0; k < size(); ++k) values_[k] -= o.values_[k];
    return *this;
}

SampledFunction& SampledFunction::operator*=(cplx s) {
    for (auto& v : values_) v *= s;
    return *this;
}

SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
SampledFunction operator*(cplx s, SampledFunction a) { return a *= s; }

SampledFunction pointwise(const SampledFunction& a, const SampledFunction& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("grid mismatch");
    CVec v(a.size());
    for (int k = 0; k < a.size(); ++k) v[k] = a[k] * b[k];
    return SampledFunction(a.grid(), std::move(v));
}

SampledFunction conj(const SampledFunction& f) {
    CVec v(f.size());
    for (int k = 0; k < f.size(); ++k) v[k] = std::conj(f[k]);
    return SampledFunction(f.grid(), std::move(v));
}

namespace {
std::mutex plan_mutex;
}

void dft_inplace(CVec& v, int sign) {
    auto* data = reinterpret_cast<fftw_complex*>(v.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(v.size()), data, data,
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(plan);
}

// index m in [-N/2, N/2) of the ascending frequency grid <-> DFT bin (m mod N)
static inline int bin_of(int m, int n) { return ((m % n) + n) % n; }

SampledFunction fft_spectrum(const SampledFunction& f) {
    const Grid& g = f.grid();
    const int n = g.count;
    CVec buf = f.values();
    dft_inplace(buf, -1);
    Grid fg = g.frequencies();
    CVec out(n);
    const int m0 = -(n / 2);
    for (int i = 0; i < n; ++i) {
        const int m = m0 + i;
        const double xi = fg.x(i);
        const double ph = -2.0 * pi * xi * g.start;
        out[i] = g.step * buf[bin_of(m, n)] * cplx(std::cos(ph), std::sin(ph));
    }
    return SampledFunction(fg, std::move(out));
}

SampledFunction inverse_spectrum(const SampledFunction& spec, const Grid& space) {
    const int n = space.count;
    if (!(spec.grid() == space.frequencies()))
        throw std::invalid_argument("inverse_spectrum: spectrum grid does not match space grid");
    const Grid& fg = spec.grid();
    CVec buf(n);
    const int m0 = -(n / 2);
    for (int i = 0; i < n; ++i) {
        const double ph = 2.0 * pi * fg.x(i) * space.start;
        buf[bin_of(m0 + i, n)] = spec[i] * cplx(std::cos(ph), std::sin(ph));
    }
    dft_inplace(buf, +1);
    const double scale = fg.step;
    for (auto& v : buf) v *= scale;
    return SampledFunction(space, std::move(buf));
}

cplx quad_integral(const SampledFunction& f) {
    cplx acc = 0.0;
    for (const auto& v : f.values()) acc += v;
    return f.grid().step * acc;
}

double lp_norm(std::span<const cplx> v, double p, double weight) {
    if (std::isnan(p) || p < 1.0) throw std::domain_error("lp_norm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    double scale = 0.0;
    for (const auto& z : v) scale = std::max(scale, std::abs(z));
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (const auto& z : v) acc += std::pow(std::abs(z) / scale, p);
    return scale * std::pow(weight * acc, 1.0 / p);
}

double lp_norm(const SampledFunction& f, double p) {
    return lp_norm(std::span<const cplx>(f.values()), p, f.grid().step);
}

cplx inner(const SampledFunction& f, const SampledFunction& g) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("inner: grid mismatch");
    cplx acc = 0.0;
    for (int k = 0; k < f.size(); ++k) acc += f[k] * std::conj(g[k]);
    return f.grid().step * acc;
}

CVec evaluate_offgrid(const SampledFunction& f, std::span<const double> xs) {
    const Grid& g = f.grid();
    const int n = g.count;
    CVec buf = f.values();
    dft_inplace(buf, -1);
    const double df = 1.0 / (n * g.step);
    // symmetric spectrum; the Nyquist bin of an even grid is split in two halves
    std::vector<double> s;
    CVec w;
    s.reserve(n + 1);
    w.reserve(n + 1);
    const int m0 = -(n / 2);
    for (int i = 0; i < n; ++i) {
        const int m = m0 + i;
        cplx c = buf[bin_of(m, n)] / static_cast<double>(n);
        if (n % 2 == 0 && m == m0) {
            s.push_back(m * df);
            w.push_back(0.5 * c);
            s.push_back(-m * df);
            w.push_back(0.5 * c);
        } else {
            s.push_back(m * df);
            w.push_back(c);
        }
    }
    std::vector<double> t(xs.size());
    for (size_t k = 0; k < xs.size(); ++k) t[k] = xs[k] - g.start;
    CVec out(xs.size());
    kernels::exp_sum(s, w, t, +1.0, out);
    // exact on-grid values
    for (size_t k = 0; k < xs.size(); ++k) {
        const double r = (xs[k] - g.start) / g.step;
        const double rk = std::round(r);
        if (std::abs(r - rk) < 1e-12 && rk >= 0 && rk < n) out[k] = f[static_cast<int>(rk)];
    }
    return out;
}

cplx evaluate_offgrid(const SampledFunction& f, double x) {
    double xs[1] = {x};
    return evaluate_offgrid(f, std::span<const double>(xs, 1))[0];
}

nlohmann::json complex_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw std::invalid_argument("expected a number or [re, im]");
}

nlohmann::json to_json(const Grid& g) {
    return {{"start", g.start}, {"step", g.step}, {"count", g.count}};
}

Grid grid_from_json(const nlohmann::json& j) {
    for (const char* key : {"start", "step", "count"})
        if (!j.contains(key)) throw std::invalid_argument(std::string("grid: missing field '") + key + "'");
    return Grid(j.at("start").get<double>(), j.at("step").get<double>(), j.at("count").get<int>());
}

nlohmann::json to_json(const SampledFunction& f) {
    nlohmann::json vals = nlohmann::json::array();
    for (const auto& v : f.values()) vals.push_back(complex_to_json(v));
    return {{"grid", to_json(f.grid())}, {"values", vals}};
}

SampledFunction sampled_from_json(const nlohmann::json& j) {
    if (!j.contains("grid")) throw std::invalid_argument("sampled function: missing field 'grid'");
    if (!j.contains("values") || !j.at("values").is_array())
        throw std::invalid_argument("sampled function: missing field 'values'");
    Grid g = grid_from_json(j.at("grid"));
    CVec v;
    v.reserve(j.at("values").size());
    for (const auto& e : j.at("values")) v.push_back(complex_from_json(e));
    return SampledFunction(g, std::move(v));
}

}  // namespace pwlab
