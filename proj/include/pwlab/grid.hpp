#pragma once

#include <complex>
#include <span>
#include <vector>

#include <json.hpp>

namespace pwlab {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

/// Uniform grid x_k = start + k*step, k = 0..count-1.
struct Grid {
    double start = 0.0;
    double step = 1.0;
    int count = 2;

    Grid() = default;
    Grid(double start, double step, int count);

    /// Grid covering [lo, hi) with the given step.
    static Grid window(double lo, double hi, double step);

    double x(int k) const { return start + k * step; }
    double half_length() const { return 0.5 * count * step; }
    double length() const { return count * step; }
    /// Nyquist frequency 1/(2 step).
    double nyquist() const { return 0.5 / step; }
    /// Frequency grid induced by the DFT, ascending, step 1/(N step).
    Grid frequencies() const;

    bool operator==(const Grid& o) const;
};

/// Complex samples on a Grid. Values must be finite.
class SampledFunction {
public:
    SampledFunction() = default;
    SampledFunction(Grid g, CVec values);
    explicit SampledFunction(Grid g);

    template <class F>
    static SampledFunction from(const Grid& g, F&& fn) {
        CVec v(g.count);
        for (int k = 0; k < g.count; ++k) v[k] = fn(g.x(k));
        return SampledFunction(g, std::move(v));
    }

    const Grid& grid() const { return grid_; }
    const CVec& values() const { return values_; }
    CVec& values() { return values_; }
    int size() const { return grid_.count; }
    cplx operator[](int k) const { return values_[k]; }
    cplx& operator[](int k) { return values_[k]; }

    SampledFunction& operator+=(const SampledFunction& o);
    SampledFunction& operator-=(const SampledFunction& o);
    SampledFunction& operator*=(cplx s);

private:
    Grid grid_;
    CVec values_;
};

SampledFunction operator+(SampledFunction a, const SampledFunction& b);
SampledFunction operator-(SampledFunction a, const SampledFunction& b);
SampledFunction operator*(cplx s, SampledFunction a);
/// Pointwise product.
SampledFunction pointwise(const SampledFunction& a, const SampledFunction& b);
SampledFunction conj(const SampledFunction& f);

/// In-place unnormalized DFT, sign -1 forward, +1 backward.
void dft_inplace(CVec& v, int sign);

/// Samples of the continuous transform on grid.frequencies().
SampledFunction fft_spectrum(const SampledFunction& f);
/// Inverse of fft_spectrum for a spectrum living on space.frequencies().
SampledFunction inverse_spectrum(const SampledFunction& spec, const Grid& space);
/// Multiply the spectrum by mask(xi) and transform back.
template <class M>
SampledFunction fourier_multiply(const SampledFunction& f, M&& mask) {
    SampledFunction s = fft_spectrum(f);
    const Grid& fg = s.grid();
    for (int m = 0; m < fg.count; ++m) s[m] *= mask(fg.x(m));
    return inverse_spectrum(s, f.grid());
}

cplx quad_integral(const SampledFunction& f);
double lp_norm(const SampledFunction& f, double p);
double lp_norm(std::span<const cplx> v, double p, double weight = 1.0);
cplx inner(const SampledFunction& f, const SampledFunction& g);

/// Band-limited trigonometric interpolant at x. Exact at grid points.
cplx evaluate_offgrid(const SampledFunction& f, double x);
CVec evaluate_offgrid(const SampledFunction& f, std::span<const double> xs);

nlohmann::json to_json(const Grid& g);
Grid grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SampledFunction& f);
SampledFunction sampled_from_json(const nlohmann::json& j);
nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j);

}  // namespace pwlab
