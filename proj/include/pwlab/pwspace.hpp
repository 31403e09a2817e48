#pragma once

#include "pwlab/grid.hpp"

namespace pwlab {

/// Band radius a > 0.
struct Band {
    double a;
    explicit Band(double a_);
};

/// Samples certified to have spectrum inside [-a, a].
struct BandlimitedFunction {
    SampledFunction f;
    double a = 1.0;
    double p = 2.0;
    double residual = 0.0;  // band_residual of f against a
};

double sinc(double a, double x);
cplx sinc(double a, cplx z);
/// x -> sin(2 pi a (x - t)) / (pi (x - t)), value 2a at x = t.
SampledFunction sinc_kernel(double a, double t, const Grid& g);
/// Shifted sinc made a grid member of PW_a (projected onto the band).
BandlimitedFunction sinc_member(double a, double t, const Grid& g, double p = 2.0);

/// P_a by exact indicator multiplication on the frequency grid (closed at +-a).
BandlimitedFunction project_band(const SampledFunction& f, double a, double p = 2.0);
/// P_+ (sign > 0, xi >= 0) or P_- = I - P_+ (sign < 0).
SampledFunction project_halfline(const SampledFunction& f, int sign);
/// Pointwise product with exp(2 pi i a x).
SampledFunction modulate(const SampledFunction& f, double a);
cplx theta(double a, cplx z);

/// Spectral energy outside [-a, a] over total energy (0 for the zero function).
double band_residual(const SampledFunction& f, double a);
/// Spectral energy on the negative half-line over total energy.
double halfline_residual(const SampledFunction& f);

/// f(z) = integral of sinc_a(z - y) f(y) dy with the window-periodized kernel.
cplx eval_functional(const BandlimitedFunction& f, cplx z);
/// Same integral with the plain sinc kernel truncated to the window.
cplx eval_functional_direct(const SampledFunction& f, double a, cplx z);

/// Lower estimate of ||P_+||_{p->p} on the grid.
double riesz_constant_estimate(double p, const Grid& g);
/// Lower estimate of ||P_a||_{p->p} on the grid.
double band_projector_norm_estimate(double a, double p, const Grid& g);

/// h_z(x) = (1/2 pi i) / (conj(z) - x), Im z > 0.
SampledFunction cauchy_kernel(cplx z, const Grid& g);

/// Exponential inner function theta_b(z) = exp(2 pi i b z), b > 0.
struct InnerExp {
    double b;
};
InnerExp inner_from_json(const nlohmann::json& j);

/// k_{theta,z}(x) = (1/2 pi i)(1 - conj(theta(z)) theta(x)) / (conj(z) - x)
SampledFunction repro_kernel(const InnerExp& th, cplx z, const Grid& g);
/// conjugate kernel (1/2 pi i)(theta(x) - theta(z)) / (x - z)
SampledFunction conj_kernel(const InnerExp& th, cplx z, const Grid& g);

}  // namespace pwlab
