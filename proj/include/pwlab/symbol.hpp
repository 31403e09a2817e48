#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "pwlab/grid.hpp"

namespace pwlab {

/// Point mass of the spectrum: the symbol term w * x^order * exp(2 pi i s x).
struct PointMass {
    double s = 0.0;
    cplx w = 0.0;
    int order = 0;
};

/// A symbol phi on the line, known through its values and its spectrum
/// phi^ = density + point masses.
class Symbol {
public:
    virtual ~Symbol() = default;

    virtual void values(std::span<const double> x, std::span<cplx> out) const = 0;
    /// Absolutely continuous part of the spectrum.
    virtual void density(std::span<const double> s, std::span<cplx> out) const = 0;
    virtual std::vector<PointMass> masses() const { return {}; }
    /// Closed interval containing the support of the density.
    virtual std::pair<double, double> hull() const = 0;
    /// Points where the density is not smooth.
    virtual std::vector<double> breakpoints() const { return {}; }
    /// Spatial radius (about the origin) beyond which phi is negligible or oscillation-free.
    virtual double extent() const = 0;

    cplx value(double x) const;
    std::vector<cplx> values(std::span<const double> x) const;
    SampledFunction sample(const Grid& g) const;
    /// Largest |phi| on the grid.
    double sup_norm(const Grid& g) const;
    bool has_density() const { return hull().second > hull().first; }
};

using SymbolPtr = std::shared_ptr<const Symbol>;

/// amp * exp(-beta (x - center)^2) * exp(2 pi i freq x)
SymbolPtr gaussian(cplx amp, double beta, double center = 0.0, double freq = 0.0);
/// amp * x^n * exp(2 pi i freq x)
SymbolPtr mod_poly(int n, double freq, cplx amp = 1.0);
/// amp * sinc_b(x - center)^2 * exp(2 pi i freq x); triangular spectrum of width 4b
SymbolPtr fejer(cplx amp, double b, double center = 0.0, double freq = 0.0);
/// Trigonometric-polynomial reading of samples: phi^(s) = step * sum phi_k e^{-2 pi i s x_k}
SymbolPtr sampled(const SampledFunction& f);
/// sum_n c_n omega_beta^n with omega_beta(x) = (x - i beta)/(x + i beta), negative n meaning conj
SymbolPtr omega_series(double beta, std::vector<std::pair<int, cplx>> coeffs, double extent = -1.0,
                       std::function<cplx(double)> closed_form = {});
/// F^{-1}[m(s) phi^(s)] for a smooth multiplier supported in [lo, hi]
SymbolPtr filtered(SymbolPtr child, std::function<double(double)> m, double lo, double hi);
/// exp(2 pi i c x) * phi
SymbolPtr modulated(SymbolPtr child, double c);
/// phi(-x)
SymbolPtr reflected(SymbolPtr child);
SymbolPtr sum(std::vector<std::pair<cplx, SymbolPtr>> terms);
SymbolPtr zero_symbol();

/// Density of omega_beta^n (n >= 1) at s > 0: -4 pi beta e^{-2 pi beta s} L^(1)_{n-1}(4 pi beta s).
double omega_power_density(int n, double beta, double s);
/// sum_{n>=1} c[n-1] * omega_power_density(n, beta, s), stable for large n.
cplx omega_combined_density(std::span<const cplx> c, double beta, double s);

/// Parse {"gaussian": {...}}, {"mod_poly": {...}}, {"fejer": {...}}, {"sampled": {...}},
/// {"omega": {...}}, {"sum": [...]}, {"modulated": {...}}; optional "spectral_support": [lo, hi].
SymbolPtr symbol_from_json(const nlohmann::json& j);

}  // namespace pwlab
