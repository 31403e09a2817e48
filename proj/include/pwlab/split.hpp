#pragma once

#include "pwlab/toeplitz.hpp"

namespace pwlab {

enum class Part { L, C, R };

/// C-infinity smooth step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u);
/// Bump triple psi_L, psi_C, psi_R (unscaled).
double bump(double x, Part which);
/// Support of psi_X scaled by a.
std::pair<double, double> bump_support(Part which, double a);

/// ||F^{-1} psi_{X,a}||_{L^1}.
double bump_l1(Part which, double a);
/// Largest |t|^6 |F^{-1} psi_X (t)| for |t| in [lo, hi] (decay proxy).
double bump_decay_profile(Part which, double lo, double hi);

struct SplitResult {
    SymbolPtr left, central, right;
    double l1_left = 0.0, l1_central = 0.0, l1_right = 0.0;
    /// Relative spectral energy of each part outside its bump support.
    double cert_left = 0.0, cert_central = 0.0, cert_right = 0.0;
    /// max over [-2a, 2a] of |sum of part spectra - phi^| / max |phi^|.
    double partition_residual = 0.0;
    bool schwartz_warning = false;
    double constant() const { return l1_left + l1_central + l1_right; }
};

SplitResult split_symbol(SymbolPtr phi, double a, const Grid& g);

/// ||T_X|| <= ||psi_X^||_1 ||T_phi|| for the three parts.
struct JensenReport {
    double t_phi = 0.0;
    double t_part[3] = {0.0, 0.0, 0.0};
    double l1[3] = {0.0, 0.0, 0.0};
    double constant = 0.0;
    bool holds = true;
};
JensenReport jensen_certificate(SymbolPtr phi, double a, double p, const Basis& b, const Grid& g);

/// (1/(2 eps)) (T_C[sinc_eps(. - x)])(x), eps = a/8.
cplx central_recover(const GridOperator& tc, double a, double x, const Grid& g);

struct SincNormConstant {
    double product = 0.0;
    double bound = 0.0;
    bool holds() const { return product <= bound; }
};
/// ||sinc_1||_q ||sinc_{1/8}||_p against (4/pi)(p + 1/(p-1)).
SincNormConstant sinc_norm_constant(double p);
/// ||sinc_b||_{L^p(R)} by per-lobe Gauss quadrature plus a mean-value tail.
double sinc_lp_norm(double b, double p);

}  // namespace pwlab
