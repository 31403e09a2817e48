#pragma once

#include <functional>
#include <optional>

#include "pwlab/kernels.hpp"
#include "pwlab/pnorm.hpp"
#include "pwlab/pwspace.hpp"
#include "pwlab/symbol.hpp"

namespace pwlab {

/// Nyquist basis e_k = sinc_a(. - t_k)/sqrt(2a), t_k = k/(2a), k in [k0, k0 + count).
struct Basis {
    double a = 1.0;
    int k0 = 0;
    int count = 0;
    double window = 0.0;  // half-length of [-window, window)
    double edge = 0.1;    // fraction excluded at each end for certification

    /// Nodes covering [-half, half).
    static Basis centered(double a, double half, double edge = 0.1);
    double node(int k) const { return (k0 + k) / (2.0 * a); }
    std::vector<double> nodes() const;
    bool interior(int k) const;
    std::vector<int> interior_indices() const;
    /// Samples of e_k on g, periodized over the window of g.
    SampledFunction element(int k, const Grid& g) const;
};

struct OperatorMatrix {
    MatC entries;
    double a = 1.0;
    double p = 2.0;
    Basis basis;
};

nlohmann::json to_json(const Basis& b);
Basis basis_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OperatorMatrix& m);
OperatorMatrix operator_from_json(const nlohmann::json& j);

/// Working grid for band a: window [-half, half), oversampled 8x against the band.
Grid default_grid(double a, double half = 64.0, double oversample = 8.0);
/// default_grid shortened by 1/(2a) so that 2aL is odd. On it the periodic Nyquist basis is
/// orthonormal and interpolating at once, and assemble_matrix of a self-adjoint operator is Hermitian.
Grid assembly_grid(double a, double half = 64.0, double oversample = 8.0);

/// Matrix of T_phi in the Nyquist basis from the spectrum of phi (exact formula, quadrature
/// of the density on [-2a, 2a]).
MatC toeplitz_matrix(const Symbol& phi, const Basis& b, Exec ex = default_exec());
OperatorMatrix assemble_toeplitz(const Symbol& phi, const Basis& b, double p);

/// Column k holds apply(e_k) sampled at the nodes, divided by sqrt(2a).
using GridOperator = std::function<SampledFunction(const SampledFunction&)>;
OperatorMatrix assemble_matrix(const GridOperator& apply, const Basis& b, double p, const Grid& g);

/// P_a[phi f] on the grid of f.
BandlimitedFunction toeplitz_apply(const Symbol& phi, const BandlimitedFunction& f);
/// P_-[phi f] for f with spectrum in the closed right half-line.
SampledFunction hankel_apply(const Symbol& phi, const SampledFunction& f);

/// Operator p-norm bounds of a basis matrix (Plancherel-Polya proxy).
NormBounds operator_pnorm(const OperatorMatrix& M, std::optional<bool> interior_only = {});

/// Max relative residuals of the projector identities on seeded random inputs.
struct IdentityReport {
    double band_decomposition = 0.0;  // P_a = conj(theta_a) P_+ theta_a - theta_a P_+ conj(theta_a)
    double band_decomposition_literal = 0.0;  // with conj(theta_a)^2 ... theta_a^2 in the first term
    double band_chain = 0.0;                  // P_a = theta_a P_- conj(theta_a)^2 P_+ theta_a
    double hankel_factor = 0.0;               // H_{conj(theta_a)^2 phi} = conj(theta_a) T_phi theta_a P_- conj(theta_a)^2
};
IdentityReport identity_residuals(double a, double p, std::uint64_t seed = 42, int trials = 10);

/// Relative L2 distance of two grid functions, ignoring the listed frequency bins
/// (where half-line and band indicators differ on a null set).
double spectral_residual(const SampledFunction& lhs, const SampledFunction& rhs,
                         const std::vector<double>& null_bins);

/// Seeded random smooth function with spectrum inside [lo, hi].
SampledFunction random_smooth(const Grid& g, std::uint64_t seed, double lo, double hi, int terms = 12);

}  // namespace pwlab
