#pragma once

#include "pwlab/toeplitz.hpp"

namespace pwlab {

/// omega(z) = (z - i)/(z + i)
cplx omega(cplx z);

struct ConformalFrame {
    double a = 1.0;
    double p = 2.0;
    Grid grid;
    Basis basis;
    SampledFunction omega;
    /// (1/(2 pi i)) (theta_a(x) - e^{-4 pi a} conj(theta_a(x))) / (x - i)
    SampledFunction kernel;
    /// (x + i)^{2/p}
    SampledFunction sigma;
    /// alpha (-conj(h_i))^{2/p}, h_i the Cauchy kernel at i
    SampledFunction eta;
    /// ||kernel||_2^{-2} = 4 pi / (1 - e^{-8 pi a})
    double alpha = 0.0;
    /// Nyquist coefficients of the kernel on the basis window, and the energy outside it.
    VecC k;
    double k_tail2 = 0.0;
    VecC omega_nodes;
};

ConformalFrame build_frame(double a, double p, const Grid& g, const Basis& b);

struct Compatibility {
    bool flag = true;
    double defect = 0.0;
    double band_residual = 0.0;
};
Compatibility omega_compatible(const BandlimitedFunction& f, const ConformalFrame& fr);

/// f - <f, k> k / <k, k>, inner products on the grid.
BandlimitedFunction k_projector(const BandlimitedFunction& f, const ConformalFrame& fr);

struct CompressionOps {
    OperatorMatrix Lambda, LambdaBar;
};
CompressionOps lambda_ops(const ConformalFrame& fr);

/// Column j of T_omega at node m: omega(t_m) delta_mj + v_m conj(k_j), any m.
cplx lambda_outer(const ConformalFrame& fr, int m);
MatC lambda_structural(const ConformalFrame& fr);

/// ||(I - LambdaBar Lambda) - alpha k k^H||_2, rows outside the window included through
/// the rank-one structure of Lambda.
double defect_residual(const CompressionOps& ops, const ConformalFrame& fr);

struct CommutatorResult {
    bool is_toeplitz = true;
    double deviation = 0.0;
};
CommutatorResult commutator_test(const OperatorMatrix& T, const ConformalFrame& fr);

/// sum_{n=0}^{N} LambdaBar^n (T - LambdaBar T Lambda) Lambda^n
OperatorMatrix series_reconstruct(const OperatorMatrix& T, int N, const CompressionOps& ops);
/// Largest ||(S - T) e_j|| / ||T|| over interior basis vectors.
double series_residual(const OperatorMatrix& S, const OperatorMatrix& T);

struct RecoveredSymbol {
    /// phi and psi at the basis nodes; T = T_{conj(phi) + psi}.
    SampledFunction phi, psi;
    cplx constant = 0.0;
    OperatorMatrix reassembled;
    double round_trip = 0.0;
};
RecoveredSymbol recover_symbol(const OperatorMatrix& T, const ConformalFrame& fr, const CompressionOps& ops);

/// Toeplitz matrix from nodal values and derivatives of conj(phi) and psi.
MatC nodal_toeplitz(const CVec& phib, const CVec& dphib, const CVec& psi, const CVec& dpsi, double a);
/// Derivative at the nodes of the band-a interpolant of nodal samples, with 1/t tails
/// fitted at both window edges and summed beyond it.
CVec nodal_derivative(const CVec& g, const Basis& b);

/// Singular values (descending, normalized by the first) of the Gram matrix of projections
/// of n random analytic functions onto H^2 minus omega H^2.
std::vector<double> komega_gram_spectrum(const ConformalFrame& fr, int n, std::uint64_t seed = 42);

nlohmann::json to_json(const CommutatorResult& r);
nlohmann::json to_json(const RecoveredSymbol& r);

}  // namespace pwlab
