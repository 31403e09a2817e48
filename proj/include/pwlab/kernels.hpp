#pragma once

// Data-parallel inner loops. Every kernel has a serial reference path and an
// OpenMP path; each output element is reduced in a fixed order, so both paths
// return bitwise-identical results.

#include <span>

#include <Eigen/Dense>

#include "pwlab/grid.hpp"

namespace pwlab {

using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

enum class Exec { serial, parallel };

/// Thread cap from PWLAB_THREADS (applied once); returns the active count.
int configure_threads();
Exec default_exec();

namespace kernels {

/// out[k] = sum_q w[q] exp(sign 2 pi i s[q] t[k])
void exp_sum(std::span<const double> s, std::span<const cplx> w,
             std::span<const double> t, double sign, std::span<cplx> out,
             Exec ex = default_exec());

/// Nyquist-basis Toeplitz matrix from the half-line moment functions
/// Phi_plus(t_k), Phi_minus(t_k) and the diagonal moments, nodes t_k = t0 + k/(2a).
MatC toeplitz_from_moments(std::span<const cplx> phi_plus,
                           std::span<const cplx> phi_minus,
                           std::span<const cplx> diag, double a,
                           Exec ex = default_exec());

/// Columns of A*B computed independently (dense complex product).
MatC matmul(const MatC& A, const MatC& B, Exec ex = default_exec());

}  // namespace kernels
}  // namespace pwlab
