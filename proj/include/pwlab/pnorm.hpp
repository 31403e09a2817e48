#pragma once

#include <cstdint>
#include <functional>

#include "pwlab/kernels.hpp"

namespace pwlab {

struct NormBounds {
    double lower = 0.0;
    double upper = 0.0;
};

using LinearOp = std::function<VecC(const VecC&)>;

struct PowerOptions {
    std::uint64_t seed = 42;
    int restarts = 8;
    int max_iter = 200;
    double tol = 1e-12;
};

/// Lower bound for ||A||_{p->p} by the Boyd-Higham power method; A^H is the adjoint.
double pnorm_lower(const LinearOp& A, const LinearOp& AH, int n, double p,
                   const PowerOptions& opt = {});

/// Interpolation (Riesz-Thorin) upper bound; exact for p in {1, 2, inf}.
double pnorm_upper(const MatC& M, double p);

/// Bounds for ||M||_{p->p}; lower == upper == sigma_max at p = 2.
NormBounds matrix_pnorm(const MatC& M, double p, const PowerOptions& opt = {});

double spectral_norm(const MatC& M);

/// Conjugate exponent, q = p/(p-1), with 1 <-> inf.
double conjugate_exponent(double p);

}  // namespace pwlab
