#pragma once

#include "pwlab/split.hpp"

namespace pwlab {

/// Fourier data of b(-beta cot(t/2)) on the circle.
struct HankelData {
    double beta = 1.0;
    int M = 0;
    /// coeff(n) for n in [-2M, 2M], stored at index n + 2M.
    CVec disk_coeffs;
    /// Gamma_{jk} = coeff(-(j + k + 1)), 0 <= j, k < M.
    MatC hankel_matrix;
    /// max_{n >= M} |coeff(-n)| / max |coeff|
    double tail = 0.0;
    int circle_points = 0;

    cplx coeff(int n) const { return std::abs(n) > 2 * M ? cplx(0.0) : disk_coeffs[n + 2 * M]; }
    bool tail_certified() const { return tail <= 1e-8; }
};

/// Circle point exp(i t) for the line point x = -beta cot(t/2).
cplx line_to_circle(double x, double beta);

/// Coefficients by FFT on 16 M circle points (at least 4096); values beyond |x| = cutoff are 0.
HankelData line_to_disk(const Symbol& b, int M, double beta = 1.0, double cutoff = -1.0);
/// Trigonometric polynomial sum coeff(n) omega_beta(x)^n on the grid.
SampledFunction disk_to_line(const HankelData& h, const Grid& g);

struct AakResult {
    double sigma0 = 0.0;
    double sigma1 = 0.0;
    /// Schmidt pair: f = sum v_k z^k, g = sum w_j z^{-(j+1)}, Gamma v = sigma0 w.
    VecC v, w;
    int circle_points = 0;
    /// psi = sigma0 g / f on the circle grid exp(2 pi i m / circle_points).
    CVec psi_disk;
    /// Fourier coefficients of psi_disk, index n at (n mod circle_points).
    CVec psi_coeffs;
    /// max_{1<=n<=M} |psi_{-n} - coeff(-n)| / sigma0
    double moment_residual = 0.0;
    double sup_modulus = 0.0;
    int guarded_points = 0;
    int iterations = 0;
    double f_max = 0.0;

    cplx psi_coeff(int n) const;
    /// psi at a circle point by direct evaluation of the Schmidt pair.
    cplx eval(cplx z) const;
};

struct AakOptions {
    int max_iter = 20000;
    double tol = 1e-13;
    std::uint64_t seed = 42;
};
AakResult aak_solve(const HankelData& h, const AakOptions& opt = {});

/// ||H_b|| on L^2 by power iteration of P_+ conj(b) P_- b on a line grid.
double line_hankel_norm(const Symbol& b, const Grid& g, int iters = 400);

struct NehariResult {
    /// Bounded symbol with the Hankel part of b.
    SymbolPtr psi;
    SampledFunction samples;
    HankelData data;
    AakResult aak;
    double sup_norm = 0.0;
    double hankel_norm = 0.0;
    /// max |<(psi - b) f, g>| / (||f|| ||g||) over f in H^2_+, g in H^2_- test pairs.
    double pairing_residual = 0.0;
    bool zero_hankel = false;
    std::vector<std::string> warnings;
};

struct NehariOptions {
    int M = 256;
    int max_M = 2048;
    std::uint64_t seed = 42;
    int trials = 8;
};
/// Nehari solve for b = conj(theta_a)^2 phi with supp phi^ in [0, inf).
NehariResult nehari_solve(SymbolPtr b, double a, double p, const Grid& g, const NehariOptions& opt = {});

struct BoundedSymbolResult {
    SymbolPtr psi;
    SampledFunction samples;
    double sup_norm = 0.0;
    double operator_residual = 0.0;
    double t_phi = 0.0;
    double tolerance = 1e-3;
    /// sup_norm / ((p + 1/(p-1)) ||T_phi||)
    double ratio = 0.0;
    double split_constant = 0.0;
    SymbolPtr psi_l, phi_c, psi_r;
    NehariResult right, left;
    double p = 2.0;
    double a = 1.0;
    bool ok() const { return operator_residual <= tolerance * t_phi; }
};
BoundedSymbolResult bounded_symbol(SymbolPtr phi, double a, double p, const Grid& g, const Basis& b,
                                   const NehariOptions& opt = {});

nlohmann::json to_json(const NehariResult& r);
nlohmann::json to_json(const BoundedSymbolResult& r);

}  // namespace pwlab
