#include "pwlab/kernels.hpp"

#include <omp.h>

#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>

namespace pwlab {

int configure_threads() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (const char* env = std::getenv("PWLAB_THREADS")) {
            int n = std::atoi(env);
            if (n > 0) omp_set_num_threads(n);
        }
    });
    return omp_get_max_threads();
}

Exec default_exec() {
    configure_threads();
    return Exec::parallel;
}

namespace kernels {

namespace {

inline cplx exp_sum_one(std::span<const double> s, std::span<const cplx> w,
                        double tk, double sign) {
    cplx acc = 0.0;
    const double c = sign * 2.0 * pi * tk;
    for (size_t q = 0; q < s.size(); ++q) {
        const double ph = c * s[q];
        acc += w[q] * cplx(std::cos(ph), std::sin(ph));
    }
    return acc;
}

inline cplx toeplitz_entry(std::span<const cplx> pp, std::span<const cplx> pm,
                           std::span<const cplx> dg, double a, long j, long k) {
    if (j == k) return dg[j] / (2.0 * a);
    const long n = j - k;
    const double tau = n / (2.0 * a);
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    const cplx num = (pp[k] - pp[j]) + (pm[j] - pm[k]);
    return sgn * num / (2.0 * I * pi * tau) / (2.0 * a);
}

}  // namespace

void exp_sum(std::span<const double> s, std::span<const cplx> w,
             std::span<const double> t, double sign, std::span<cplx> out,
             Exec ex) {
    if (s.size() != w.size() || t.size() != out.size())
        throw std::invalid_argument("exp_sum: size mismatch");
    const long nt = static_cast<long>(t.size());
    if (ex == Exec::serial) {
        for (long k = 0; k < nt; ++k) out[k] = exp_sum_one(s, w, t[k], sign);
        return;
    }
#pragma omp parallel for schedule(static)
    for (long k = 0; k < nt; ++k) out[k] = exp_sum_one(s, w, t[k], sign);
}

MatC toeplitz_from_moments(std::span<const cplx> phi_plus,
                           std::span<const cplx> phi_minus,
                           std::span<const cplx> diag, double a, Exec ex) {
    const long n = static_cast<long>(diag.size());
    MatC M(n, n);
    if (ex == Exec::serial) {
        for (long k = 0; k < n; ++k)
            for (long j = 0; j < n; ++j)
                M(j, k) = toeplitz_entry(phi_plus, phi_minus, diag, a, j, k);
        return M;
    }
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n; ++k)
        for (long j = 0; j < n; ++j)
            M(j, k) = toeplitz_entry(phi_plus, phi_minus, diag, a, j, k);
    return M;
}

MatC matmul(const MatC& A, const MatC& B, Exec ex) {
    if (A.cols() != B.rows()) throw std::invalid_argument("matmul: shape mismatch");
    MatC C(A.rows(), B.cols());
    const long nc = B.cols();
    if (ex == Exec::serial) {
        for (long k = 0; k < nc; ++k) C.col(k).noalias() = A * B.col(k);
        return C;
    }
#pragma omp parallel for schedule(static)
    for (long k = 0; k < nc; ++k) C.col(k).noalias() = A * B.col(k);
    return C;
}

}  // namespace kernels
}  // namespace pwlab
