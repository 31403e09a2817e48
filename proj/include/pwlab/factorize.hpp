#pragma once

#include "pwlab/toeplitz.hpp"

namespace pwlab {

struct FejerAtomPlan {
    double spacing = 0.0;
    double margin = 0.0;
    std::vector<double> centers;
    CVec weights;
    /// max |w(t_k)| (1 + t_k^2), t_k measured from the window center
    double decay_constant = 0.0;
};

struct FactorPair {
    BandlimitedFunction f, g;
};

struct Factorization {
    std::vector<FactorPair> pairs;
    double nuclear_sum = 0.0;
    double residual_l1 = 0.0;
    double residual_sup = 0.0;
    /// residual_sup > 1e-6 ||h||_sup or residual_l1 > 1e-5 ||h||_1
    bool truncation_flag = false;
    bool passthrough = false;
    double a = 1.0;
    double p = 2.0;
    FejerAtomPlan plan;
};

/// w with w * sinc_a^2 = h, h at band 2b, b < a. margin < 0 takes b = h.a / 2.
SampledFunction fejer_deconvolve(const BandlimitedFunction& h, double a, double margin = -1.0);

struct FactorizeOptions {
    double margin = -1.0;
    /// atom spacing; < 0 picks the largest power-of-two multiple of the grid step allowed
    double spacing = -1.0;
};
Factorization weak_factorize(const BandlimitedFunction& h, double a, double p, const FactorizeOptions& opt = {});

/// sum_k <T f_k, g_k>, f_k and g_k taken through their Nyquist coefficients on T's basis.
cplx pair(const OperatorMatrix& T, const Factorization& F);

/// Largest |<T f_k, g_k>| / (||T|| ||f_k||_p ||g_k||_q) over the pairs, norms of the Nyquist coefficients.
double holder_ratio(const OperatorMatrix& T, const Factorization& F);

/// Seeded Schwartz-symbol Toeplitz operators of unit norm; the first is the identity.
std::vector<OperatorMatrix> xpq_test_set(double a, double p, const Basis& b, int n, std::uint64_t seed = 42);

struct XpqEstimate {
    double estimate = 0.0;
    double l1 = 0.0;
    double nuclear_sum = 0.0;
    bool sandwich = true;
};
XpqEstimate xpq_norm_estimate(const BandlimitedFunction& h, double a, double p,
                              const std::vector<OperatorMatrix>& test_set, const FactorizeOptions& opt = {});

nlohmann::json to_json(const Factorization& F, bool summary = false);
nlohmann::json to_json(const XpqEstimate& x);

}  // namespace pwlab
