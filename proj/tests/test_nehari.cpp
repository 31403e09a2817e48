#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pwlab/nehari.hpp"

using namespace pwlab;

namespace {

const double a = 1.0;

double offmax(const HankelData& h, int keep) {
    double m = 0.0;
    for (int n = -2 * h.M; n <= 2 * h.M; ++n)
        if (n != keep) m = std::max(m, std::abs(h.coeff(n)));
    return m;
}

SymbolPtr decaying_omega(std::uint64_t seed, int terms) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<std::pair<int, cplx>> c;
    for (int k = 1; k <= terms; ++k) c.emplace_back(-k, cplx(n(rng), n(rng)) * std::pow(0.5, k));
    return omega_series(1.0, std::move(c));
}

}  // namespace

TEST_CASE("line to disk transfer") {
    const HankelData one = line_to_disk(*mod_poly(0, 0.0), 32);
    CHECK(std::abs(one.coeff(0) - 1.0) <= 1e-12);
    CHECK(offmax(one, 0) <= 1e-10);

    const HankelData w = line_to_disk(*omega_series(1.0, {{-1, 1.0}}), 32);
    CHECK(std::abs(w.coeff(-1) - 1.0) <= 1e-12);
    CHECK(offmax(w, -1) <= 1e-10);
    CHECK(w.tail_certified());

    const HankelData h = line_to_disk(*decaying_omega(3, 12), 64);
    for (int j = 0; j < h.M; ++j)
        for (int k = 0; k < h.M; ++k) {
            if (j + 1 < h.M && k > 0) CHECK_MESSAGE(h.hankel_matrix(j, k) == h.hankel_matrix(j + 1, k - 1), j << "," << k);
            if (j == 3 && k == 5) CHECK(h.hankel_matrix(j, k) == h.coeff(-9));
        }
    CHECK(std::abs(line_to_circle(0.0, 1.0) - cplx(-1.0, 0.0)) <= 1e-15);
}

TEST_CASE("disk round trip") {
    const Grid g = Grid::window(-16.0, 16.0, 1.0 / 8.0);
    const auto b = sum({{1.0, decaying_omega(5, 10)}, {0.5, omega_series(2.0, {{2, cplx(0.0, 1.0)}})}});
    const HankelData h = line_to_disk(*b, 128, 1.0);
    const auto back = disk_to_line(h, g);
    double err = 0.0;
    for (int k = g.count / 8; k < 7 * g.count / 8; ++k) err = std::max(err, std::abs(back[k] - b->value(g.x(k))));
    CHECK(err <= 1e-8);
}

TEST_CASE("aak on a rank-one hankel") {
    const HankelData h = line_to_disk(*omega_series(1.0, {{-1, 1.0}}), 32);
    const AakResult r = aak_solve(h);
    CHECK(std::abs(r.sigma0 - 1.0) <= 1e-10);
    double dev = 0.0;
    for (const auto& v : r.psi_disk) dev = std::max(dev, std::abs(std::abs(v) - 1.0));
    CHECK(dev <= 5e-2);
    CHECK(r.moment_residual <= 1e-6);
}

TEST_CASE("aak on a zero hankel") {
    const HankelData h = line_to_disk(*omega_series(1.0, {{0, 1.0}, {2, 0.5}}), 32);
    const AakResult r = aak_solve(h);
    CHECK(r.sigma0 <= 1e-12);
    for (int n = 1; n <= 32; ++n) CHECK(std::abs(r.psi_coeff(-n)) <= 1e-12);
}

TEST_CASE("aak on random decaying coefficients") {
    for (std::uint64_t seed : {11, 12, 13}) {
        const HankelData h = line_to_disk(*decaying_omega(seed, 20), 64);
        const AakResult r = aak_solve(h);
        const Eigen::JacobiSVD<MatC> svd(h.hankel_matrix);
        CHECK(std::abs(r.sigma0 - svd.singularValues()[0]) <= 1e-10 * r.sigma0);
        CHECK(r.sup_modulus <= 1.05 * r.sigma0);
        CHECK(r.moment_residual <= 1e-6);
    }
}

TEST_CASE("truncation monotonicity") {
    const auto b = decaying_omega(21, 40);
    double prev = 0.0;
    for (int M : {8, 16, 32, 64, 128}) {
        const double s = aak_solve(line_to_disk(*b, M)).sigma0;
        CHECK(s >= prev - 1e-8);
        prev = s;
    }
}

TEST_CASE("nehari on the right part of a gaussian") {
    const Grid g = default_grid(a);
    const SplitResult s = split_symbol(gaussian(1.0, 1.0), a, g);
    const SymbolPtr b = modulated(s.right, -2.0 * a);
    const NehariResult r = nehari_solve(b, a, 2.0, g);
    CHECK_FALSE(r.zero_hankel);
    CHECK(r.data.tail_certified());
    CHECK(r.pairing_residual <= 1e-5);
    CHECK(r.aak.moment_residual <= 1e-6);
    CHECK(r.sup_norm <= 1.05 * r.aak.sigma0);
    CHECK(r.sup_norm <= b->sup_norm(g) * 1.05);
    CHECK(std::abs(r.aak.sigma0 - r.hankel_norm) <= 0.05 * r.hankel_norm);
}

TEST_CASE("nehari with no hankel part") {
    const Grid g = default_grid(a);
    // spectrum [2.5a, 3.5a]; after conj(theta)^2 it sits in [0.5a, 1.5a]
    const SymbolPtr b = modulated(fejer(1.0, 0.25 * a, 0.0, 3.0 * a), -2.0 * a);
    const NehariResult r = nehari_solve(b, a, 2.0, g);
    CHECK(r.zero_hankel);
    CHECK(r.sup_norm == 0.0);
}

TEST_CASE("nehari preconditions") {
    const Grid g = default_grid(a);
    CHECK_THROWS(nehari_solve(gaussian(1.0, 1.0, 0.0, -3.0 * a), a, 2.0, g));
    CHECK_THROWS(nehari_solve(modulated(fejer(1.0, 0.25, 0.0, 3.0), -2.0), a, 1.0, g));
}

TEST_CASE("bounded symbol, narrow spectrum") {
    const Grid g = default_grid(a);
    const Basis b = Basis::centered(a, 32.0);
    const auto phi = gaussian(cplx(0.8, 0.3), 0.01, -0.5);
    const BoundedSymbolResult r = bounded_symbol(phi, a, 2.0, g, b);
    CHECK(r.operator_residual <= 1e-8 * r.t_phi);
    CHECK(lp_norm(r.samples - phi->sample(g), INFINITY) <= 1e-8);
}

TEST_CASE("bounded symbol, zero operator") {
    const Grid g = default_grid(a);
    const Basis b = Basis::centered(a, 32.0);
    const BoundedSymbolResult r = bounded_symbol(mod_poly(1, 2.0 * a), a, 2.0, g, b);
    CHECK(r.t_phi <= 1e-8);
    CHECK(r.sup_norm <= 1e-8);
}

TEST_CASE("bounded symbol of a gaussian") {
    const Grid g = default_grid(a);
    const Basis b = Basis::centered(a, 32.0);
    const BoundedSymbolResult r = bounded_symbol(gaussian(1.0, 1.0), a, 2.0, g, b);
    CHECK(r.ok());
    CHECK(r.operator_residual <= 1e-3 * r.t_phi);
    CHECK(r.sup_norm >= r.t_phi * (1.0 - 1e-3));
    CHECK(r.sup_norm <= 3.0 * r.t_phi * 1.05);
    CHECK(r.sup_norm == lp_norm(r.samples, INFINITY));
    const auto j = to_json(r);
    CHECK(j.contains("sup_norm"));
}
