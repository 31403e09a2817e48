#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pwlab/toeplitz.hpp"

using namespace pwlab;

namespace {

const double a = 1.0;

// sinc_{a/8}^8: band a, decays like |x|^-8
BandlimitedFunction fast_member(const Grid& g, double shift = 0.0) {
    BandlimitedFunction f;
    f.f = SampledFunction::from(g, [shift](double x) { return cplx(std::pow(sinc(a / 8.0, x - shift) * 4.0, 8)); });
    f.a = a;
    f.residual = band_residual(f.f, a);
    return f;
}

GridOperator toeplitz_op(SymbolPtr phi) {
    return [phi](const SampledFunction& f) {
        BandlimitedFunction b;
        b.f = f;
        b.a = a;
        return toeplitz_apply(*phi, b).f;
    };
}

}  // namespace

TEST_CASE("toeplitz_apply") {
    const Grid g = default_grid(a);
    const auto f = fast_member(g, 0.4);
    CHECK(f.residual <= 1e-10);
    CHECK(lp_norm(toeplitz_apply(*mod_poly(0, 0.0), f).f - f.f, INFINITY) <= 1e-12 * lp_norm(f.f, INFINITY));
    CHECK(lp_norm(toeplitz_apply(*mod_poly(1, 2.0 * a), f).f, 2.0) <= 1e-8 * lp_norm(f.f, 2.0));
    for (double c : {-3.5, 4.0}) {
        const auto phi = fejer(cplx(0.3, 1.0), 0.25, 0.7, c * a);
        CHECK(lp_norm(toeplitz_apply(*phi, f).f, 2.0) <= 1e-8 * lp_norm(f.f, 2.0));
    }
    BandlimitedFunction coarse = fast_member(Grid::window(-32.0, 32.0, 0.25));
    CHECK_THROWS(toeplitz_apply(*gaussian(1.0, 1.0, 0.0, 3.0), coarse));
}

TEST_CASE("hankel_apply") {
    const Grid g = default_grid(a);
    const auto f = project_halfline(random_smooth(g, 3, 0.0, 3.0 * a), +1);
    CHECK(lp_norm(hankel_apply(*gaussian(1.0, 1.0, 0.0, 3.0), f), 2.0) <= 1e-8 * lp_norm(f, 2.0));
    CHECK(lp_norm(hankel_apply(*gaussian(1.0, 1.0), SampledFunction(g)), INFINITY) == 0.0);
    CHECK_THROWS(hankel_apply(*gaussian(1.0, 1.0), random_smooth(g, 4, -2.0, 2.0)));
}

TEST_CASE("operator identities") {
    const IdentityReport r = identity_residuals(a, 2.0);
    CHECK(r.band_decomposition <= 1e-8);
    CHECK(r.band_chain <= 1e-8);
    CHECK(r.hankel_factor <= 1e-6);
}

TEST_CASE("assemble_matrix") {
    const Grid g = assembly_grid(a);
    const Basis b = Basis::centered(a, 16.0);
    const auto id = assemble_matrix([](const SampledFunction& f) { return f; }, b, 2.0, g);
    CHECK((id.entries - MatC::Identity(b.count, b.count)).cwiseAbs().maxCoeff() <= 1e-10);

    const auto T = assemble_matrix(toeplitz_op(gaussian(1.0, 1.0)), b, 2.0, g);
    CHECK((T.entries - T.entries.adjoint()).cwiseAbs().maxCoeff() <= 1e-8);
    // brute-force inner products against the basis
    const auto ej = b.element(5, g), ek = b.element(9, g);
    BandlimitedFunction bk;
    bk.f = ek;
    bk.a = a;
    const cplx ip = inner(toeplitz_apply(*gaussian(1.0, 1.0), bk).f, ej);
    CHECK(std::abs(ip - T.entries(5, 9)) <= 1e-12);

    const auto Z = assemble_toeplitz(*mod_poly(1, 2.0 * a), b, 2.0);
    CHECK(matrix_pnorm(Z.entries, 2.0).upper <= 1e-8);

    Basis tiny = b;
    tiny.count = 4;
    CHECK_THROWS(basis_from_json(to_json(tiny)));
    CHECK_THROWS(assemble_matrix(toeplitz_op(gaussian(1.0, 1.0)), Basis::centered(a, 100.0), 2.0, g));
}

TEST_CASE("spectral assembly agrees with the grid assembly") {
    const Grid g = assembly_grid(a);
    const Basis b = Basis::centered(a, 16.0);
    const auto phi = gaussian(cplx(1.0, 0.5), 0.7, 0.3, 0.4);
    const MatC S = toeplitz_matrix(*phi, b);
    const MatC G = assemble_matrix(toeplitz_op(phi), b, 2.0, g).entries;
    double worst = 0.0;
    for (int j : b.interior_indices())
        for (int k : b.interior_indices()) worst = std::max(worst, std::abs(S(j, k) - G(j, k)));
    CHECK(worst <= 1e-3);
}

// on an even-length period the band edge bin breaks the symmetry at order 1/L
TEST_CASE("assemble_matrix on the default grid" * doctest::may_fail()) {
    const auto T = assemble_matrix(toeplitz_op(gaussian(1.0, 1.0)), Basis::centered(a, 16.0), 2.0, default_grid(a));
    CHECK((T.entries - T.entries.adjoint()).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("matrix_pnorm") {
    for (double p : {1.0, 1.5, 2.0, 3.0, double(INFINITY)}) {
        const NormBounds nb = matrix_pnorm(MatC::Identity(12, 12), p);
        CHECK(nb.lower == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(nb.upper == doctest::Approx(1.0).epsilon(1e-12));
    }
    MatC D = MatC::Identity(10, 10);
    D(0, 0) = 3.0;
    CHECK(std::abs(matrix_pnorm(D, 2.0).lower - 3.0) <= 1e-10);
    CHECK_THROWS(matrix_pnorm(D, 0.5));

    std::mt19937_64 rng(42);
    std::normal_distribution<double> n(0.0, 1.0);
    MatC M(16, 16);
    for (int j = 0; j < 16; ++j)
        for (int k = 0; k < 16; ++k) M(j, k) = cplx(n(rng), n(rng));
    const double p = 3.0;
    const NormBounds nb = matrix_pnorm(M, p);
    double brute = 0.0;
    for (int t = 0; t < 100000; ++t) {
        VecC x(16);
        for (int k = 0; k < 16; ++k) x[k] = cplx(n(rng), n(rng));
        const VecC y = M * x;
        auto lp = [p](const VecC& v) {
            double s = 0.0;
            for (const auto& c : v) s += std::pow(std::abs(c), p);
            return std::pow(s, 1.0 / p);
        };
        brute = std::max(brute, lp(y) / lp(x));
    }
    CHECK(nb.lower <= nb.upper);
    CHECK(brute <= nb.upper);
    CHECK(nb.lower >= brute);
    // duality
    const double q = conjugate_exponent(p);
    CHECK(std::abs(matrix_pnorm(M.adjoint(), q).lower - nb.lower) <= 0.05 * nb.lower);
}

TEST_CASE("toeplitz norm properties") {
    const Basis b = Basis::centered(a, 32.0);
    const Grid fine = Grid::window(-32.0, 32.0, 1.0 / 128.0);
    for (const auto& phi : {gaussian(1.0, 1.0), gaussian(cplx(0.0, 2.0), 0.5, 1.0, 0.8), fejer(1.0, 0.6, -0.5)})
        CHECK(spectral_norm(toeplitz_matrix(*phi, b)) <= phi->sup_norm(fine) * (1.0 + 1e-3));

    const auto phi = gaussian(1.0, 1.0, 0.0, 0.3);
    const auto phi2 = sum({{1.0, phi}, {1.0, fejer(cplx(2.0, 1.0), 0.3, 1.0, 3.5 * a)}});
    CHECK((toeplitz_matrix(*phi, b) - toeplitz_matrix(*phi2, b)).cwiseAbs().maxCoeff() <= 1e-8);

    // real symbols with spectrum inside [-2a, 2a]
    for (const auto& s : {fejer(1.0, 0.5), sum({{1.0, fejer(1.0, 0.3, 0.0, 1.0)}, {1.0, fejer(1.0, 0.3, 0.0, -1.0)}})}) {
        const double r = spectral_norm(toeplitz_matrix(*s, b)) / s->sup_norm(fine);
        CHECK(r >= 0.95 / 3.0);
        CHECK(r <= 1.001);
    }
}

TEST_CASE("operator json") {
    const Basis b = Basis::centered(a, 8.0);
    const auto T = assemble_toeplitz(*gaussian(1.0, 1.0), b, 2.0);
    const auto back = operator_from_json(to_json(T));
    CHECK((back.entries - T.entries).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.basis.count == b.count);
    auto j = to_json(T);
    j.erase("entries");
    CHECK_THROWS(operator_from_json(j));
}

TEST_CASE("symbol json") {
    const auto s = symbol_from_json(nlohmann::json::parse(R"({"mod_poly": {"n": 1, "freq": 2.0}})"));
    CHECK(std::abs(s->value(0.25) - 0.25 * std::exp(2.0 * pi * I * 0.5)) <= 1e-15);
    CHECK_THROWS(symbol_from_json(nlohmann::json::parse(R"({"gaussian": {"beta": "x"}})")));
    CHECK_THROWS(symbol_from_json(nlohmann::json::parse(R"({"spline": {}})")));
    CHECK_THROWS(symbol_from_json(
        nlohmann::json::parse(R"({"fejer": {"b": 0.5, "freq": 3.0}, "spectral_support": [-1.0, 1.0]})")));
}
