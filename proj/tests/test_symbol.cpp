#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pwlab/pwspace.hpp"
#include "pwlab/symbol.hpp"

using namespace pwlab;

namespace {

cplx density_at(const Symbol& s, double xi) {
    cplx out;
    const double x[1] = {xi};
    s.density(std::span<const double>(x, 1), std::span<cplx>(&out, 1));
    return out;
}

// spectrum of the samples against the density on the frequency grid
double spectrum_mismatch(const Symbol& s, const Grid& g) {
    const auto spec = fft_spectrum(s.sample(g));
    double err = 0.0;
    for (int m = 0; m < spec.size(); ++m) err = std::max(err, std::abs(spec[m] - density_at(s, spec.grid().x(m))));
    return err;
}

}  // namespace

TEST_CASE("gaussian") {
    const auto s = gaussian(cplx(0.5, -1.0), 0.7, 0.4, 1.3);
    const double x = -0.9;
    CHECK(std::abs(s->value(x) - cplx(0.5, -1.0) * std::exp(-0.7 * 1.69) * std::exp(2.0 * pi * I * 1.3 * x)) <= 1e-15);
    CHECK(spectrum_mismatch(*s, Grid::window(-32.0, 32.0, 1.0 / 32.0)) <= 1e-10);
    const auto [l, r] = s->hull();
    CHECK(l < 1.3);
    CHECK(r > 1.3);
    CHECK(std::abs(density_at(*s, r)) <= 1e-15);
    CHECK_THROWS(gaussian(1.0, 0.0));
}

TEST_CASE("fejer") {
    const double b = 0.6;
    const auto s = fejer(1.0, b);
    CHECK(std::abs(s->value(0.0) - 4.0 * b * b) <= 1e-12);
    for (double xi : {-2.0 * b, -b, 0.0, 0.3, 2.0 * b, 2.5 * b})
        CHECK(std::abs(density_at(*s, xi) - std::max(0.0, 2.0 * b - std::abs(xi))) <= 1e-12);
    CHECK(s->hull().first == doctest::Approx(-2.0 * b));
    CHECK(s->hull().second == doctest::Approx(2.0 * b));
    const auto m = fejer(1.0, b, 0.0, 3.0);
    CHECK(std::abs(density_at(*m, 3.0) - 2.0 * b) <= 1e-12);
}

TEST_CASE("polynomial symbols are point masses") {
    const auto s = mod_poly(1, 2.0, cplx(0.0, 3.0));
    CHECK(std::abs(s->value(1.5) - cplx(0.0, 3.0) * 1.5 * std::exp(2.0 * pi * I * 3.0)) <= 1e-13);
    CHECK_FALSE(s->has_density());
    const auto pm = s->masses();
    REQUIRE(pm.size() == 1);
    CHECK(pm[0].s == 2.0);
    CHECK(pm[0].order == 1);
}

TEST_CASE("sampled symbols") {
    const Grid g = Grid::window(-8.0, 8.0, 1.0 / 8.0);
    const auto f = SampledFunction::from(g, [](double x) { return cplx(std::exp(-x * x), std::sin(x) * std::exp(-x * x)); });
    const auto s = sampled(f);
    for (int k : {0, 31, 64, 100}) CHECK(std::abs(s->value(g.x(k)) - f[k]) <= 1e-12);
    const auto spec = fft_spectrum(f);
    double err = 0.0;
    for (int m = 0; m < spec.size(); m += 7) err = std::max(err, std::abs(spec[m] - density_at(*s, spec.grid().x(m))));
    CHECK(err <= 1e-12);
}

TEST_CASE("omega power densities") {
    const double beta = 0.8;
    for (double s : {0.1, 0.5, 2.0}) {
        const double e = std::exp(-2.0 * pi * beta * s);
        CHECK(std::abs(omega_power_density(1, beta, s) + 4.0 * pi * beta * e) <= 1e-13);
        CHECK(std::abs(omega_power_density(2, beta, s) - (-8.0 * pi * beta + 16.0 * pi * pi * beta * beta * s) * e) <= 1e-12);
    }
    // (1 + D)^3 = (1 + D)^2 (1 + D): d3 = d2 + d1 + d2 * d1
    const double s = 0.7;
    const int n = 4000;
    double conv = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = (k + 0.5) * s / n;
        conv += omega_power_density(2, beta, u) * omega_power_density(1, beta, s - u) * s / n;
    }
    const double d3 = omega_power_density(2, beta, s) + omega_power_density(1, beta, s) + conv;
    CHECK(std::abs(omega_power_density(3, beta, s) - d3) <= 1e-5 * std::abs(d3));

    const std::vector<cplx> c = {cplx(1.0, 0.5), 0.0, cplx(-0.25, 0.0), cplx(0.0, 2.0)};
    cplx ref = 0.0;
    for (size_t k = 0; k < c.size(); ++k) ref += c[k] * omega_power_density(static_cast<int>(k) + 1, beta, s);
    CHECK(std::abs(omega_combined_density(c, beta, s) - ref) <= 1e-12);
}

TEST_CASE("omega series values") {
    const auto s = omega_series(1.0, {{1, 2.0}, {-1, cplx(0.0, 1.0)}});
    const double x = 0.7;
    const cplx w = (x - I) / (x + I);
    CHECK(std::abs(s->value(x) - (2.0 * w + I * std::conj(w))) <= 1e-14);
    CHECK(std::abs(s->value(1e6)) == doctest::Approx(std::abs(cplx(2.0, 1.0))).epsilon(1e-5));
}

TEST_CASE("combinators") {
    const auto g = gaussian(1.0, 0.5, 0.3);
    const auto m = modulated(g, 1.5), r = reflected(g);
    const auto t = sum({{2.0, g}, {cplx(0.0, -1.0), m}});
    for (double x : {-1.0, 0.2, 2.5}) {
        CHECK(std::abs(m->value(x) - std::exp(2.0 * pi * I * 1.5 * x) * g->value(x)) <= 1e-15);
        CHECK(std::abs(r->value(x) - g->value(-x)) <= 1e-15);
        CHECK(std::abs(t->value(x) - (2.0 * g->value(x) - I * m->value(x))) <= 1e-14);
    }
    CHECK(std::abs(density_at(*m, 1.5) - density_at(*g, 0.0)) <= 1e-14);
    CHECK(std::abs(density_at(*r, 0.4) - density_at(*g, -0.4)) <= 1e-14);
    const auto z = zero_symbol();
    CHECK(z->value(3.0) == cplx(0.0));
    CHECK(z->sup_norm(Grid::window(-4.0, 4.0, 0.5)) == 0.0);
}

TEST_CASE("filtered symbols") {
    const auto g = gaussian(1.0, 2.0);
    const auto f = filtered(g, [](double s) { return std::abs(s) < 0.5 ? 1.0 : 0.0; }, -0.5, 0.5);
    CHECK(std::abs(density_at(*f, 0.2) - density_at(*g, 0.2)) <= 1e-14);
    CHECK(density_at(*f, 0.8) == cplx(0.0));
}

TEST_CASE("json parsing") {
    const auto j = nlohmann::json::parse(R"({"sum": [
        {"coef": 2.0, "gaussian": {"amp": [0.0, 1.0], "beta": 0.5}},
        {"fejer": {"b": 0.25, "freq": -1.0}},
        {"modulated": {"freq": 0.5, "symbol": {"mod_poly": {"n": 0, "freq": 0.0}}}},
        {"omega": {"beta": 1.0, "coeffs": [[1, 1.0]]}}
    ]})");
    const auto s = symbol_from_json(j);
    const double x = 0.3;
    const cplx w = (x - I) / (x + I);
    const cplx ref = 2.0 * I * std::exp(-0.5 * x * x) + std::pow(sinc(0.25, x), 2) * std::exp(-2.0 * pi * I * x) +
                     std::exp(pi * I * x) + w;
    CHECK(std::abs(s->value(x) - ref) <= 1e-13);

    CHECK_NOTHROW(symbol_from_json(nlohmann::json::parse(R"({"fejer": {"b": 0.5}, "spectral_support": [-1.0, 1.0]})")));
    CHECK_NOTHROW(
        symbol_from_json(nlohmann::json::parse(R"({"mod_poly": {"n": 1, "freq": 2.0}, "spectral_support": [1.5, 2.5]})")));
    CHECK_THROWS(
        symbol_from_json(nlohmann::json::parse(R"({"mod_poly": {"n": 1, "freq": 2.0}, "spectral_support": [-1.0, 1.0]})")));
    CHECK_THROWS(symbol_from_json(nlohmann::json::parse(R"({"fejer": {"b": 0.5}, "spectral_support": [1.0]})")));
    CHECK_THROWS(symbol_from_json(nlohmann::json::parse(R"({"mod_poly": {"n": 1.5, "freq": 0.0}})")));
    CHECK_THROWS(symbol_from_json(nlohmann::json::parse(R"({"omega": {"coeffs": [[0.5, 1.0]]}})")));
    CHECK_THROWS(symbol_from_json(nlohmann::json::parse(R"([1, 2])")));
}
