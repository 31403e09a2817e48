#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pwlab/grid.hpp"
#include "pwlab/pwspace.hpp"

using namespace pwlab;

namespace {

Grid gauss_grid() { return Grid::window(-16.0, 16.0, 1.0 / 32.0); }

SampledFunction sinc_samples(double a, const Grid& g) {
    return SampledFunction::from(g, [a](double x) { return cplx(sinc(a, x)); });
}

SampledFunction random_function(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    return SampledFunction::from(g, [&](double) { return cplx(n(rng), n(rng)); });
}

}  // namespace

TEST_CASE("grid geometry") {
    const Grid g(-2.0, 0.25, 16);
    CHECK(g.half_length() == doctest::Approx(2.0));
    CHECK(g.nyquist() == doctest::Approx(2.0));
    const Grid f = g.frequencies();
    CHECK(f.step == doctest::Approx(0.25));
    CHECK(f.start == doctest::Approx(-2.0));
    CHECK_THROWS(Grid(0.0, 0.0, 4));
    CHECK_THROWS(Grid(0.0, 1.0, 1));
    CHECK_THROWS(SampledFunction(g, CVec(3)));
    CVec bad(16, 0.0);
    bad[3] = NAN;
    CHECK_THROWS(SampledFunction(g, bad));
}

TEST_CASE("gaussian transform pair") {
    const Grid g = gauss_grid();
    const auto f = SampledFunction::from(g, [](double x) { return cplx(std::exp(-pi * x * x)); });
    const auto s = fft_spectrum(f);
    double err = 0.0;
    for (int m = 0; m < s.size(); ++m) {
        const double xi = s.grid().x(m);
        err = std::max(err, std::abs(s[m] - std::exp(-pi * xi * xi)));
    }
    CHECK(err <= 1e-10);
    CHECK(std::abs(quad_integral(f) - 1.0) <= 1e-12);
}

TEST_CASE("zero function") {
    const Grid g = gauss_grid();
    const SampledFunction z(g);
    const auto s = fft_spectrum(z);
    CHECK(lp_norm(s, INFINITY) == 0.0);
    CHECK(std::abs(quad_integral(z)) == 0.0);
    for (double p : {1.0, 1.5, 2.0, double(INFINITY)}) CHECK(lp_norm(z, p) == 0.0);
    CHECK(std::abs(inner(random_function(g, 1), z)) == 0.0);
}

TEST_CASE("sinc spectrum is the band indicator away from the edges") {
    const Grid g = Grid::window(-200.0, 200.0, 1.0 / 16.0);
    const auto s = fft_spectrum(sinc_samples(1.0, g));
    const double L = g.half_length();
    double err = 0.0;
    for (int m = 0; m < s.size(); ++m) {
        const double xi = s.grid().x(m);
        if (std::abs(std::abs(xi) - 1.0) < 0.05) continue;
        const double edge = std::abs(std::abs(xi) - 1.0);
        err = std::max(err, std::abs(s[m] - (std::abs(xi) < 1.0 ? 1.0 : 0.0)) * edge * L);
    }
    CHECK(err <= 1.0);
}

// the truncated tail of sinc_1^2 beyond 200 is 1/(200 pi^2) = 5.1e-4
TEST_CASE("integral of sinc_1 squared" * doctest::may_fail()) {
    const Grid g = Grid::window(-200.0, 200.0, 1.0 / 16.0);
    const auto s1 = sinc_samples(1.0, g);
    CHECK(std::abs(quad_integral(pointwise(s1, s1)) - 2.0) <= 1e-4);
}

TEST_CASE("plancherel oracles") {
    const Grid g = Grid::window(-200.0, 200.0, 1.0 / 16.0);
    const auto s1 = sinc_samples(1.0, g);
    CHECK(std::abs(quad_integral(pointwise(s1, s1)) - 2.0) <= 1.0 / (200.0 * pi * pi) + 1e-5);
    CHECK(std::abs(lp_norm(s1, 2.0) - std::sqrt(2.0)) <= 1e-3);
    CHECK(std::abs(lp_norm(sinc_samples(0.125, g), 2.0) - 0.5) <= 1e-3);
    const auto shifted = SampledFunction::from(g, [](double x) { return cplx(sinc(1.0, x - 0.5)); });
    CHECK(std::abs(inner(s1, shifted)) <= 1e-3);
}

TEST_CASE("lp_norm domain") { CHECK_THROWS_AS(lp_norm(SampledFunction(gauss_grid()), 0.5), std::domain_error); }

TEST_CASE("inner product") {
    const Grid g = gauss_grid();
    const auto f = random_function(g, 2);
    CHECK(std::abs(inner(f, f) - std::pow(lp_norm(f, 2.0), 2)) <= 1e-12 * std::norm(inner(f, f)));
    CHECK_THROWS(inner(f, SampledFunction(Grid::window(-8.0, 8.0, 1.0 / 32.0))));
}

TEST_CASE("off-grid evaluation") {
    const Grid g = Grid::window(-1024.0, 1024.0, 1.0 / 8.0);
    const auto f = sinc_member(1.0, 0.0, g).f;
    for (int k : {0, 17, 1000, 16383}) CHECK(evaluate_offgrid(f, g.x(k)) == f[k]);
    CHECK(std::abs(evaluate_offgrid(f, 0.25) - 4.0 / pi) <= 1e-6);
    CHECK(std::abs(evaluate_offgrid(f, 0.5)) <= 1e-8);
}

TEST_CASE("round trip, parseval, integral at zero frequency") {
    const Grid g(-7.3, 0.05, 600);
    const auto f = random_function(g, 3);
    const auto s = fft_spectrum(f);
    CHECK(lp_norm(inverse_spectrum(s, g) - f, 2.0) <= 1e-12 * lp_norm(f, 2.0));
    CHECK(std::abs(lp_norm(f, 2.0) - lp_norm(s, 2.0)) <= 1e-10 * lp_norm(f, 2.0));
    const auto& fg = s.grid();
    int zero = 0;
    for (int m = 0; m < fg.count; ++m)
        if (std::abs(fg.x(m)) < std::abs(fg.x(zero))) zero = m;
    CHECK(std::abs(quad_integral(f) - s[zero]) <= 1e-12 * std::abs(quad_integral(f)));
}

TEST_CASE("lp_norm homogeneity and triangle inequality") {
    const Grid g = gauss_grid();
    for (unsigned seed = 10; seed < 15; ++seed) {
        const auto f = random_function(g, seed), h = random_function(g, seed + 100);
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            CHECK(lp_norm(cplx(-2.5, 1.0) * f, p) == doctest::Approx(std::abs(cplx(-2.5, 1.0)) * lp_norm(f, p)));
            CHECK(lp_norm(f + h, p) <= lp_norm(f, p) + lp_norm(h, p) + 1e-12);
        }
    }
}

TEST_CASE("json round trip") {
    const auto f = random_function(Grid(-1.0, 0.5, 8), 4);
    const auto back = sampled_from_json(to_json(f));
    CHECK(back.grid() == f.grid());
    for (int k = 0; k < 8; ++k) CHECK(back[k] == f[k]);
    CHECK_THROWS(sampled_from_json(nlohmann::json{{"values", nlohmann::json::array()}}));
}
