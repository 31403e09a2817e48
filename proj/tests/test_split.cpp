#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pwlab/split.hpp"

using namespace pwlab;

namespace {

const double a = 1.0;

GridOperator op_of(SymbolPtr phi, double band) {
    return [phi, band](const SampledFunction& f) {
        BandlimitedFunction b;
        b.f = f;
        b.a = band;
        return toeplitz_apply(*phi, b).f;
    };
}

}  // namespace

TEST_CASE("bump values") {
    CHECK(bump(-1.0, Part::L) == 1.0);
    CHECK(bump(0.0, Part::C) == 1.0);
    CHECK(bump(-5.0, Part::L) == 0.0);
    CHECK(bump(-4.0, Part::L) == 0.0);
    CHECK(bump(-0.25, Part::L) == 0.0);
    for (double x : {-2.0, -1.3, -0.5}) CHECK(bump(x, Part::L) == 1.0);
    for (double x : {0.3, 1.7, 3.9, -2.9}) CHECK(bump(x, Part::R) == bump(-x, Part::L));
    CHECK(bump(0.6, Part::C) == 0.0);
    CHECK(smooth_step(-0.1) == 0.0);
    CHECK(smooth_step(1.2) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
}

TEST_CASE("bump partition") {
    double worst = 0.0, lo = 1.0, hi = 0.0;
    for (int k = 0; k <= 400000; ++k) {
        const double x = -2.0 + 4.0 * k / 400000.0;
        const double l = bump(x, Part::L), c = bump(x, Part::C), r = bump(x, Part::R);
        worst = std::max(worst, std::abs(l + c + r - 1.0));
        lo = std::min({lo, l, c, r});
        hi = std::max({hi, l, c, r});
    }
    CHECK(worst <= 1e-12);
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    const auto [l, r] = bump_support(Part::L, 2.0);
    CHECK(l == doctest::Approx(-8.0));
    CHECK(r == doctest::Approx(-0.5));
}

TEST_CASE("bump transforms") {
    for (Part P : {Part::L, Part::C, Part::R}) {
        const double ref = bump_l1(P, 1.0);
        CHECK(ref >= 1.0);
        for (double s : {0.5, 2.0, 4.0}) CHECK(std::abs(bump_l1(P, s) - ref) <= 1e-6);
    }
    CHECK(bump_l1(Part::L, 1.0) == doctest::Approx(bump_l1(Part::R, 1.0)).epsilon(1e-12));
    // rapid decay: t^6 |psi^(t)| keeps shrinking
    for (Part P : {Part::L, Part::C})
        CHECK(bump_decay_profile(P, 60.0, 120.0) <= bump_decay_profile(P, 20.0, 40.0));
}

TEST_CASE("split of a gaussian") {
    const Grid g = default_grid(a);
    const auto phi = gaussian(1.0, 1.0);
    const SplitResult s = split_symbol(phi, a, g);
    CHECK(s.partition_residual <= 1e-8);
    CHECK(s.cert_left <= 1e-8);
    CHECK(s.cert_central <= 1e-8);
    CHECK(s.cert_right <= 1e-8);
    CHECK_FALSE(s.schwartz_warning);
    CHECK(s.constant() == doctest::Approx(s.l1_left + s.l1_central + s.l1_right));

    const Basis b = Basis::centered(a, 32.0);
    const MatC T = toeplitz_matrix(*phi, b);
    const MatC R = T - toeplitz_matrix(*s.left, b) - toeplitz_matrix(*s.central, b) - toeplitz_matrix(*s.right, b);
    CHECK(spectral_norm(R) <= 1e-6 * spectral_norm(T));
}

TEST_CASE("narrow spectrum is all central") {
    const Grid g = default_grid(a);
    // spectrum inside [-a/4, a/4] down to e^-45
    const auto phi = gaussian(cplx(1.0, -0.5), 0.01, 0.7);
    const SplitResult s = split_symbol(phi, a, g);
    const Grid probe = Grid::window(-16.0, 16.0, 1.0 / 4.0);
    CHECK(s.left->sup_norm(probe) <= 1e-12);
    CHECK(s.right->sup_norm(probe) <= 1e-12);
    double d = 0.0;
    for (int k = 0; k < probe.count; ++k) d = std::max(d, std::abs(s.central->value(probe.x(k)) - phi->value(probe.x(k))));
    CHECK(d <= 1e-10);
}

TEST_CASE("operator sum over a seeded family") {
    const Grid g = default_grid(a);
    const Basis b = Basis::centered(a, 32.0);
    const double amps[5] = {1.0, 0.6, 1.4, 0.9, 1.2};
    for (int i = 0; i < 5; ++i) {
        const auto phi = gaussian(std::polar(amps[i], 0.9 * i), 0.5 + 0.3 * i, 0.7 * i - 1.4, (0.4 * i - 0.8) * a);
        const SplitResult s = split_symbol(phi, a, g);
        const MatC T = toeplitz_matrix(*phi, b);
        const MatC R =
            T - toeplitz_matrix(*s.left, b) - toeplitz_matrix(*s.central, b) - toeplitz_matrix(*s.right, b);
        CHECK(spectral_norm(R) <= 1e-6 * spectral_norm(T));
    }
}

TEST_CASE("jensen certificate") {
    const Grid g = default_grid(a);
    const Basis b = Basis::centered(a, 32.0);
    const JensenReport r = jensen_certificate(gaussian(1.0, 1.0), a, 2.0, b, g);
    CHECK(r.holds);
    for (int i = 0; i < 3; ++i) CHECK(r.t_part[i] <= r.l1[i] * r.t_phi * (1.0 + 1e-3));

    const JensenReport z = jensen_certificate(zero_symbol(), a, 2.0, b, g);
    CHECK(z.holds);
    CHECK(z.t_phi == 0.0);
    for (double t : z.t_part) CHECK(t == 0.0);

    double lo = INFINITY, hi = 0.0;
    for (double s : {0.5, 1.0, 2.0, 4.0}) {
        const double c = bump_l1(Part::L, s) + bump_l1(Part::C, s) + bump_l1(Part::R, s);
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    CHECK(hi - lo <= 1e-6);
    CHECK(std::abs(r.constant - hi) <= 1e-6);
}

TEST_CASE("central recovery") {
    const Grid g = default_grid(a);
    const SplitResult s = split_symbol(gaussian(1.0, 1.0), a, g);
    const GridOperator tc = op_of(s.central, a);
    CHECK(std::abs(central_recover(tc, a, 0.0, g) - s.central->value(0.0)) <= 1e-5);

    const double cmax = s.central->sup_norm(g);
    double err = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double x = -5.0 + 0.25 * i;
        err = std::max(err, std::abs(central_recover(tc, a, x, g) - s.central->value(x)));
    }
    CHECK(err <= 1e-5 * cmax);

    const GridOperator zero = [](const SampledFunction& f) { return SampledFunction(f.grid()); };
    CHECK(central_recover(zero, a, 0.3, g) == cplx(0.0));

    // sup bound through the sinc norm constant
    const double tcn = spectral_norm(toeplitz_matrix(*s.central, Basis::centered(a, 32.0)));
    const double k = 4.0 * sinc_lp_norm(1.0, 2.0) * sinc_lp_norm(0.125, 2.0);
    CHECK(cmax <= k * tcn * 1.05);
}

TEST_CASE("sinc norm constant") {
    const SincNormConstant two = sinc_norm_constant(2.0);
    CHECK(std::abs(two.product - std::sqrt(2.0) / 2.0) <= 1e-3);
    CHECK(two.bound == doctest::Approx(12.0 / pi).epsilon(1e-12));
    CHECK(two.holds());
    for (double p : {1.1, 1.5, 3.0, 8.0}) CHECK(sinc_norm_constant(p).holds());
    CHECK(std::abs(sinc_lp_norm(1.0, 2.0) - std::sqrt(2.0)) <= 1e-6);
    CHECK(std::abs(sinc_lp_norm(0.125, 2.0) - 0.5) <= 1e-6);
    CHECK_THROWS(sinc_norm_constant(1.0));
    CHECK_THROWS(sinc_norm_constant(INFINITY));
}
