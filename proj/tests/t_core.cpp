// Quadrature, special functions, potential catalog, and sector resolvent kernels.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "pfb/green.hpp"
#include "pfb/potential.hpp"
#include "pfb/quadrature.hpp"
#include "pfb/special.hpp"

using namespace pfb;
using std::numbers::pi;

TEST_CASE("Gauss-Legendre rules", "[quadrature]") {
    const GaussRule& r2 = gauss_rule(2);
    CHECK(r2.x[0] == Catch::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.x[1] == Catch::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));

    const GaussRule& r12 = gauss_rule(12);
    double wsum = 0.0, m22 = 0.0, m23 = 0.0;
    for (int i = 0; i < 12; ++i) {
        wsum += r12.w[i];
        m22 += r12.w[i] * std::pow(r12.x[i], 22);
        m23 += r12.w[i] * std::pow(r12.x[i], 23);
    }
    CHECK(wsum == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(m22 == Catch::Approx(2.0 / 23.0).epsilon(1e-13)); // degree 2n-2: still exact
    CHECK(std::abs(m23) < 1e-15);                           // odd moment

    PanelRule pr = panel_rule({0.0, 0.3, 1.0}, 12);
    double s = 0.0;
    for (std::size_t i = 0; i < pr.x.size(); ++i)
        s += pr.w[i] * std::exp(pr.x[i]);
    CHECK(s == Catch::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("panel halving preserves endpoints and points", "[quadrature]") {
    std::vector<double> br{0.0, 0.5, 2.0};
    auto h = halve_panels(br);
    REQUIRE(h.size() == 5);
    CHECK(h.front() == 0.0);
    CHECK(h.back() == 2.0);
    CHECK(h[1] == Catch::Approx(0.25));
    CHECK(h[2] == 0.5);
}

TEST_CASE("graded breaks span the requested interval", "[quadrature]") {
    auto br = graded_breaks(0.0, 2.0, 50.0, 8, 1.6);
    CHECK(br.front() == 0.0);
    CHECK(br.back() == Catch::Approx(50.0));
    for (std::size_t i = 0; i + 1 < br.size(); ++i)
        CHECK(br[i] < br[i + 1]);
}

TEST_CASE("adaptive integration", "[quadrature]") {
    // smooth
    double v = adaptive_integrate([](double x) { return std::sin(x); }, 0.0, pi, 1e-12);
    CHECK(v == Catch::Approx(2.0).epsilon(1e-12));
    // integrable endpoint behavior
    double w = adaptive_integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-11);
    CHECK(w == Catch::Approx(2.0 / 3.0).epsilon(1e-10));
    // kink handled via split points
    double k = adaptive_integrate([](double x) { return std::abs(x - 0.5); },
                                  {0.0, 0.5, 1.0}, 1e-13);
    CHECK(k == Catch::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("extrapolation to zero removes polynomial error", "[quadrature]") {
    std::vector<double> xs{0.4, 0.2, 0.1, 0.05};
    std::vector<double> ys;
    for (double x : xs)
        ys.push_back(3.0 + 2.0 * x + 5.0 * x * x - x * x * x);
    CHECK(extrapolate_to_zero(xs, ys) == Catch::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("scaled modified spherical Bessel functions", "[special]") {
    // closed forms for l = 0, 1
    for (double z : {0.05, 0.7, 3.0, 25.0}) {
        CHECK(scaled_iv(0, z) ==
              Catch::Approx(0.5 * (1.0 - std::exp(-2.0 * z))).epsilon(1e-14));
        double i1 = ((z - 1.0) + (z + 1.0) * std::exp(-2.0 * z)) / (2.0 * z);
        CHECK(scaled_iv(1, z) == Catch::Approx(i1).epsilon(1e-13));
        CHECK(scaled_kv(0, z) == Catch::Approx(1.0).epsilon(1e-15));
        CHECK(scaled_kv(1, z) == Catch::Approx(1.0 + 1.0 / z).epsilon(1e-15));
    }
    // cross-products: Ibar_l Kbar_{l+1} + Ibar_{l+1} Kbar_l = 1 (Wronskian identity)
    for (int l : {0, 1, 2, 5, 9})
        for (double z : {0.1, 0.9, 4.0, 18.0}) {
            double w = scaled_iv(l, z) * scaled_kv(l + 1, z) +
                       scaled_iv(l + 1, z) * scaled_kv(l, z);
            CHECK(w == Catch::Approx(1.0).epsilon(1e-12));
        }
    CHECK(double_factorial_odd(0) == 1.0);   // 1!!
    CHECK(double_factorial_odd(1) == 3.0);   // 3!!
    CHECK(double_factorial_odd(2) == 15.0);  // 5!!
    CHECK(double_factorial_odd(3) == 105.0); // 7!!
    CHECK(unit_sphere_area(3) == Catch::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(unit_sphere_area(4) == Catch::Approx(2.0 * pi * pi).epsilon(1e-15));
    CHECK(unit_sphere_area(5) == Catch::Approx(8.0 * pi * pi / 3.0).epsilon(1e-14));
}

TEST_CASE("potential catalog evaluation", "[potential]") {
    Potential sw = Potential::square_well(2.0, 1.5);
    CHECK(sw(0.0) == -2.0);
    CHECK(sw(1.5) == -2.0);
    CHECK(sw(1.5000001) == 0.0);
    Potential ex = Potential::exponential(1.0, 2.0);
    CHECK(ex(1.0) == Catch::Approx(-std::exp(-0.5)).epsilon(1e-15));
    Potential ga = Potential::gaussian(3.0, 0.5); // -V0 e^{-r^2/(2 sigma^2)}
    CHECK(ga(1.0) == Catch::Approx(-3.0 * std::exp(-2.0)).epsilon(1e-15));

    Potential tb = Potential::tabulated({0.0, 0.5, 1.0}, {-1.0, -0.25, 0.0});
    CHECK(tb(0.0) == -1.0);
    CHECK(tb(0.5) == -0.25);
    CHECK(tb(2.0) == 0.0);
    CHECK(tb(0.25) <= -0.25); // monotone interpolant stays within data range
    CHECK(tb(0.25) >= -1.0);

    CHECK_THROWS_AS(Potential::square_well(-1.0, 1.0), domain_error);
    CHECK_THROWS_AS(Potential::square_well(1.0, 0.0), domain_error);
    CHECK_THROWS_AS(Potential::gaussian(1.0, 1.0, 2), domain_error);
    CHECK_THROWS_AS(Potential::tabulated({0.5, 1.0}, {-1.0, 0.0}), domain_error);
}

TEST_CASE("potential scaling map", "[potential]") {
    Potential sw = Potential::square_well(1.0, 1.0);
    Potential swk = sw.scaled(2.0);
    CHECK(swk(1.5) == Catch::Approx(-0.25).epsilon(1e-15));
    CHECK(swk(2.5) == 0.0);
    CHECK(swk.support_end() == Catch::Approx(2.0));
    Potential ex = Potential::exponential(1.0, 1.0);
    for (double kappa : {0.5, 2.0})
        for (double r : {0.2, 1.0, 3.7})
            CHECK(ex.scaled(kappa)(r) ==
                  Catch::Approx(ex(r / kappa) / (kappa * kappa)).epsilon(1e-15));
    CHECK(ex.scaled(2.0).scaled(3.0)(1.1) == Catch::Approx(ex.scaled(6.0)(1.1)).epsilon(1e-15));
    CHECK(ex.scaled(2.0).suggested_rmax() == Catch::Approx(2.0 * ex.suggested_rmax()));
}

TEST_CASE("Lp norms against closed forms", "[potential]") {
    // ||V||_{d/2} for the canonical members, d = 3
    CHECK(Potential::square_well(1.0, 1.0).lp_norm(1.5) ==
          Catch::Approx(2.598518059813836).epsilon(1e-10)); // (4 pi / 3)^{2/3}
    CHECK(Potential::square_well(1.0, 1.0).lp_norm(2.0) ==
          Catch::Approx(2.046653415892977).epsilon(1e-10)); // (4 pi / 3)^{1/2}
    CHECK(Potential::exponential(1.0, 1.0).lp_norm(1.5) ==
          Catch::Approx(3.8133855948640455).epsilon(1e-9)); // (64 pi / 27)^{2/3}
    CHECK(Potential::gaussian(1.0, 1.0).lp_norm(1.5) ==
          Catch::Approx(4.1887902047863905).epsilon(1e-9)); // 4 pi / 3

    // homogeneity and the critical-norm scale invariance
    double base = Potential::exponential(1.0, 1.0).lp_norm(1.5);
    CHECK(Potential::exponential(2.0, 1.0).lp_norm(1.5) ==
          Catch::Approx(2.0 * base).epsilon(1e-10));
    for (double kappa : {0.5, 2.0, 10.0})
        CHECK(Potential::exponential(1.0, 1.0).scaled(kappa).lp_norm(1.5) ==
              Catch::Approx(base).epsilon(1e-8));
    // ||V_kappa||_q = kappa^{d/q - 2} ||V||_q; q = 2, d = 3 gives kappa^{-1/2}
    double l2 = Potential::gaussian(1.0, 1.0).lp_norm(2.0);
    CHECK(Potential::gaussian(1.0, 1.0).scaled(2.0).lp_norm(2.0) ==
          Catch::Approx(l2 / std::sqrt(2.0)).epsilon(1e-8));
    CHECK_THROWS_AS(Potential::square_well(1.0, 1.0).lp_norm(1.0), domain_error);
}

TEST_CASE("Rollnik norm", "[potential]") {
    // unit square well: double integral = 4 pi^2 exactly
    CHECK(Potential::square_well(1.0, 1.0).rollnik_norm() ==
          Catch::Approx(39.478417604357434).epsilon(1e-7));
    // scale invariance (the Rollnik integral is the d = 3 critical double norm)
    double base = Potential::exponential(1.0, 1.0).rollnik_norm();
    CHECK(base > 0.0);
    for (double kappa : {0.5, 2.0})
        CHECK(Potential::exponential(1.0, 1.0).scaled(kappa).rollnik_norm() ==
              Catch::Approx(base).epsilon(1e-6));
    CHECK_THROWS_AS(Potential::square_well(1.0, 1.0, 4).rollnik_norm(), domain_error);
}

TEST_CASE("operator-norm bound constant", "[potential]") {
    // d = 3 closed form: sqrt(2) pi (4/3) (4/sqrt(pi))^{2/3}
    CHECK(Potential::lieb_constant(3) == Catch::Approx(10.19202101471764).epsilon(1e-14));
    // reciprocal form 3/(sqrt 2 pi^{2/3} 4^{5/3})
    double recip = 3.0 / (std::numbers::sqrt2 * std::pow(pi, 2.0 / 3.0) *
                          std::pow(4.0, 5.0 / 3.0));
    CHECK(1.0 / Potential::lieb_constant(3) == Catch::Approx(recip).epsilon(1e-14));
    // bound is kappa-invariant
    double b = Potential::gaussian(1.0, 1.0).lieb_bound();
    for (double kappa : {0.5, 2.0, 10.0})
        CHECK(Potential::gaussian(1.0, 1.0).scaled(kappa).lieb_bound() ==
              Catch::Approx(b).epsilon(1e-8));
}

TEST_CASE("sector resolvent kernel closed forms", "[green]") {
    // zero energy, d = 3: 2/(2l+1) r_<^{l+1} r_>^{-l}
    CHECK(radial_green({3, 0, 0.0}, 0.3, 0.9) == Catch::Approx(0.6).epsilon(1e-15));
    CHECK(radial_green({3, 2, 0.0}, 0.3, 0.9) ==
          Catch::Approx(0.013333333333333334).epsilon(1e-14)); // (2/5) 0.3^3 / 0.9^2 = 1/75
    // negative energy: (2/q) (qr_<) i_l(qr_<) (qr_>) k_l(qr_>)
    CHECK(radial_green({3, 0, -0.5}, 0.5, 1.2) ==
          Catch::Approx(0.31390177973867486).epsilon(1e-13));
    CHECK(radial_green({3, 1, -2.0}, 0.9, 0.7) ==
          Catch::Approx(0.20330961553463035).epsilon(1e-13));
    CHECK(radial_green({3, 3, -0.125}, 2.0, 3.0) ==
          Catch::Approx(0.14473096123506755).epsilon(1e-13));
    // d > 3, l = 0, E = 0
    CHECK(radial_green({4, 0, 0.0}, 0.5, 1.2) ==
          Catch::Approx(0.32274861218395141).epsilon(1e-14));
    CHECK(radial_green({5, 0, 0.0}, 0.5, 1.2) ==
          Catch::Approx(0.13888888888888889).epsilon(1e-14)); // = 5/36
}

TEST_CASE("sector resolvent kernel properties", "[green]") {
    // symmetry
    for (int l : {0, 1, 4})
        for (double E : {0.0, -0.9})
            CHECK(radial_green({3, l, E}, 0.4, 1.7) ==
                  Catch::Approx(radial_green({3, l, E}, 1.7, 0.4)).epsilon(1e-14));
    // continuity as E -> 0^-
    for (int l : {0, 1, 3}) {
        double g0 = radial_green({3, l, 0.0}, 0.6, 1.1);
        double ge = radial_green({3, l, -1e-12}, 0.6, 1.1);
        CHECK(ge == Catch::Approx(g0).epsilon(1e-5));
    }
    // derivative jump -2 across the diagonal (second-order one-sided slopes)
    for (auto s : {SectorSpec{3, 0, 0.0}, SectorSpec{3, 2, 0.0}, SectorSpec{3, 0, -1.0},
                   SectorSpec{3, 1, -0.3}}) {
        const double rp = 0.8, h = 1e-4;
        double g0 = radial_green(s, rp, rp);
        double sp = (-3.0 * g0 + 4.0 * radial_green(s, rp + h, rp) -
                     radial_green(s, rp + 2.0 * h, rp)) /
                    (2.0 * h);
        double sm = (3.0 * g0 - 4.0 * radial_green(s, rp - h, rp) +
                     radial_green(s, rp - 2.0 * h, rp)) /
                    (2.0 * h);
        CHECK(sp - sm == Catch::Approx(-2.0).epsilon(1e-5));
    }
    // domain guards
    CHECK_THROWS_AS(radial_green({3, 0, 0.5}, 1.0, 1.0), domain_error);
    CHECK_THROWS_AS(radial_green({4, 1, 0.0}, 1.0, 1.0), domain_error);
    CHECK_THROWS_AS(radial_green({4, 0, -1.0}, 1.0, 1.0), domain_error);
    CHECK_THROWS_AS(radial_green({3, 0, 0.0}, 0.0, 1.0), domain_error);
}

TEST_CASE("Birman-Schwinger kernel factors", "[green]") {
    Potential sw = Potential::square_well(1.0, 1.0);
    SectorSpec s{3, 0, 0.0};
    CHECK(bs_kernel(sw, s, 1.5, 0.5) == 0.0);  // one radius outside support
    CHECK(bs_kernel(sw, s, 0.5, 0.8) > 0.0);
    CHECK(bs_kernel(sw, s, 0.5, 0.8) == Catch::Approx(bs_kernel(sw, s, 0.8, 0.5)).epsilon(1e-14));
    // |V|^(1/2) g |V|^(1/2) with V = -1 inside: kernel equals the resolvent there
    CHECK(bs_kernel(sw, s, 0.3, 0.9) == Catch::Approx(0.6).epsilon(1e-14));
}
