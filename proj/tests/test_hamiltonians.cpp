#include "doctest.h"

#include <cmath>
#include <random>

#include "homoghj/errors.hpp"
#include "homoghj/hamiltonians.hpp"

using namespace homoghj;

namespace {

// sup_p { p v - F(p) } over a fine grid; a Riemann-free oracle for the conjugate.
double brute_conjugate(const Flux1D& F, double v, double pmax = 50.0, int n = 1000000) {
    double best = -kInf;
    for (int i = 0; i <= n; ++i) {
        const double p = -pmax + 2.0 * pmax * i / n;
        best = std::max(best, p * v - F(p));
    }
    return best;
}

}  // namespace

TEST_CASE("flux values") {
    CHECK(Flux1D::abs_power(1.0, 1.5)(-4.0) == doctest::Approx(8.0));
    CHECK(Flux1D::abs_power(0.25, 4.0)(2.0) == doctest::Approx(4.0));
    CHECK(Flux1D::odd_power(1.0, 3)(-2.0) == doctest::Approx(-8.0));
    CHECK(Flux1D::linear()(-3.5) == -3.5);
    CHECK(Flux1D::absolute()(-3.5) == 3.5);
    CHECK_THROWS_AS(Flux1D::abs_power(1.0, 0.5), ConfigError);
    CHECK_THROWS_AS(Flux1D::odd_power(1.0, 2), ConfigError);
}

TEST_CASE("convexity and Lipschitz bounds of the flux") {
    CHECK(Flux1D::abs_power(1.0, 1.5).is_convex());
    CHECK(Flux1D::absolute().is_convex());
    CHECK_FALSE(Flux1D::odd_power(1.0, 3).is_convex());
    CHECK(lipschitz_bound_F(Flux1D::abs_power(1.0, 4.0), 1.0) == doctest::Approx(4.0));
    CHECK(lipschitz_bound_F(Flux1D::abs_power(0.25, 4.0), 2.0) == doctest::Approx(8.0));
    CHECK(lipschitz_bound_F(Flux1D::absolute(), 7.0) == 1.0);
    CHECK(lipschitz_bound_F(Flux1D::odd_power(1.0, 3), 2.0) == doctest::Approx(12.0));
}

TEST_CASE("Legendre conjugate of a quartic") {
    CHECK(legendre_conjugate(Flux1D::abs_power(0.25, 4.0), 1.0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(legendre_conjugate(Flux1D::abs_power(0.5, 2.0), 3.0) == doctest::Approx(4.5).epsilon(1e-12));
}

TEST_CASE("Legendre conjugate agrees with brute-force maximisation") {
    const Flux1D fluxes[] = {Flux1D::abs_power(1.0, 1.5), Flux1D::abs_power(0.25, 4.0), Flux1D::abs_power(0.5, 2.0),
                             Flux1D::abs_power(2.0, 3.0), Flux1D::absolute()};
    for (const auto& F : fluxes) {
        for (double v = -1.0; v <= 1.0 + 1e-12; v += 0.125) {
            INFO(F.describe(), " v=", v);
            CHECK(std::fabs(legendre_conjugate(F, v) - brute_conjugate(F, v)) < 1e-6);
        }
    }
}

TEST_CASE("Legendre conjugate outside the effective domain") {
    CHECK(legendre_conjugate(Flux1D::linear(), 1.0) == 0.0);
    CHECK(legendre_conjugate(Flux1D::linear(), 0.5) == kInf);
    CHECK(legendre_conjugate(Flux1D::absolute(), 1.5) == kInf);
    CHECK(legendre_conjugate(Flux1D::absolute(), -0.3) == 0.0);
    CHECK_THROWS_AS(legendre_conjugate(Flux1D::odd_power(1.0, 3), 0.0), NonConvexFlux);
}

TEST_CASE("periodic potentials") {
    const Potential1D tri = Potential1D::triangle_wave();
    const Potential1D par = Potential1D::parabola_wave();
    const Potential1D sn = Potential1D::sine(2.0 * kPi);
    CHECK(tri(0.25) == doctest::Approx(0.25));
    CHECK(tri(0.5) == doctest::Approx(0.5));
    CHECK(par(0.5) == doctest::Approx(0.25));
    CHECK(sn(kPi / 2.0) == doctest::Approx(1.0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double y = dist(rng);
        CHECK(tri(y + 1.0) == doctest::Approx(tri(y)).epsilon(1e-12));
        CHECK(par(y + 3.0) == doctest::Approx(par(y)).epsilon(1e-12));
        CHECK(sn(y + 2.0 * kPi) == doctest::Approx(sn(y)).epsilon(1e-9));
        CHECK(std::fabs(tri(y)) <= 1.0);
        CHECK(std::fabs(par(y)) <= 1.0);
        CHECK(std::fabs(sn(y)) <= 1.0);
    }
    CHECK(tri.oscillation() == doctest::Approx(0.5));
    CHECK(sn.oscillation() == doctest::Approx(2.0));
}

TEST_CASE("initial data") {
    CHECK(InitialDatum1D::neg_abs()(-2.0) == -2.0);
    CHECK(InitialDatum1D::hat()(0.25) == doctest::Approx(0.75));
    CHECK(InitialDatum1D::hat()(3.0) == 0.0);
    CHECK(InitialDatum1D::double_well(1.0)(0.5) == doctest::Approx(-0.25));
    CHECK(InitialDatum1D::double_well(2.0)(-1.0) == doctest::Approx(2.0));
    CHECK(InitialDatum1D::power32()(-2.0) == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
    CHECK(InitialDatum1D::power32()(1.0) == 0.0);
    CHECK(InitialDatum1D::capped_parabola()(0.5) == doctest::Approx(-0.125));
    CHECK(InitialDatum1D::capped_parabola()(4.0) == doctest::Approx(2.5));
    CHECK(InitialDatum1D::power32().lipschitz_on(-8.0, 0.0) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("HJB Hamiltonian on the unit ball matches sampled controls") {
    const HJBData2D d = HJBData2D::example_6_2();
    CHECK(eval_H(d, Vec2{0.0, 0.0}, Vec2{1.0, 0.0}) == doctest::Approx(1.0 - 1.0 / (2.0 * kPi) - 1.0));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec2 y{dist(rng), dist(rng)};
        const Vec2 p{dist(rng), dist(rng)};
        double best = -kInf;
        const int n = 20000;
        for (int k = 0; k < n; ++k) {
            const double th = 2.0 * kPi * k / n;
            const Vec2 a{std::cos(th), std::sin(th)};
            best = std::max(best, -dot(d.drift(y, a), p) - d.cost_base(y));
        }
        CHECK(std::fabs(eval_H(d, y, p) - best) < 1e-6 * (1.0 + norm(p)));
    }
}

TEST_CASE("HJB data are periodic and shift consistently") {
    const HJBData2D d = HJBData2D::example_6_1();
    const Vec2 y{0.3, 0.7};
    const Vec2 p{3.0, 1.0};
    CHECK(eval_H(d, y + Vec2{1.0, 0.0}, p) == doctest::Approx(eval_H(d, y, p)).epsilon(1e-12));
    CHECK(eval_H(d, y + Vec2{0.0, -2.0}, p) == doctest::Approx(eval_H(d, y, p)).epsilon(1e-12));
    const HJBData2D s = d.shifted(Vec2{0.25, 0.0});
    CHECK(eval_H(s, y, p) == doctest::Approx(eval_H(d, y + Vec2{0.25, 0.0}, p)).epsilon(1e-12));
}

TEST_CASE("eval_H rejects mismatched Hamiltonian kinds") {
    const HamiltonianSpec sep = Separable{Flux1D::absolute(), Potential1D::zero()};
    const HamiltonianSpec hjb = HJBData2D::example_6_1();
    CHECK(eval_H(sep, 0.0, -2.0) == 2.0);
    CHECK_THROWS_AS(eval_H(sep, Vec2{}, Vec2{}), DomainError);
    CHECK_THROWS_AS(eval_H(hjb, 0.0, 1.0), DomainError);
}
