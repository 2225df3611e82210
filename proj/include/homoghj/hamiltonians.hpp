#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace homoghj {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// One-dimensional flux F(p).
///
/// AbsPower: c|p|^m (m >= 1). OddPower: c p^m (m odd). Linear: p. Abs: |p|.
struct Flux1D {
    enum class Kind { abs_power, odd_power, linear, abs };

    Kind kind = Kind::abs;
    double c = 1.0;
    double m = 1.0;

    static Flux1D abs_power(double c, double m);
    static Flux1D odd_power(double c, int m);
    static Flux1D linear() { return {Kind::linear, 1.0, 1.0}; }
    static Flux1D absolute() { return {Kind::abs, 1.0, 1.0}; }

    double operator()(double p) const;

    bool is_even() const { return kind == Kind::abs_power || kind == Kind::abs; }
    bool is_convex() const;
    std::string describe() const;
};

/// Periodic potential V(y).
struct Potential1D {
    enum class Kind { zero, triangle_wave, parabola_wave, sine };

    Kind kind = Kind::zero;
    double period = 1.0;

    static Potential1D zero() { return {}; }
    static Potential1D triangle_wave() { return {Kind::triangle_wave, 1.0}; }
    static Potential1D parabola_wave() { return {Kind::parabola_wave, 1.0}; }
    /// sin(2 pi y / period); period 2 pi gives sin(y).
    static Potential1D sine(double period);

    double operator()(double y) const;

    double min_value() const;
    double max_value() const;
    double oscillation() const { return max_value() - min_value(); }
    std::string describe() const;
};

/// Data of H(y,p) = sup_{alpha in Lambda} { -b(y,alpha).p - f(y,alpha) } on the 2-torus,
/// with b = b0(y) + alpha and f = f0(y).
struct HJBData2D {
    enum class ControlSet { singleton, unit_ball };

    ControlSet control_set = ControlSet::singleton;
    std::function<Vec2(Vec2)> drift_base;
    std::function<double(Vec2)> cost_base;
    double drift_bound = 0.0;

    /// b0 = ((1/2pi) cos(2 pi y1), 0), f0 = 1 + sin(2 pi y1), Lambda = {0}.
    static HJBData2D example_6_1();
    /// Same b0, f0 with Lambda the closed unit ball.
    static HJBData2D example_6_2();
    /// b0 = 0 and the given cost.
    static HJBData2D drift_free(std::function<double(Vec2)> cost);

    Vec2 drift(Vec2 y, Vec2 alpha) const {
        return control_set == ControlSet::singleton ? drift_base(y) : drift_base(y) + alpha;
    }
    /// Copy with b0, f0 replaced by y -> b0(y + shift), f0(y + shift).
    HJBData2D shifted(Vec2 shift) const;
};

struct Separable {
    Flux1D flux;
    Potential1D potential;
};

using HamiltonianSpec = std::variant<Separable, HJBData2D>;

/// Initial data g of the Cauchy problems.
struct InitialDatum1D {
    enum class Kind { neg_abs, hat, double_well, power32, capped_parabola };

    Kind kind = Kind::neg_abs;
    double M = 1.0;
    /// Global Lipschitz constant (infinite for power32, see lipschitz_on).
    double lipschitz_bound = 1.0;

    static InitialDatum1D neg_abs();
    static InitialDatum1D hat();
    static InitialDatum1D double_well(double M);
    /// (2 sqrt2 / 9)(-x)^{3/2} for x <= 0, continued by 0 for x > 0.
    static InitialDatum1D power32();
    static InitialDatum1D capped_parabola();

    double operator()(double x) const;

    /// Lipschitz constant of g restricted to [a, b].
    double lipschitz_on(double a, double b) const;
    /// Points where g is not differentiable.
    std::vector<double> kinks() const;
    std::string describe() const;
};

/// H(y,p) for a separable spec.
double eval_H(const HamiltonianSpec& spec, double y, double p);
/// H(y,p) for an HJB spec; the sup over the unit ball is taken in closed form.
double eval_H(const HamiltonianSpec& spec, Vec2 y, Vec2 p);
double eval_H(const HJBData2D& data, Vec2 y, Vec2 p);

/// sup_{|p| <= radius} |F'(p)| (essential sup for the kinked fluxes).
double lipschitz_bound_F(const Flux1D& flux, double radius);

/// L(v) = sup_p { p v - F(p) }; returns kInf outside the effective domain.
/// Throws NonConvexFlux for fluxes that are not convex.
double legendre_conjugate(const Flux1D& flux, double v);

}  // namespace homoghj
