#include "homoghj/hamiltonians.hpp"

#include <algorithm>
#include <sstream>

#include "homoghj/errors.hpp"
#include "homoghj/simd/flux_eval.hpp"

namespace homoghj {

namespace {

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------- Flux1D

Flux1D Flux1D::abs_power(double c, double m) {
    if (!(m >= 1.0)) throw ConfigError("AbsPower flux requires exponent m >= 1");
    return {Kind::abs_power, c, m};
}

Flux1D Flux1D::odd_power(double c, int m) {
    if (m < 1 || m % 2 == 0) throw ConfigError("OddPower flux requires an odd positive exponent");
    return {Kind::odd_power, c, static_cast<double>(m)};
}

double Flux1D::operator()(double p) const { return simd::eval_flux(simd::decompose(*this), p); }

bool Flux1D::is_convex() const {
    switch (kind) {
        case Kind::abs_power:
            return c >= 0.0;
        case Kind::linear:
        case Kind::abs:
            return true;
        case Kind::odd_power:
            return false;
    }
    return false;
}

std::string Flux1D::describe() const {
    switch (kind) {
        case Kind::abs_power:
            return fmt_num(c) + "*|p|^" + fmt_num(m);
        case Kind::odd_power:
            return fmt_num(c) + "*p^" + fmt_num(m);
        case Kind::linear:
            return "p";
        case Kind::abs:
            return "|p|";
    }
    return "?";
}

// ---------------------------------------------------------------- Potential1D

Potential1D Potential1D::sine(double period) {
    if (!(period > 0.0)) throw ConfigError("Sine potential requires period > 0");
    return {Kind::sine, period};
}

double Potential1D::operator()(double y) const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::triangle_wave: {
            const double d = y - std::round(y);
            return std::fabs(d);
        }
        case Kind::parabola_wave: {
            const double d = y - std::round(y);
            return d * d;
        }
        case Kind::sine:
            return std::sin(y * (2.0 * kPi / period));
    }
    return 0.0;
}

double Potential1D::min_value() const { return kind == Kind::sine ? -1.0 : 0.0; }

double Potential1D::max_value() const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::triangle_wave:
            return 0.5;
        case Kind::parabola_wave:
            return 0.25;
        case Kind::sine:
            return 1.0;
    }
    return 0.0;
}

std::string Potential1D::describe() const {
    switch (kind) {
        case Kind::zero:
            return "0";
        case Kind::triangle_wave:
            return "min_k|y-k|";
        case Kind::parabola_wave:
            return "min_k|y-k|^2";
        case Kind::sine:
            return "sin(2*pi*y/" + fmt_num(period) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------- HJBData2D

HJBData2D HJBData2D::example_6_1() {
    HJBData2D d;
    d.control_set = ControlSet::singleton;
    d.drift_base = [](Vec2 y) { return Vec2{std::cos(2.0 * kPi * y.x) / (2.0 * kPi), 0.0}; };
    d.cost_base = [](Vec2 y) { return 1.0 + std::sin(2.0 * kPi * y.x); };
    d.drift_bound = 1.0 / (2.0 * kPi);
    return d;
}

HJBData2D HJBData2D::example_6_2() {
    HJBData2D d = example_6_1();
    d.control_set = ControlSet::unit_ball;
    d.drift_bound = 1.0 / (2.0 * kPi) + 1.0;
    return d;
}

HJBData2D HJBData2D::drift_free(std::function<double(Vec2)> cost) {
    HJBData2D d;
    d.control_set = ControlSet::singleton;
    d.drift_base = [](Vec2) { return Vec2{0.0, 0.0}; };
    d.cost_base = std::move(cost);
    d.drift_bound = 0.0;
    return d;
}

HJBData2D HJBData2D::shifted(Vec2 shift) const {
    HJBData2D d = *this;
    d.drift_base = [b = drift_base, shift](Vec2 y) { return b(y + shift); };
    d.cost_base = [f = cost_base, shift](Vec2 y) { return f(y + shift); };
    return d;
}

// ---------------------------------------------------------------- InitialDatum1D

InitialDatum1D InitialDatum1D::neg_abs() { return {Kind::neg_abs, 1.0, 1.0}; }
InitialDatum1D InitialDatum1D::hat() { return {Kind::hat, 1.0, 1.0}; }

InitialDatum1D InitialDatum1D::double_well(double M) {
    if (!(M >= 0.0)) throw ConfigError("DoubleWell scale M must be nonnegative");
    return {Kind::double_well, M, M};
}

InitialDatum1D InitialDatum1D::power32() { return {Kind::power32, 1.0, kInf}; }
InitialDatum1D InitialDatum1D::capped_parabola() { return {Kind::capped_parabola, 1.0, 1.0}; }

double InitialDatum1D::operator()(double x) const {
    switch (kind) {
        case Kind::neg_abs:
            return -std::fabs(x);
        case Kind::hat:
            return std::max(1.0 - std::fabs(x), 0.0);
        case Kind::double_well:
            return M * std::min(std::fabs(x), std::fabs(x - 0.5) - 0.25);
        case Kind::power32:
            if (x >= 0.0) return 0.0;
            return (2.0 * std::sqrt(2.0) / 9.0) * (-x) * std::sqrt(-x);
        case Kind::capped_parabola:
            return std::max(-0.5 * x * x, std::fabs(x) - 1.5);
    }
    return 0.0;
}

double InitialDatum1D::lipschitz_on(double a, double b) const {
    if (kind != Kind::power32) return lipschitz_bound;
    (void)b;
    // |g'(x)| = (sqrt2 / 3) sqrt(-x), increasing towards -infinity.
    const double left = std::max(-a, 0.0);
    return std::sqrt(2.0) / 3.0 * std::sqrt(left);
}

std::vector<double> InitialDatum1D::kinks() const {
    switch (kind) {
        case Kind::neg_abs:
            return {0.0};
        case Kind::hat:
            return {-1.0, 0.0, 1.0};
        case Kind::double_well:
            return {0.0, 0.125, 0.5};
        case Kind::power32:
            return {0.0};
        case Kind::capped_parabola:
            return {-1.0, 1.0};
    }
    return {};
}

std::string InitialDatum1D::describe() const {
    switch (kind) {
        case Kind::neg_abs:
            return "-|x|";
        case Kind::hat:
            return "max(1-|x|,0)";
        case Kind::double_well:
            return fmt_num(M) + "*min(|x|,|x-1/2|-1/4)";
        case Kind::power32:
            return "(2*sqrt(2)/9)*(-x)^(3/2)";
        case Kind::capped_parabola:
            return "max(-x^2/2,|x|-3/2)";
    }
    return "?";
}

// ---------------------------------------------------------------- operations

double eval_H(const HamiltonianSpec& spec, double y, double p) {
    const auto* sep = std::get_if<Separable>(&spec);
    if (sep == nullptr) throw DomainError("eval_H: scalar arguments need a separable Hamiltonian");
    const double f = sep->flux(p);
    if (sep->potential.kind == Potential1D::Kind::zero) return f;
    return f + sep->potential(y);
}

double eval_H(const HJBData2D& data, Vec2 y, Vec2 p) {
    const Vec2 b = data.drift_base(y);
    const double base = -dot(b, p) - data.cost_base(y);
    if (data.control_set == HJBData2D::ControlSet::singleton) return base;
    // sup_{|alpha| <= 1} -alpha.p = |p|
    return norm(p) + base;
}

double eval_H(const HamiltonianSpec& spec, Vec2 y, Vec2 p) {
    const auto* hjb = std::get_if<HJBData2D>(&spec);
    if (hjb == nullptr) throw DomainError("eval_H: vector arguments need an HJB Hamiltonian");
    return eval_H(*hjb, y, p);
}

double lipschitz_bound_F(const Flux1D& flux, double radius) {
    if (!(radius > 0.0)) throw ConfigError("lipschitz_bound_F: radius must be positive");
    switch (flux.kind) {
        case Flux1D::Kind::linear:
        case Flux1D::Kind::abs:
            return 1.0;
        case Flux1D::Kind::abs_power:
        case Flux1D::Kind::odd_power:
            if (flux.m == 1.0) return std::fabs(flux.c);
            return std::fabs(flux.c) * flux.m * std::pow(radius, flux.m - 1.0);
    }
    return 0.0;
}

double legendre_conjugate(const Flux1D& flux, double v) {
    if (!flux.is_convex()) throw NonConvexFlux("Legendre conjugate requested for non-convex flux " + flux.describe());
    switch (flux.kind) {
        case Flux1D::Kind::linear:
            return v == 1.0 ? 0.0 : kInf;
        case Flux1D::Kind::abs:
            return std::fabs(v) <= 1.0 ? 0.0 : kInf;
        case Flux1D::Kind::abs_power: {
            const double c = flux.c;
            const double m = flux.m;
            if (c == 0.0) return v == 0.0 ? 0.0 : kInf;
            if (m == 1.0) return std::fabs(v) <= c ? 0.0 : kInf;
            // sup attained at |p| = (|v| / (c m))^{1/(m-1)}
            const double av = std::fabs(v);
            if (av == 0.0) return 0.0;
            const double conj = m / (m - 1.0);
            return (1.0 - 1.0 / m) * std::pow(c * m, -1.0 / (m - 1.0)) * std::pow(av, conj);
        }
        case Flux1D::Kind::odd_power:
            break;
    }
    throw NonConvexFlux("unsupported flux");
}

}  // namespace homoghj
