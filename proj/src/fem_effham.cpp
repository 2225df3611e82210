#include "homoghj/fem_effham.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "homoghj/errors.hpp"

namespace homoghj {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

constexpr int kLowerOffset[3][2] = {{0, 0}, {1, 0}, {1, 1}};
constexpr int kUpperOffset[3][2] = {{0, 0}, {1, 1}, {0, 1}};
// gradients of the three barycentric basis functions, in units of 1/h
constexpr double kLowerGrad[3][2] = {{-1.0, 0.0}, {1.0, -1.0}, {0.0, 1.0}};
constexpr double kUpperGrad[3][2] = {{0.0, -1.0}, {1.0, 0.0}, {-1.0, 1.0}};
// basis values at the edge midpoints (v0,v1), (v1,v2), (v2,v0)
constexpr double kPhiAtQ[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};

Vec2 basis_gradient(const PeriodicMesh2D& mesh, std::size_t t, int a) {
    const auto& g = mesh.is_upper(t) ? kUpperGrad[a] : kLowerGrad[a];
    return {g[0] / mesh.h, g[1] / mesh.h};
}

double sup_hamiltonian(const HJBData2D& data, Vec2 y, Vec2 q) { return eval_H(data, y, q); }

/// Hamiltonian at a quadrature point for a frozen control.
double frozen_hamiltonian(const HJBData2D& data, Vec2 y, Vec2 alpha, Vec2 q) {
    return -dot(data.drift(y, alpha), q) - data.cost_base(y);
}

template <class HamAtQ>
std::vector<double> residual_impl(const PeriodicMesh2D& mesh, const P1Function& w, Vec2 p, double sigma,
                                  HamAtQ&& ham) {
    std::vector<double> r(mesh.num_nodes(), 0.0);
    const double area = mesh.triangle_area();
    const double wq = area / 3.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec2 dw = w.gradient(mesh, t);
        const Vec2 q = p + dw;
        double local[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < 3; ++a) local[a] += area * dot(basis_gradient(mesh, t, a), dw);
        for (int k = 0; k < 3; ++k) {
            const Vec2 y = quadrature_point(mesh, t, k);
            double wval = 0.0;
            for (int a = 0; a < 3; ++a) wval += kPhiAtQ[k][a] * w.nodal_values[tri[a]];
            const double integrand = sigma * wval + ham(t, k, y, q);
            for (int a = 0; a < 3; ++a) local[a] += wq * integrand * kPhiAtQ[k][a];
        }
        for (int a = 0; a < 3; ++a) r[tri[a]] += local[a];
    }
    return r;
}

/// Fixed sparsity pattern with precomputed value slots for every local (a, b) pair.
class Assembler {
public:
    explicit Assembler(const PeriodicMesh2D& mesh) : mesh_(mesh) {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(mesh.num_triangles() * 9);
        for (const auto& tri : mesh.triangles) {
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) trips.emplace_back(tri[a], tri[b], 0.0);
        }
        const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
        A_.resize(n, n);
        A_.setFromTriplets(trips.begin(), trips.end());
        A_.makeCompressed();
        slots_.resize(mesh.num_triangles() * 9);
        for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
            const auto& tri = mesh.triangles[t];
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    slots_[t * 9 + a * 3 + b] = static_cast<int>(&A_.coeffRef(tri[a], tri[b]) - A_.valuePtr());
        }
    }

    void assemble(const ControlField& field, Vec2 p, const HJBData2D& data, double sigma, Eigen::VectorXd& rhs) {
        if (field.alpha.size() != mesh_.num_triangles() * 3) {
            throw ConfigError("control field does not match the mesh quadrature layout");
        }
        std::fill(A_.valuePtr(), A_.valuePtr() + A_.nonZeros(), 0.0);
        rhs.setZero(static_cast<Eigen::Index>(mesh_.num_nodes()));
        double* vals = A_.valuePtr();
        const double area = mesh_.triangle_area();
        const double wq = area / 3.0;
        for (std::size_t t = 0; t < mesh_.num_triangles(); ++t) {
            const auto& tri = mesh_.triangles[t];
            Vec2 grad[3];
            for (int a = 0; a < 3; ++a) grad[a] = basis_gradient(mesh_, t, a);
            double local[3][3];
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) local[a][b] = area * dot(grad[a], grad[b]);
            double load[3] = {0.0, 0.0, 0.0};
            for (int k = 0; k < 3; ++k) {
                const Vec2 y = quadrature_point(mesh_, t, k);
                const Vec2 drift = data.drift(y, field.alpha[t * 3 + k]);
                const double source = dot(drift, p) + data.cost_base(y);
                for (int a = 0; a < 3; ++a) {
                    const double pa = kPhiAtQ[k][a];
                    if (pa == 0.0) continue;
                    load[a] += wq * source * pa;
                    for (int b = 0; b < 3; ++b) {
                        local[a][b] += wq * (sigma * kPhiAtQ[k][b] - dot(drift, grad[b])) * pa;
                    }
                }
            }
            for (int a = 0; a < 3; ++a) {
                rhs[tri[a]] += load[a];
                for (int b = 0; b < 3; ++b) vals[slots_[t * 9 + a * 3 + b]] += local[a][b];
            }
        }
    }

    const SpMat& matrix() const { return A_; }

private:
    const PeriodicMesh2D& mesh_;
    SpMat A_;
    std::vector<int> slots_;
};

Eigen::VectorXd solve_system(const SpMat& A, const Eigen::VectorXd& rhs, const HowardConfig& cfg, int N,
                             const Eigen::VectorXd* guess) {
    if (N <= cfg.dense_max_N) {
        const Eigen::MatrixXd dense(A);
        Eigen::VectorXd x = dense.partialPivLu().solve(rhs);
        if (!x.allFinite()) throw LinearSolveFailure("dense LU produced non-finite values");
        return x;
    }
    Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> solver;
    solver.setTolerance(cfg.linear_tol);
    solver.setMaxIterations(cfg.max_linear_iters);
    solver.compute(A);
    if (solver.info() != Eigen::Success) throw LinearSolveFailure("incomplete LU factorisation failed");
    Eigen::VectorXd x;
    if (guess != nullptr) {
        x = solver.solveWithGuess(rhs, *guess);
    } else {
        x = solver.solve(rhs);
    }
    if (solver.info() != Eigen::Success || !x.allFinite()) {
        throw LinearSolveFailure("BiCGSTAB stopped after " + std::to_string(solver.iterations()) +
                                 " iterations with relative residual " + std::to_string(solver.error()));
    }
    return x;
}

P1Function to_p1(const Eigen::VectorXd& x) { return {std::vector<double>(x.data(), x.data() + x.size())}; }

Eigen::VectorXd to_vec(const P1Function& w) {
    return Eigen::Map<const Eigen::VectorXd>(w.nodal_values.data(), static_cast<Eigen::Index>(w.nodal_values.size()));
}

double l2norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

PeriodicMesh2D build_mesh(int N) {
    if (N < 2) throw ConfigError("periodic mesh needs N >= 2");
    PeriodicMesh2D m;
    m.N = N;
    m.h = 1.0 / N;
    m.triangles.reserve(2 * static_cast<std::size_t>(N) * N);
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) {
            std::array<int, 3> lower{}, upper{};
            for (int a = 0; a < 3; ++a) {
                lower[a] = m.node(i + kLowerOffset[a][0], j + kLowerOffset[a][1]);
                upper[a] = m.node(i + kUpperOffset[a][0], j + kUpperOffset[a][1]);
            }
            m.triangles.push_back(lower);
            m.triangles.push_back(upper);
        }
    }
    return m;
}

Vec2 PeriodicMesh2D::anchor(std::size_t t) const {
    const std::size_t square = t / 2;
    const auto i = static_cast<double>(square % static_cast<std::size_t>(N));
    const auto j = static_cast<double>(square / static_cast<std::size_t>(N));
    return {i * h, j * h};
}

Vec2 quadrature_point(const PeriodicMesh2D& mesh, std::size_t t, int q) {
    const auto& off = mesh.is_upper(t) ? kUpperOffset : kLowerOffset;
    const int a = q;
    const int b = (q + 1) % 3;
    const Vec2 base = mesh.anchor(t);
    return {base.x + 0.5 * (off[a][0] + off[b][0]) * mesh.h, base.y + 0.5 * (off[a][1] + off[b][1]) * mesh.h};
}

double P1Function::integral(const PeriodicMesh2D& mesh) const {
    double s = 0.0;
    for (double v : nodal_values) s += v;
    return s / static_cast<double>(mesh.num_nodes());
}

double P1Function::integral_by_elements(const PeriodicMesh2D& mesh) const {
    double s = 0.0;
    for (const auto& tri : mesh.triangles) {
        s += mesh.triangle_area() / 3.0 * (nodal_values[tri[0]] + nodal_values[tri[1]] + nodal_values[tri[2]]);
    }
    return s;
}

Vec2 P1Function::gradient(const PeriodicMesh2D& mesh, std::size_t t) const {
    const auto& tri = mesh.triangles[t];
    Vec2 g{};
    for (int a = 0; a < 3; ++a) g = g + nodal_values[tri[a]] * basis_gradient(mesh, t, a);
    return g;
}

void HowardConfig::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
    if (!(tol_policy > 0.0) || !(linear_tol > 0.0)) throw ConfigError("tolerances must be positive");
    if (max_policy_iters < 1 || max_linear_iters < 1) throw ConfigError("iteration limits must be positive");
}

ControlField select_controls(const PeriodicMesh2D& mesh, const P1Function& w, Vec2 p, const HJBData2D& data) {
    ControlField field;
    field.alpha.assign(mesh.num_triangles() * 3, Vec2{});
    if (data.control_set == HJBData2D::ControlSet::singleton) return field;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const Vec2 q = p + w.gradient(mesh, t);
        const double len = norm(q);
        const Vec2 alpha = len > 1e-14 ? (-1.0 / len) * q : Vec2{};
        for (int k = 0; k < 3; ++k) field.alpha[t * 3 + k] = alpha;
    }
    return field;
}

P1Function assemble_and_solve_linear(const PeriodicMesh2D& mesh, const ControlField& field, Vec2 p,
                                     const HJBData2D& data, const HowardConfig& cfg, const P1Function* guess) {
    cfg.validate();
    Assembler asmb(mesh);
    Eigen::VectorXd rhs;
    asmb.assemble(field, p, data, cfg.sigma, rhs);
    Eigen::VectorXd g0;
    if (guess != nullptr) g0 = to_vec(*guess);
    return to_p1(solve_system(asmb.matrix(), rhs, cfg, mesh.N, guess != nullptr ? &g0 : nullptr));
}

std::vector<double> nonlinear_residual(const PeriodicMesh2D& mesh, const P1Function& w, Vec2 p,
                                       const HJBData2D& data, double sigma) {
    return residual_impl(mesh, w, p, sigma,
                         [&](std::size_t, int, Vec2 y, Vec2 q) { return sup_hamiltonian(data, y, q); });
}

std::vector<double> linear_residual(const PeriodicMesh2D& mesh, const ControlField& field, const P1Function& w,
                                    Vec2 p, const HJBData2D& data, double sigma) {
    return residual_impl(mesh, w, p, sigma, [&](std::size_t t, int k, Vec2 y, Vec2 q) {
        return frozen_hamiltonian(data, y, field.alpha[t * 3 + k], q);
    });
}

P1Function howard_solve(Vec2 p, const HJBData2D& data, const PeriodicMesh2D& mesh, const HowardConfig& cfg,
                        HowardDiagnostics* diag) {
    cfg.validate();
    HowardDiagnostics local;
    HowardDiagnostics& d = diag != nullptr ? *diag : local;
    d = HowardDiagnostics{};
    d.min_discount_satisfied = cfg.sigma > data.drift_bound * data.drift_bound / 4.0;
    if (!d.min_discount_satisfied && cfg.warn_below_min_discount) {
        std::fprintf(stderr, "warning: sigma = %g is at or below the strong-monotonicity bound %g\n", cfg.sigma,
                     data.drift_bound * data.drift_bound / 4.0);
    }

    Assembler asmb(mesh);
    Eigen::VectorXd rhs;
    P1Function w{std::vector<double>(mesh.num_nodes(), 0.0)};
    ControlField field = select_controls(mesh, w, p, data);
    for (int k = 1; k <= cfg.max_policy_iters; ++k) {
        asmb.assemble(field, p, data, cfg.sigma, rhs);
        const Eigen::VectorXd guess = to_vec(w);
        P1Function next = to_p1(solve_system(asmb.matrix(), rhs, cfg, mesh.N, &guess));
        double delta = 0.0;
        for (std::size_t i = 0; i < next.nodal_values.size(); ++i) {
            delta = std::max(delta, std::fabs(next.nodal_values[i] - w.nodal_values[i]));
        }
        w = std::move(next);
        d.policy_iterations = k;
        d.residual_history.push_back(l2norm(nonlinear_residual(mesh, w, p, data, cfg.sigma)));
        ControlField next_field = select_controls(mesh, w, p, data);
        d.final_control_change = 0.0;
        for (std::size_t i = 0; i < field.alpha.size(); ++i) {
            d.final_control_change = std::max(d.final_control_change, norm(next_field.alpha[i] - field.alpha[i]));
        }
        if (next_field == field) {
            // the next linear problem is the one just solved
            d.final_policy_residual = 0.0;
            return w;
        }
        if (delta <= cfg.tol_policy) {
            d.final_policy_residual = delta;
            return w;
        }
        field = std::move(next_field);
    }
    throw NoConvergence("policy iteration did not settle within " + std::to_string(cfg.max_policy_iters) +
                        " iterations (sigma = " + std::to_string(cfg.sigma) + ")");
}

EffHamResult eff_ham_approx(Vec2 p, const HJBData2D& data, const HowardConfig& cfg, int N) {
    const PeriodicMesh2D mesh = build_mesh(N);
    HowardDiagnostics diag;
    const P1Function w = howard_solve(p, data, mesh, cfg, &diag);
    EffHamResult r;
    r.p = p;
    r.sigma = cfg.sigma;
    r.h = mesh.h;
    r.value = -cfg.sigma * w.integral(mesh);
    r.policy_iterations = diag.policy_iterations;
    r.final_policy_residual = diag.final_policy_residual;
    r.min_discount_satisfied = diag.min_discount_satisfied;
    r.residual_history = std::move(diag.residual_history);
    return r;
}

double exact_linear_effham(Vec2 /*p*/, const QuadratureConfig& q) {
    const double k = 1.0 / (4.0 * kPi * kPi);
    auto weight = [k](double t) { return std::exp(k * std::sin(2.0 * kPi * t)); };
    const double num = integrate_adaptive([&](double t) { return std::sin(2.0 * kPi * t) * weight(t); }, 0.0, 1.0, q).value;
    const double den = integrate_adaptive(weight, 0.0, 1.0, q).value;
    return -(1.0 + num / den);
}

void write_effham_csv(std::ostream& os, const std::vector<EffHamResult>& rows) {
    os << "p1,p2,sigma,h,value,iters,residual\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", r.p.x, r.p.y, r.sigma, r.h, r.value,
                      r.policy_iterations, r.final_policy_residual);
        os << buf;
    }
}

}  // namespace homoghj
