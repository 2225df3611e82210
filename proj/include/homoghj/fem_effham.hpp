#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "homoghj/hamiltonians.hpp"
#include "homoghj/quadrature.hpp"

namespace homoghj {

/// N x N periodic grid on the unit torus; each square [ih,(i+1)h] x [jh,(j+1)h]
/// is split along its lower-left to upper-right diagonal into
///   lower: (i,j), (i+1,j), (i+1,j+1)     upper: (i,j), (i+1,j+1), (i,j+1).
/// Node (i,j) has id j*N + i. Triangle 2*(j*N + i) is the lower one of its square.
struct PeriodicMesh2D {
    int N = 0;
    double h = 0.0;
    std::vector<std::array<int, 3>> triangles;

    std::size_t num_nodes() const { return static_cast<std::size_t>(N) * static_cast<std::size_t>(N); }
    std::size_t num_triangles() const { return triangles.size(); }
    double triangle_area() const { return 0.5 * h * h; }
    int node(int i, int j) const { return ((j % N + N) % N) * N + ((i % N + N) % N); }
    /// Lower-left corner of the square that owns triangle t.
    Vec2 anchor(std::size_t t) const;
    bool is_upper(std::size_t t) const { return (t & 1U) != 0; }
};

/// Requires N >= 2.
PeriodicMesh2D build_mesh(int N);

/// Three edge midpoints per triangle, in the order (v0,v1), (v1,v2), (v2,v0).
Vec2 quadrature_point(const PeriodicMesh2D& mesh, std::size_t t, int q);

struct P1Function {
    std::vector<double> nodal_values;

    /// Exact integral over the torus (mean of the nodal values).
    double integral(const PeriodicMesh2D& mesh) const;
    /// Elementwise integral sum_T area/3 * sum of vertex values.
    double integral_by_elements(const PeriodicMesh2D& mesh) const;
    Vec2 gradient(const PeriodicMesh2D& mesh, std::size_t t) const;
};

/// One control per quadrature point, index 3*t + q.
struct ControlField {
    std::vector<Vec2> alpha;
    friend bool operator==(const ControlField& a, const ControlField& b) = default;
};

struct HowardConfig {
    double sigma = 1.0;
    double tol_policy = 1e-10;
    int max_policy_iters = 100;
    double linear_tol = 1e-12;
    int max_linear_iters = 5000;
    bool warn_below_min_discount = true;
    /// Dense LU is used at or below this N, a preconditioned BiCGSTAB above.
    int dense_max_N = 16;

    void validate() const;
};

struct HowardDiagnostics {
    int policy_iterations = 0;
    double final_policy_residual = 0.0;
    bool min_discount_satisfied = true;
    /// max |alpha^k - alpha^{k-1}| over quadrature points at the last iteration.
    double final_control_change = 0.0;
    /// Euclidean norm of the nonlinear residual vector a(w^k, phi_i) after each iteration.
    std::vector<double> residual_history;
};

struct EffHamResult {
    Vec2 p;
    double sigma = 0.0;
    double h = 0.0;
    double value = 0.0;
    int policy_iterations = 0;
    double final_policy_residual = 0.0;
    bool min_discount_satisfied = true;
    std::vector<double> residual_history;
};

/// Pointwise maximiser of -(b(y_q) + alpha).q - f(y_q) with q = p + Dw.
ControlField select_controls(const PeriodicMesh2D& mesh, const P1Function& w, Vec2 p, const HJBData2D& data);

/// Solves (Dw,Dphi) + sigma (w,phi) - (b.Dw, phi) = (b.p + f, phi) for the frozen controls.
/// `guess` (if non-empty) seeds the iterative solver.
P1Function assemble_and_solve_linear(const PeriodicMesh2D& mesh, const ControlField& field, Vec2 p,
                                     const HJBData2D& data, const HowardConfig& cfg,
                                     const P1Function* guess = nullptr);

/// r_i = (Dw,Dphi_i) + sigma (w,phi_i) + (H(y, p + Dw), phi_i) for every basis function.
std::vector<double> nonlinear_residual(const PeriodicMesh2D& mesh, const P1Function& w, Vec2 p,
                                       const HJBData2D& data, double sigma);

/// Residual of the linear problem for a frozen control field, same layout.
std::vector<double> linear_residual(const PeriodicMesh2D& mesh, const ControlField& field, const P1Function& w,
                                    Vec2 p, const HJBData2D& data, double sigma);

/// Policy iteration from w = 0. Stops when the control field repeats or the
/// nodal update falls below cfg.tol_policy.
P1Function howard_solve(Vec2 p, const HJBData2D& data, const PeriodicMesh2D& mesh, const HowardConfig& cfg,
                        HowardDiagnostics* diag = nullptr);

/// -sigma * integral of the discrete corrector.
EffHamResult eff_ham_approx(Vec2 p, const HJBData2D& data, const HowardConfig& cfg, int N);

/// Effective Hamiltonian of the singleton-control example with b = (cos(2 pi y1)/(2 pi), 0),
/// f = 1 + sin(2 pi y1): the invariant measure is proportional to exp(sin(2 pi y1)/(4 pi^2)) and
///   Hbar = -(1 + int sin(2 pi t) m(t) dt / int m(t) dt), independent of p.
double exact_linear_effham(Vec2 p, const QuadratureConfig& q = {});

/// CSV with header p1,p2,sigma,h,value,iters,residual.
void write_effham_csv(std::ostream& os, const std::vector<EffHamResult>& rows);

}  // namespace homoghj
