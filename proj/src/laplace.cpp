#include "nanofield/laplace.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nanofield/check.h"

namespace nanofield {

namespace {

// Corner coordinates of the reference hex [0,1]^3 in storage order
// (bottom quad counter-clockwise, then top quad).
constexpr int kCornerBits[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                   {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};

// Trilinear shape values and reference-space gradients at (x, y, z).
void shape(double x, double y, double z, double N[8], double dN[8][3]) {
    for (int c = 0; c < 8; ++c) {
        const double fx = kCornerBits[c][0] ? x : 1.0 - x;
        const double fy = kCornerBits[c][1] ? y : 1.0 - y;
        const double fz = kCornerBits[c][2] ? z : 1.0 - z;
        const double sx = kCornerBits[c][0] ? 1.0 : -1.0;
        const double sy = kCornerBits[c][1] ? 1.0 : -1.0;
        const double sz = kCornerBits[c][2] ? 1.0 : -1.0;
        N[c] = fx * fy * fz;
        dN[c][0] = sx * fy * fz;
        dN[c][1] = fx * sy * fz;
        dN[c][2] = fx * fy * sz;
    }
}

struct Mat3 {
    double m[3][3] = {};
    double det() const {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }
    Mat3 inverse(double d) const {
        Mat3 inv;
        inv.m[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / d;
        inv.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / d;
        inv.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / d;
        inv.m[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / d;
        inv.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / d;
        inv.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / d;
        inv.m[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / d;
        inv.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / d;
        inv.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / d;
        return inv;
    }
};

// Jacobian dr/d(xi) from the corner positions and reference gradients.
Mat3 jacobian(const Vec3 p[8], const double dN[8][3]) {
    Mat3 J;
    for (int c = 0; c < 8; ++c)
        for (int a = 0; a < 3; ++a) {
            J.m[0][a] += p[c].x * dN[c][a];
            J.m[1][a] += p[c].y * dN[c][a];
            J.m[2][a] += p[c].z * dN[c][a];
        }
    return J;
}

// Two-point Gauss rule on [0,1].
constexpr double kGaussA = 0.5 - 0.5 / 1.7320508075688772;
constexpr double kGaussB = 0.5 + 0.5 / 1.7320508075688772;
constexpr double kGaussPts[2] = {kGaussA, kGaussB};

}  // namespace

double& SparseSystem::at(int i, int j) {
    check(i >= 0 && i < n && j >= 0 && j < n, "SparseSystem::at: index out of range");
    for (int k = row_start[i]; k < row_start[i + 1]; ++k)
        if (col[k] == j) return val[k];
    fail("SparseSystem::at: entry (" + std::to_string(i) + ", " + std::to_string(j) +
         ") is not in the sparsity pattern");
}

double SparseSystem::row_sum(int i) const {
    double s = 0.0;
    for (int k = row_start[i]; k < row_start[i + 1]; ++k) s += val[k];
    return s;
}

void SparseSystem::mul(const std::vector<double>& x, std::vector<double>& y) const {
    check((int)x.size() == n, "SparseSystem::mul: size mismatch");
    y.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_start[i]; k < row_start[i + 1]; ++k) s += val[k] * x[col[k]];
        y[i] = s;
    }
}

SparseSystem assemble(const HexMesh& mesh) {
    const int n = mesh.n_nodes();
    const int nh = mesh.n_hexes();
    check(n > 0 && nh > 0, "assemble: empty mesh");

    SparseSystem sys;
    sys.n = n;
    sys.rhs.assign(n, 0.0);
    sys.fixed.assign(n, 0);

    // Sparsity pattern: every pair of nodes sharing a hex.
    std::vector<std::vector<int>> adj(n);
    for (int h = 0; h < nh; ++h)
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b) adj[mesh.hexes[h][a]].push_back(mesh.hexes[h][b]);
    sys.row_start.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        auto& r = adj[i];
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        sys.row_start[i + 1] = sys.row_start[i] + (int)r.size();
    }
    sys.col.reserve(sys.row_start[n]);
    for (int i = 0; i < n; ++i) sys.col.insert(sys.col.end(), adj[i].begin(), adj[i].end());
    sys.val.assign(sys.row_start[n], 0.0);

    // Direct index of (i, j) within row i for scatter-adds.
    auto entry = [&sys](int i, int j) -> double& {
        const int lo = sys.row_start[i], hi = sys.row_start[i + 1];
        auto it = std::lower_bound(sys.col.begin() + lo, sys.col.begin() + hi, j);
        return sys.val[it - sys.col.begin()];
    };

    double N[8], dN[8][3];
    for (int h = 0; h < nh; ++h) {
        Vec3 p[8];
        for (int c = 0; c < 8; ++c) p[c] = mesh.nodes[mesh.hexes[h][c]];

        double Ke[8][8] = {};
        for (double gx : kGaussPts)
            for (double gy : kGaussPts)
                for (double gz : kGaussPts) {
                    shape(gx, gy, gz, N, dN);
                    const Mat3 J = jacobian(p, dN);
                    const double det = J.det();
                    if (det <= 0.0)
                        fail("assemble: degenerate element (non-positive Jacobian at a "
                             "quadrature point) in hex " + std::to_string(h));
                    const Mat3 Jinv = J.inverse(det);
                    // Physical gradients g_c = J^{-T} dN_c.
                    double g[8][3];
                    for (int c = 0; c < 8; ++c)
                        for (int a = 0; a < 3; ++a)
                            g[c][a] = Jinv.m[0][a] * dN[c][0] + Jinv.m[1][a] * dN[c][1] +
                                      Jinv.m[2][a] * dN[c][2];
                    const double w = 0.125 * det;
                    for (int a = 0; a < 8; ++a)
                        for (int b = a; b < 8; ++b) {
                            const double v =
                                w * (g[a][0] * g[b][0] + g[a][1] * g[b][1] + g[a][2] * g[b][2]);
                            Ke[a][b] += v;
                            if (b != a) Ke[b][a] += v;
                        }
                }
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b)
                entry(mesh.hexes[h][a], mesh.hexes[h][b]) += Ke[a][b];
    }
    return sys;
}

FluxStats add_top_flux(SparseSystem& sys, const HexMesh& mesh, double flux, double z_top,
                       double eps) {
    check(sys.n == mesh.n_nodes(), "add_top_flux: system does not match the mesh");
    check(!sys.constrained, "add_top_flux: add loads before applying Dirichlet constraints");
    check(eps > 0.0, "add_top_flux: eps must be positive");

    // The quad faces of a hex in storage order: bottom, top, four sides.
    static constexpr int kFace[6][4] = {{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                        {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
    FluxStats stats;
    for (int h = 0; h < mesh.n_hexes(); ++h) {
        for (const auto& f : kFace) {
            bool on_top = true;
            Vec3 q[4];
            for (int c = 0; c < 4; ++c) {
                q[c] = mesh.nodes[mesh.hexes[h][f[c]]];
                if (std::abs(q[c].z - z_top) > eps) { on_top = false; break; }
            }
            if (!on_top) continue;
            ++stats.quads;
            // Consistent load over the bilinear quad, 2x2 Gauss on [0,1]^2.
            for (double gu : kGaussPts)
                for (double gv : kGaussPts) {
                    const double Nq[4] = {(1 - gu) * (1 - gv), gu * (1 - gv), gu * gv,
                                          (1 - gu) * gv};
                    const Vec3 du = (q[1] - q[0]) * (1 - gv) + (q[2] - q[3]) * gv;
                    const Vec3 dv = (q[3] - q[0]) * (1 - gu) + (q[2] - q[1]) * gu;
                    const double dA = du.cross(dv).norm() * 0.25;
                    stats.area += dA;
                    for (int c = 0; c < 4; ++c)
                        sys.rhs[mesh.hexes[h][f[c]]] += flux * Nq[c] * dA;
                }
        }
    }
    check(stats.quads > 0, "add_top_flux: no hex face found on the plane z = " +
                               std::to_string(z_top));
    return stats;
}

void set_dirichlet(SparseSystem& sys, const std::vector<int>& nodes,
                   const std::vector<double>& values) {
    check(!nodes.empty(), "set_dirichlet: empty node set");
    check(nodes.size() == values.size(), "set_dirichlet: nodes/values size mismatch");
    check(!sys.constrained, "set_dirichlet: constraints were already applied");
    std::vector<double> fixed_value(sys.n, 0.0);
    for (size_t k = 0; k < nodes.size(); ++k) {
        const int i = nodes[k];
        check(i >= 0 && i < sys.n, "set_dirichlet: node id out of range");
        sys.fixed[i] = 1;
        fixed_value[i] = values[k];
    }
    for (int i = 0; i < sys.n; ++i) {
        if (sys.fixed[i]) {
            for (int k = sys.row_start[i]; k < sys.row_start[i + 1]; ++k)
                sys.val[k] = (sys.col[k] == i) ? 1.0 : 0.0;
            sys.rhs[i] = fixed_value[i];
        } else {
            for (int k = sys.row_start[i]; k < sys.row_start[i + 1]; ++k) {
                const int j = sys.col[k];
                if (sys.fixed[j]) {
                    sys.rhs[i] -= sys.val[k] * fixed_value[j];
                    sys.val[k] = 0.0;
                }
            }
        }
    }
    sys.constrained = true;
}

void set_dirichlet_zero(SparseSystem& sys, const std::vector<int>& nodes) {
    set_dirichlet(sys, nodes, std::vector<double>(nodes.size(), 0.0));
}

std::vector<double> solve_pcg(const SparseSystem& sys, double tol, int max_iter) {
    check(sys.n > 0, "solve_pcg: empty system");
    check(tol > 0.0 && max_iter > 0, "solve_pcg: tol and max_iter must be positive");
    const int n = sys.n;

    std::vector<double> inv_diag(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double d = 0.0;
        for (int k = sys.row_start[i]; k < sys.row_start[i + 1]; ++k)
            if (sys.col[k] == i) d = sys.val[k];
        check(d > 0.0, "solve_pcg: non-positive diagonal at row " + std::to_string(i));
        inv_diag[i] = 1.0 / d;
    }

    std::vector<double> x(n, 0.0), r = sys.rhs, z(n), p(n), Ap(n);
    double rhs_norm = 0.0;
    for (double v : sys.rhs) rhs_norm += v * v;
    rhs_norm = std::sqrt(rhs_norm);
    if (rhs_norm == 0.0) return x;

    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = 0.0;
    for (int i = 0; i < n; ++i) rz += r[i] * z[i];

    std::vector<double> history;
    for (int it = 0; it < max_iter; ++it) {
        sys.mul(p, Ap);
        double pAp = 0.0;
        for (int i = 0; i < n; ++i) pAp += p[i] * Ap[i];
        if (pAp <= 0.0) fail("solve_pcg: matrix is not positive definite");
        const double alpha = rz / pAp;
        double rnorm = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
            rnorm += r[i] * r[i];
        }
        rnorm = std::sqrt(rnorm);
        history.push_back(rnorm / rhs_norm);
        if (history.back() <= tol) return x;
        double rz_new = 0.0;
        for (int i = 0; i < n; ++i) {
            z[i] = inv_diag[i] * r[i];
            rz_new += r[i] * z[i];
        }
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }

    std::ostringstream msg;
    msg << "solve_pcg: no convergence to " << tol << " within " << max_iter
        << " iterations; relative residual history:";
    const int show = 8;
    for (size_t k = 0; k < history.size(); ++k) {
        if ((int)k < show || (int)k >= (int)history.size() - show)
            msg << " " << history[k];
        else if ((int)k == show)
            msg << " ...";
    }
    fail(msg.str());
}

std::vector<Vec3> compute_field(const HexMesh& mesh, const std::vector<double>& phi) {
    check((int)phi.size() == mesh.n_nodes(), "compute_field: phi does not match the mesh");
    std::vector<Vec3> field(mesh.n_nodes(), Vec3{0.0, 0.0, 0.0});
    std::vector<int> count(mesh.n_nodes(), 0);

    double N[8], dN[8][3];
    for (int h = 0; h < mesh.n_hexes(); ++h) {
        Vec3 p[8];
        for (int c = 0; c < 8; ++c) p[c] = mesh.nodes[mesh.hexes[h][c]];
        for (int c = 0; c < 8; ++c) {
            shape(kCornerBits[c][0], kCornerBits[c][1], kCornerBits[c][2], N, dN);
            const Mat3 J = jacobian(p, dN);
            const double det = J.det();
            if (det <= 0.0)
                fail("compute_field: degenerate element (non-positive Jacobian) in hex " +
                     std::to_string(h));
            const Mat3 Jinv = J.inverse(det);
            // grad(Phi) in reference space, then mapped: J^{-T} sum_c phi_c dN_c.
            double gref[3] = {0.0, 0.0, 0.0};
            for (int cc = 0; cc < 8; ++cc)
                for (int a = 0; a < 3; ++a) gref[a] += phi[mesh.hexes[h][cc]] * dN[cc][a];
            Vec3 g{Jinv.m[0][0] * gref[0] + Jinv.m[1][0] * gref[1] + Jinv.m[2][0] * gref[2],
                   Jinv.m[0][1] * gref[0] + Jinv.m[1][1] * gref[1] + Jinv.m[2][1] * gref[2],
                   Jinv.m[0][2] * gref[0] + Jinv.m[1][2] * gref[1] + Jinv.m[2][2] * gref[2]};
            const int node = mesh.hexes[h][c];
            field[node] -= g;
            ++count[node];
        }
    }
    for (int i = 0; i < mesh.n_nodes(); ++i)
        if (count[i] > 0) field[i] = field[i] / (double)count[i];
    return field;
}

}  // namespace nanofield
