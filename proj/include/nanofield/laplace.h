/*
 * laplace.h
 * FEM solution of the potential on the vacuum hex mesh: trilinear elements,
 * 2x2x2 Gauss quadrature, fixed potential on the material surface, uniform
 * normal-derivative load on the box top, natural (zero-flux) condition on
 * the lateral walls. The potential gradient is recovered per node by
 * averaging the element gradients of all incident hexes.
 */
#pragma once

#include <string>
#include <vector>

#include "nanofield/hexmesh.h"
#include "nanofield/vec3.h"

namespace nanofield {

// Symmetric sparse matrix in CSR form plus the right-hand side. Dirichlet
// constraints are eliminated symmetrically: constrained rows/columns are
// zeroed, the diagonal set to 1 and the rhs carries the fixed value, so
// the system stays symmetric positive definite.
struct SparseSystem {
    int n = 0;
    std::vector<int> row_start;
    std::vector<int> col;
    std::vector<double> val;
    std::vector<double> rhs;
    std::vector<char> fixed;  // per-node Dirichlet flag
    bool constrained = false;

    double& at(int i, int j);          // existing entry (i, j); throws if absent
    double row_sum(int i) const;
    void mul(const std::vector<double>& x, std::vector<double>& y) const;  // y = A x
};

// Stiffness assembly over all hexes: integral of grad(phi_a) . grad(phi_b)
// per element, scatter-added. Throws if any element has a non-positive
// Jacobian determinant at a quadrature point, naming the hex.
SparseSystem assemble(const HexMesh& mesh);

struct FluxStats {
    int quads = 0;      // boundary quads found on the top plane
    double area = 0.0;  // their total area
};

// Adds the consistent load for a uniform normal derivative `flux` =
// dPhi/dn over every hex face whose 4 corners lie at z = z_top (within
// eps). The load entries of one quad sum to flux * quad area. For an
// applied upward field E0 (with Phi ~ -E0 z far away), pass flux = -E0.
FluxStats add_top_flux(SparseSystem& sys, const HexMesh& mesh, double flux,
                       double z_top, double eps);

// Fixes Phi at the given nodes (batch; one call per system). Rows and
// columns are eliminated symmetrically. Throws if nodes is empty or the
// system was already constrained.
void set_dirichlet(SparseSystem& sys, const std::vector<int>& nodes,
                   const std::vector<double>& values);
void set_dirichlet_zero(SparseSystem& sys, const std::vector<int>& nodes);

// Jacobi-preconditioned conjugate gradient to relative residual <= tol.
// Throws on non-convergence, quoting the residual history.
std::vector<double> solve_pcg(const SparseSystem& sys, double tol, int max_iter);

// Nodal field E = -grad(Phi): the gradient of each incident hex is
// evaluated at the node's corner and averaged.
std::vector<Vec3> compute_field(const HexMesh& mesh, const std::vector<double>& phi);

}  // namespace nanofield
