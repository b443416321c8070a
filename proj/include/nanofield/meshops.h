/*
 * meshops.h
 * Operations on a built tet mesh: classify nodes/tets into vacuum and
 * material sides of the marked surface, extract one side as a standalone
 * mesh, and low-pass smooth the surface nodes.
 */
#pragma once

#include <vector>

#include "nanofield/tetmesh.h"
#include "nanofield/vec3.h"

namespace nanofield {

// Classifies every node and tet. Non-surface nodes are flooded along mesh
// edges whose endpoints are both non-surface: the component reached from
// the topmost such node is vacuum, the one from the bottommost is
// material. A tet is vacuum iff it has at least one vacuum node (so a tet
// whose nodes are all on the surface is material). Throws if the two
// floods meet (the surface does not separate the mesh) or if some
// non-surface node is reached by neither (a sealed-off pocket).
void separate_domains(TetMesh& mesh);

// Sub-mesh of one domain with nodes renumbered compactly (ascending old
// id). Flags and domains carry over; adjacency is rebuilt. old_of_new, if
// given, receives the source node id for every new node.
TetMesh extract_domain(const TetMesh& mesh, TetDomain which,
                       std::vector<int>* old_of_new = nullptr);

// Neighbor-averaging smoother that alternates a positive (lambda) and a
// negative (mu) diffusion step per iteration, which damps surface noise
// without the shrinkage of plain averaging. Each step moves every movable
// node by f * sum_j w_ij (r_j - r_i) computed from the pre-step positions;
// weights are inverse-distance normalized per node (or equal when
// uniform_weights). Coincident neighbors (zero edge length) are an error.
// lambda = mu = 0 is the identity.
void taubin_smooth(std::vector<Vec3>& pos,
                   const std::vector<std::vector<int>>& neighbors,
                   const std::vector<char>& movable,
                   double lambda, double mu, int iterations,
                   bool uniform_weights = false);

struct InterfaceSmoothStats {
    int triangles = 0;      // vacuum/material interface triangles found
    int movable_nodes = 0;  // surface nodes free to move (box nodes pinned)
};

// Smooths the vacuum/material interface of a domain-separated mesh in
// place. Neighbor graph = edges of the interface triangles; only nodes
// flagged NODE_SURFACE and not NODE_BOUNDARY move.
InterfaceSmoothStats taubin_smooth_interface(TetMesh& mesh, double lambda, double mu,
                                             int iterations,
                                             bool uniform_weights = false);

}  // namespace nanofield
