/*
 * postprocess.h
 * Field smoothing on the hex mesh: the value at every tet-vertex node is
 * replaced by the distance-weighted average (weights exp(-d/L)) over the
 * other nodes of all hexes containing it. Mid-edge, face and cell nodes
 * pass through unchanged. Suppresses the spiky field values that trilinear
 * gradient recovery produces at sharp vertex nodes.
 */
#pragma once

#include <vector>

#include "nanofield/hexmesh.h"
#include "nanofield/tetmesh.h"
#include "nanofield/vec3.h"

namespace nanofield {

// Longest tet edge in the mesh; the smoothing length scale.
double longest_edge(const TetMesh& mesh);

// Returns a copy of `field` where every node of kind Vertex carries
// sum_j w_ij field_j / sum_j w_ij over its stencil (all nodes sharing a
// hex with i, excluding i), with w_ij = exp(-|r_i - r_j| / L).
// Component-wise on vectors. Throws if L <= 0, the field does not match
// the mesh, or a vertex node belongs to no hex (disconnected node).
std::vector<Vec3> smooth_field(const HexMesh& mesh, const std::vector<Vec3>& field,
                               double L);

}  // namespace nanofield
