/*
 * hexmesh.h
 * Hexahedral mesh obtained by splitting every tetrahedron into four hexes:
 * one new node per unique edge (midpoint), face (centroid) and tet
 * (centroid); each hex connects a tet vertex to three edge nodes, three
 * face nodes and the tet node. The first n_tet_nodes nodes keep their
 * tet-mesh ids, so tet-mesh fields carry over index-for-index.
 */
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nanofield/tetmesh.h"
#include "nanofield/vec3.h"

namespace nanofield {

enum class HexNodeKind : uint8_t {
    Vertex = 0,  // original tet-mesh node
    Edge,        // edge midpoint
    Face,        // face centroid
    Cell,        // tet centroid
};

struct HexMesh {
    std::vector<Vec3> nodes;
    std::vector<HexNodeKind> node_kinds;
    // Hex corners in the usual order: bottom quad 0-3 counterclockwise,
    // top quad 4-7 above it (corner 4 over corner 0).
    std::vector<std::array<int, 8>> hexes;
    std::vector<int> hex_parent;          // parent tet id per hex
    std::vector<TetDomain> hex_domains;   // copied from the parent tet
    // Per parent tet: its 4 vertices followed by the 6 edge midpoints in
    // the order (0,1), (1,2), (2,0), (0,3), (1,3), (2,3) — the node layout
    // of a 10-node quadratic tetrahedron.
    std::vector<std::array<int, 10>> tet_nodes10;
    int n_tet_nodes = 0;  // leading block of nodes shared with the tet mesh

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_hexes() const { return static_cast<int>(hexes.size()); }

    // Exact volume of the trilinear image of the unit cube (2x2x2 Gauss
    // quadrature integrates the Jacobian determinant without error).
    double hex_volume(int h) const;

    // Throws unless parallel arrays agree and every hex has a positive
    // Jacobian determinant at all 8 corners.
    void require_valid() const;
};

// Splits every tet into 4 hexes. Shared edge/face nodes are created once;
// the node count is always (tet nodes) + (unique edges) + (unique faces) +
// (tets).
HexMesh split_to_hex(const TetMesh& mesh);

}  // namespace nanofield
