#include "nanofield/postprocess.h"

#include <algorithm>
#include <cmath>

#include "nanofield/check.h"

namespace nanofield {

double longest_edge(const TetMesh& mesh) {
    check(mesh.n_tets() > 0, "longest_edge: empty mesh");
    double best = 0.0;
    for (const auto& t : mesh.tets)
        best = std::max(best, tet_longest_edge(mesh.nodes[t[0]], mesh.nodes[t[1]],
                                               mesh.nodes[t[2]], mesh.nodes[t[3]]));
    return best;
}

std::vector<Vec3> smooth_field(const HexMesh& mesh, const std::vector<Vec3>& field,
                               double L) {
    check(L > 0.0, "smooth_field: length scale must be positive");
    check((int)field.size() == mesh.n_nodes(), "smooth_field: field does not match the mesh");
    check((int)mesh.node_kinds.size() == mesh.n_nodes(),
          "smooth_field: mesh has no node kinds");

    // Hexes around each node, CSR-packed.
    std::vector<int> count(mesh.n_nodes(), 0);
    for (const auto& hx : mesh.hexes)
        for (int c = 0; c < 8; ++c) ++count[hx[c]];
    std::vector<int> start(mesh.n_nodes() + 1, 0);
    for (int i = 0; i < mesh.n_nodes(); ++i) start[i + 1] = start[i] + count[i];
    std::vector<int> incident(start.back());
    std::vector<int> fill = start;
    for (int h = 0; h < mesh.n_hexes(); ++h)
        for (int c = 0; c < 8; ++c) incident[fill[mesh.hexes[h][c]]++] = h;

    std::vector<Vec3> out = field;
    std::vector<int> stencil;
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        if (mesh.node_kinds[i] != HexNodeKind::Vertex) continue;
        stencil.clear();
        for (int k = start[i]; k < start[i + 1]; ++k)
            for (int c = 0; c < 8; ++c) {
                const int j = mesh.hexes[incident[k]][c];
                if (j != i) stencil.push_back(j);
            }
        std::sort(stencil.begin(), stencil.end());
        stencil.erase(std::unique(stencil.begin(), stencil.end()), stencil.end());
        if (stencil.empty())
            fail("smooth_field: vertex node " + std::to_string(i) +
                 " belongs to no hex (disconnected node)");

        Vec3 acc{0.0, 0.0, 0.0};
        double wsum = 0.0;
        for (int j : stencil) {
            const double w = std::exp(-mesh.nodes[i].dist(mesh.nodes[j]) / L);
            acc += field[j] * w;
            wsum += w;
        }
        out[i] = acc / wsum;
    }
    return out;
}

}  // namespace nanofield
