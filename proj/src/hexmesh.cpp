#include "nanofield/hexmesh.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>

#include "nanofield/check.h"

namespace nanofield {

namespace {

// Corner c of the reference cube sits at kCornerBits[c] in (xi, eta, zeta).
constexpr int kCornerBits[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
};

int corner_at(int bx, int by, int bz) {
    for (int c = 0; c < 8; ++c)
        if (kCornerBits[c][0] == bx && kCornerBits[c][1] == by && kCornerBits[c][2] == bz)
            return c;
    return -1;
}

// Jacobian determinant of the trilinear map at corner c, from one-sided
// edge differences (the trilinear derivative at a corner is exactly the
// edge vector to the neighbor corner along that axis).
double corner_jacobian(const Vec3 p[8], int c) {
    Vec3 col[3];
    for (int axis = 0; axis < 3; ++axis) {
        int b[3] = {kCornerBits[c][0], kCornerBits[c][1], kCornerBits[c][2]};
        b[axis] ^= 1;
        int nb = corner_at(b[0], b[1], b[2]);
        Vec3 d = p[nb] - p[c];
        col[axis] = kCornerBits[c][axis] ? -d : d;
    }
    return col[0].dot(col[1].cross(col[2]));
}

uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

}  // namespace

double HexMesh::hex_volume(int h) const {
    const auto& hx = hexes[h];
    Vec3 p[8];
    for (int i = 0; i < 8; ++i) p[i] = nodes[hx[i]];

    // 2-point Gauss nodes on [0,1]; det J is at most quadratic per axis,
    // so this quadrature is exact.
    const double ga = 0.5 - 0.5 / std::sqrt(3.0);
    const double gb = 0.5 + 0.5 / std::sqrt(3.0);
    double vol = 0.0;
    for (double x : {ga, gb})
        for (double y : {ga, gb})
            for (double z : {ga, gb}) {
                Vec3 dx{}, dy{}, dz{};
                for (int c = 0; c < 8; ++c) {
                    double fx = kCornerBits[c][0] ? x : 1.0 - x;
                    double fy = kCornerBits[c][1] ? y : 1.0 - y;
                    double fz = kCornerBits[c][2] ? z : 1.0 - z;
                    double sx = kCornerBits[c][0] ? 1.0 : -1.0;
                    double sy = kCornerBits[c][1] ? 1.0 : -1.0;
                    double sz = kCornerBits[c][2] ? 1.0 : -1.0;
                    dx += p[c] * (sx * fy * fz);
                    dy += p[c] * (fx * sy * fz);
                    dz += p[c] * (fx * fy * sz);
                }
                vol += 0.125 * dx.dot(dy.cross(dz));
            }
    return vol;
}

void HexMesh::require_valid() const {
    check(node_kinds.size() == nodes.size(), "hexmesh: node kind array out of step");
    check(hex_parent.size() == hexes.size() && hex_domains.size() == hexes.size(),
          "hexmesh: hex tag arrays out of step");
    check(n_tet_nodes >= 0 && n_tet_nodes <= n_nodes(), "hexmesh: bad vertex block size");
    for (size_t h = 0; h < hexes.size(); ++h) {
        Vec3 p[8];
        for (int i = 0; i < 8; ++i) {
            int n = hexes[h][i];
            check(n >= 0 && n < n_nodes(), "hexmesh: corner id out of range in hex " +
                                               std::to_string(h));
            p[i] = nodes[n];
        }
        for (int c = 0; c < 8; ++c)
            check(corner_jacobian(p, c) > 0.0,
                  "hexmesh: non-positive Jacobian at corner " + std::to_string(c) +
                      " of hex " + std::to_string(h));
    }
}

HexMesh split_to_hex(const TetMesh& mesh) {
    mesh.require_valid();
    const int V = mesh.n_nodes();
    const int T = mesh.n_tets();

    HexMesh out;
    out.nodes = mesh.nodes;
    out.node_kinds.assign(V, HexNodeKind::Vertex);
    out.n_tet_nodes = V;

    // Edge midpoints, discovered in the quadratic-tet edge order so that
    // tet_nodes10 can be filled in the same pass.
    static constexpr int kEdge[6][2] = {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 3}, {2, 3}};
    std::unordered_map<uint64_t, int> edge_id;
    edge_id.reserve(static_cast<size_t>(T) * 4);
    out.tet_nodes10.resize(T);
    for (int t = 0; t < T; ++t) {
        const auto& tt = mesh.tets[t];
        for (int i = 0; i < 4; ++i) out.tet_nodes10[t][i] = tt[i];
        for (int e = 0; e < 6; ++e) {
            int a = tt[kEdge[e][0]], b = tt[kEdge[e][1]];
            auto [it, fresh] = edge_id.try_emplace(edge_key(a, b), out.n_nodes());
            if (fresh) {
                out.nodes.push_back((mesh.nodes[a] + mesh.nodes[b]) * 0.5);
                out.node_kinds.push_back(HexNodeKind::Edge);
            }
            out.tet_nodes10[t][4 + e] = it->second;
        }
    }

    // Face centroids.
    std::map<std::array<int, 3>, int> face_id;
    auto face_node = [&](int a, int b, int c) {
        std::array<int, 3> key{a, b, c};
        std::sort(key.begin(), key.end());
        auto [it, fresh] = face_id.try_emplace(key, out.n_nodes());
        if (fresh) {
            out.nodes.push_back((mesh.nodes[a] + mesh.nodes[b] + mesh.nodes[c]) / 3.0);
            out.node_kinds.push_back(HexNodeKind::Face);
        }
        return it->second;
    };
    for (int t = 0; t < T; ++t)
        for (int k = 0; k < 4; ++k) {
            const auto& tt = mesh.tets[t];
            face_node(tt[TetMesh::face_corners[k][0]], tt[TetMesh::face_corners[k][1]],
                      tt[TetMesh::face_corners[k][2]]);
        }

    // Tet centroids.
    std::vector<int> cell_node(T);
    for (int t = 0; t < T; ++t) {
        const auto& tt = mesh.tets[t];
        cell_node[t] = out.n_nodes();
        out.nodes.push_back(
            (mesh.nodes[tt[0]] + mesh.nodes[tt[1]] + mesh.nodes[tt[2]] + mesh.nodes[tt[3]]) *
            0.25);
        out.node_kinds.push_back(HexNodeKind::Cell);
    }

    // Four hexes per tet, one around each vertex. kOther[k] lists the
    // remaining vertices in an order that keeps (v_k, a, b, c) positively
    // oriented, which makes every hex corner Jacobian positive.
    static constexpr int kOther[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
    out.hexes.reserve(static_cast<size_t>(T) * 4);
    for (int t = 0; t < T; ++t) {
        const auto& tt = mesh.tets[t];
        TetDomain dom = t < static_cast<int>(mesh.tet_domains.size())
                            ? mesh.tet_domains[t]
                            : TetDomain::Unknown;
        for (int k = 0; k < 4; ++k) {
            int v = tt[k];
            int a = tt[kOther[k][0]], b = tt[kOther[k][1]], c = tt[kOther[k][2]];
            int m_va = edge_id.at(edge_key(v, a));
            int m_vb = edge_id.at(edge_key(v, b));
            int m_vc = edge_id.at(edge_key(v, c));
            int f_vab = face_node(v, a, b);
            int f_vac = face_node(v, a, c);
            int f_vbc = face_node(v, b, c);
            out.hexes.push_back({v, m_va, f_vab, m_vb, m_vc, f_vac, cell_node[t], f_vbc});
            out.hex_parent.push_back(t);
            out.hex_domains.push_back(dom);
        }
    }
    return out;
}

}  // namespace nanofield
