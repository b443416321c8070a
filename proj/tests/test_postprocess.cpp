// Longest-edge measurement and distance-weighted field smoothing on the
// hex mesh.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "nanofield/delaunay.h"
#include "nanofield/hexmesh.h"
#include "nanofield/postprocess.h"
#include "nanofield/refine.h"
#include "nanofield/rng.h"
#include "nanofield/tetmesh.h"

using namespace nanofield;

namespace {

TetMesh random_mesh(int n_points, uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec3> pts;
    for (int i = 0; i < 8; ++i)
        pts.push_back({10.0 * (i & 1), 10.0 * ((i >> 1) & 1), 10.0 * ((i >> 2) & 1)});
    for (int i = 0; i < n_points; ++i)
        pts.push_back({rng.uniform(0.5, 9.5), rng.uniform(0.5, 9.5), rng.uniform(0.5, 9.5)});
    DelaunayBuilder b;
    b.build(pts);
    return b.take_mesh();
}

}  // namespace

TEST_CASE("longest_edge on known tets") {
    TetMesh m;
    m.nodes = {{0, 0, 0}, {3, 0, 0}, {0, 4, 0}, {0, 0, 1}};
    m.tets = {{0, 1, 2, 3}};
    m.neigh = {{-1, -1, -1, -1}};
    // Edge (1,2) is the 3-4-5 hypotenuse.
    CHECK(longest_edge(m) == doctest::Approx(5.0).epsilon(1e-14));

    // Regular tet with unit edges.
    TetMesh r;
    r.nodes = {{0, 0, 0},
               {1, 0, 0},
               {0.5, std::sqrt(3.0) / 2.0, 0},
               {0.5, std::sqrt(3.0) / 6.0, std::sqrt(6.0) / 3.0}};
    r.tets = {{0, 1, 2, 3}};
    r.neigh = {{-1, -1, -1, -1}};
    CHECK(longest_edge(r) == doctest::Approx(1.0).epsilon(1e-12));

    TetMesh empty;
    CHECK_THROWS_WITH_AS(longest_edge(empty), doctest::Contains("empty"), std::runtime_error);
}

TEST_CASE("longest_edge never grows under refinement") {
    TetMesh m = random_mesh(25, 4u);
    const double before = longest_edge(m);
    DelaunayBuilder b;
    b.build(m.nodes);
    RefineOpts opts;
    opts.q_min = 0.4;
    opts.domain.expand(m.nodes);
    refine_mesh(b, opts);
    const double after = longest_edge(b.take_mesh());
    CHECK(after <= before + 1e-12);
}

TEST_CASE("uniform field is a fixed point; non-vertex nodes pass through") {
    TetMesh m = random_mesh(20, 8u);
    m.tet_domains.assign(m.n_tets(), TetDomain::Vacuum);
    HexMesh hm = split_to_hex(m);
    const double L = longest_edge(m);

    // Uniform field: unchanged everywhere, bit for bit.
    std::vector<Vec3> uniform(hm.n_nodes(), Vec3{1.5, -2.0, 0.75});
    std::vector<Vec3> out = smooth_field(hm, uniform, L);
    for (int i = 0; i < hm.n_nodes(); ++i) {
        CHECK(out[i].x == doctest::Approx(1.5).epsilon(1e-14));
        CHECK(out[i].y == doctest::Approx(-2.0).epsilon(1e-14));
        CHECK(out[i].z == doctest::Approx(0.75).epsilon(1e-14));
    }

    // Random field: only Vertex-kind nodes may change.
    Rng rng(100u);
    std::vector<Vec3> noisy(hm.n_nodes());
    for (auto& v : noisy)
        v = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    out = smooth_field(hm, noisy, L);
    int changed = 0;
    for (int i = 0; i < hm.n_nodes(); ++i) {
        if (hm.node_kinds[i] != HexNodeKind::Vertex) {
            CHECK(out[i] == noisy[i]);  // exact pass-through
        } else if (!(out[i] == noisy[i])) {
            ++changed;
        }
    }
    CHECK(changed > 0);
}

TEST_CASE("smoothing matches an independently derived stencil average") {
    TetMesh m = random_mesh(15, 21u);
    m.tet_domains.assign(m.n_tets(), TetDomain::Vacuum);
    HexMesh hm = split_to_hex(m);
    const double L = 2.5;

    Rng rng(300u);
    std::vector<Vec3> field(hm.n_nodes());
    for (auto& v : field)
        v = {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const std::vector<Vec3> out = smooth_field(hm, field, L);

    for (int i = 0; i < hm.n_nodes(); ++i) {
        if (hm.node_kinds[i] != HexNodeKind::Vertex) continue;
        // Stencil rebuilt here from scratch: nodes sharing a hex with i.
        std::set<int> stencil;
        for (const auto& hx : hm.hexes)
            if (std::find(hx.begin(), hx.end(), i) != hx.end())
                for (int j : hx)
                    if (j != i) stencil.insert(j);
        REQUIRE(!stencil.empty());

        Vec3 acc{0, 0, 0};
        double wsum = 0.0;
        for (int j : stencil) {
            const double w = std::exp(-hm.nodes[i].dist(hm.nodes[j]) / L);
            acc += field[j] * w;
            wsum += w;
        }
        const Vec3 want = acc / wsum;
        CHECK(std::abs(out[i].x - want.x) <= 1e-13);
        CHECK(std::abs(out[i].y - want.y) <= 1e-13);
        CHECK(std::abs(out[i].z - want.z) <= 1e-13);

        // Convex combination: bounded by the stencil extremes per component.
        for (int c = 0; c < 3; ++c) {
            double lo = 1e300, hi = -1e300;
            for (int j : stencil) {
                lo = std::min(lo, field[j][c]);
                hi = std::max(hi, field[j][c]);
            }
            CHECK(out[i][c] >= lo - 1e-12);
            CHECK(out[i][c] <= hi + 1e-12);
        }
    }
}

TEST_CASE("smoothing damps a single-node spike") {
    TetMesh m = random_mesh(20, 55u);
    m.tet_domains.assign(m.n_tets(), TetDomain::Vacuum);
    HexMesh hm = split_to_hex(m);

    // Zero field with one spiked vertex node.
    int spike = -1;
    for (int i = 0; i < hm.n_nodes(); ++i)
        if (hm.node_kinds[i] == HexNodeKind::Vertex) { spike = i; break; }
    REQUIRE(spike >= 0);
    std::vector<Vec3> field(hm.n_nodes(), Vec3{0, 0, 0});
    field[spike] = {0, 0, 100.0};

    const std::vector<Vec3> out = smooth_field(hm, field, longest_edge(m));
    // The spike drops to zero (its own value is excluded from its stencil)...
    CHECK(out[spike].z == 0.0);
    // ...and no other vertex node exceeds it; non-vertex nodes keep zero.
    for (int i = 0; i < hm.n_nodes(); ++i) {
        if (i == spike) continue;
        if (hm.node_kinds[i] == HexNodeKind::Vertex)
            CHECK(out[i].z < 100.0);
        else
            CHECK(out[i].z == 0.0);
    }
}

TEST_CASE("malformed inputs are rejected") {
    TetMesh m = random_mesh(10, 77u);
    m.tet_domains.assign(m.n_tets(), TetDomain::Vacuum);
    HexMesh hm = split_to_hex(m);
    std::vector<Vec3> field(hm.n_nodes(), Vec3{0, 0, 0});

    CHECK_THROWS_WITH_AS(smooth_field(hm, field, 0.0), doctest::Contains("positive"),
                         std::runtime_error);
    std::vector<Vec3> short_field(hm.n_nodes() - 1);
    CHECK_THROWS_WITH_AS(smooth_field(hm, short_field, 1.0), doctest::Contains("match"),
                         std::runtime_error);

    // A vertex node that belongs to no hex: disconnected.
    hm.nodes.push_back({50, 50, 50});
    hm.node_kinds.push_back(HexNodeKind::Vertex);
    field.push_back({0, 0, 0});
    CHECK_THROWS_WITH_AS(smooth_field(hm, field, 1.0), doctest::Contains("disconnected"),
                         std::runtime_error);
}
