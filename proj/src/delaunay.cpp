/*
 * delaunay.cpp
 * Bowyer-Watson construction with exact predicates. The conflict cavity of
 * each inserted point is grown by breadth-first search over tets whose
 * circumsphere strictly contains the point; with sign-exact tests the cavity
 * is star-shaped around the point, so every new tet has strictly positive
 * volume by construction.
 */
#include "nanofield/delaunay.h"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>

#include "nanofield/check.h"
#include "nanofield/hilbert.h"
#include "nanofield/predicates.h"

namespace nanofield {

namespace {

inline uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

}  // namespace

void DelaunayBuilder::build(const std::vector<Vec3>& pts) {
    check(!built_ && tets_.empty(), "DelaunayBuilder: build() called twice");
    check(!pts.empty(), "DelaunayBuilder: no input points");
    for (const Vec3& p : pts) check(p.finite(), "DelaunayBuilder: non-finite input point");

    pts_ = pts;
    const int n = static_cast<int>(pts_.size());
    n_super_base_ = n;

    Aabb box;
    for (const Vec3& p : pts_) box.expand(p);
    const Vec3 c = box.center();
    const double h = std::max(box.max_extent(), 1.0) * super_scale_;
    // Eight corner nodes of the super-box, ids n..n+7 (bit 0 -> x, bit 1 -> y,
    // bit 2 -> z). They are appended after the real points so real node ids
    // never shift when the box is removed.
    for (int i = 0; i < 8; ++i)
        pts_.push_back({c.x + ((i & 1) ? h : -h),
                        c.y + ((i & 2) ? h : -h),
                        c.z + ((i & 4) ? h : -h)});

    // Six tets around the main diagonal (corner 0 to corner 7) tile the box.
    static const int kAxisPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& perm : kAxisPerm) {
        const int m1 = 1 << perm[0];
        const int m2 = m1 | (1 << perm[1]);
        int a = n, b = n + m1, cc = n + m2, d = n + 7;
        if (orient3d(pts_[a], pts_[b], pts_[cc], pts_[d]) < 0) std::swap(b, cc);
        new_tet(a, b, cc, d);
    }
    std::map<std::array<int, 3>, std::pair<int, int>> fmap;
    for (int t = 0; t < static_cast<int>(tets_.size()); ++t) {
        for (int k = 0; k < 4; ++k) {
            std::array<int, 3> f = {tets_[t].v[TetMesh::face_corners[k][0]],
                                    tets_[t].v[TetMesh::face_corners[k][1]],
                                    tets_[t].v[TetMesh::face_corners[k][2]]};
            std::sort(f.begin(), f.end());
            auto it = fmap.find(f);
            if (it == fmap.end()) {
                fmap.emplace(f, std::make_pair(t, k));
            } else {
                tets_[t].nb[k] = it->second.first;
                tets_[it->second.first].nb[it->second.second] = t;
            }
        }
    }
    last_ = 0;

    // Insert the real points along a Hilbert curve so each walk starts next
    // to its target.
    const std::vector<int> order = hilbert_order(pts, 21);
    for (int id : order)
        check(insert_node(id) >= 0,
              "DelaunayBuilder: duplicate input point (node " + std::to_string(id) + ")");

    remove_super();
    built_ = true;
}

int DelaunayBuilder::insert(const Vec3& p) {
    check(built_, "DelaunayBuilder: insert() before build()");
    check(p.finite(), "DelaunayBuilder: non-finite insertion point");
    pts_.push_back(p);
    const int id = static_cast<int>(pts_.size()) - 1;
    int r;
    try {
        r = insert_node(id);
    } catch (...) {
        pts_.pop_back();
        throw;
    }
    if (r < 0) pts_.pop_back();
    return r;
}

int DelaunayBuilder::insert_node(int pid) {
    const Vec3 p = pts_[pid];
    bool on_vertex = false;
    int vertex_id = -1;
    const int t0 = locate_from(p, last_, on_vertex, vertex_id);
    check(t0 >= 0, "DelaunayBuilder: insertion point outside the triangulated region");
    if (on_vertex) return -1;

    // A non-vertex point in the closure of t0 is strictly inside t0's
    // circumsphere (interior point, chord of the sphere, or interior of a
    // face triangle inscribed in it).
    check(in_ball(t0, p) > 0, "DelaunayBuilder: located tet does not conflict with the point");

    // Grow the conflict cavity. Stamps: +epoch in cavity, -epoch tested out.
    ++epoch_;
    cavity_.clear();
    stack_.clear();
    faces_.clear();
    mark_[t0] = epoch_;
    stack_.push_back(t0);
    cavity_.push_back(t0);
    while (!stack_.empty()) {
        const int t = stack_.back();
        stack_.pop_back();
        for (int k = 0; k < 4; ++k) {
            const int u = tets_[t].nb[k];
            const int fa = tets_[t].v[TetMesh::face_corners[k][0]];
            const int fb = tets_[t].v[TetMesh::face_corners[k][1]];
            const int fc = tets_[t].v[TetMesh::face_corners[k][2]];
            if (u < 0) {
                faces_.push_back({fa, fb, fc, -1, -1});
                continue;
            }
            if (mark_[u] == epoch_) continue;  // internal face
            if (mark_[u] != -epoch_) {
                if (in_ball(u, p) > 0) {
                    mark_[u] = epoch_;
                    stack_.push_back(u);
                    cavity_.push_back(u);
                    continue;
                }
                mark_[u] = -epoch_;
            }
            int outer_k = -1;
            for (int j = 0; j < 4; ++j)
                if (tets_[u].nb[j] == t) outer_k = j;
            faces_.push_back({fa, fb, fc, u, outer_k});
        }
    }
    stats.inserts += 1;
    stats.cavity_tets += static_cast<long>(cavity_.size());

    // Retire the cavity slots before allocating replacements.
    for (int t : cavity_) {
        tets_[t].alive = false;
        free_.push_back(t);
    }

    // One new tet per boundary face, apex at the new point. Siblings of the
    // fan share the faces through p; they are glued across the boundary
    // edges they have in common.
    std::unordered_map<uint64_t, std::pair<int, int>> open;
    open.reserve(faces_.size() * 3);
    int first_new = -1;
    for (const BFace& f : faces_) {
        check(orient3d(pts_[f.a], pts_[f.b], pts_[f.c], p) > 0,
              "DelaunayBuilder: cavity boundary face not visible from the point");
        const int nt = new_tet(f.a, f.b, f.c, pid);
        if (first_new < 0) first_new = nt;
        tets_[nt].nb[3] = f.outer;
        if (f.outer >= 0) tets_[f.outer].nb[f.outer_k] = nt;
        // Side face i sits opposite base corner i and contains the base edge
        // that skips it.
        const int base[3] = {f.a, f.b, f.c};
        for (int i = 0; i < 3; ++i) {
            const uint64_t key = edge_key(base[(i + 1) % 3], base[(i + 2) % 3]);
            auto it = open.find(key);
            if (it == open.end()) {
                open.emplace(key, std::make_pair(nt, i));
            } else {
                tets_[nt].nb[i] = it->second.first;
                tets_[it->second.first].nb[it->second.second] = nt;
                open.erase(it);
            }
        }
    }
    check(open.empty(), "DelaunayBuilder: cavity boundary is not a closed surface");
    last_ = first_new;
    return pid;
}

int DelaunayBuilder::locate_from(const Vec3& p, int start, bool& on_vertex,
                                 int& vertex_id) const {
    on_vertex = false;
    vertex_id = -1;
    int t = start;
    if (t < 0 || t >= static_cast<int>(tets_.size()) || !tets_[t].alive) {
        t = -1;
        for (int i = 0; i < static_cast<int>(tets_.size()); ++i)
            if (tets_[i].alive) {
                t = i;
                break;
            }
        check(t >= 0, "DelaunayBuilder: empty triangulation");
    }
    const long cap = static_cast<long>(tets_.size()) + 64;
    long steps = 0;
    bool walking = true;
    while (walking) {
        if (++steps > cap) break;  // fall through to the exhaustive scan
        stats.walk_steps += 1;
        int cand[4];
        int nc = 0;
        for (int k = 0; k < 4; ++k) {
            const Vec3& fa = pts_[tets_[t].v[TetMesh::face_corners[k][0]]];
            const Vec3& fb = pts_[tets_[t].v[TetMesh::face_corners[k][1]]];
            const Vec3& fc = pts_[tets_[t].v[TetMesh::face_corners[k][2]]];
            if (orient3d(fa, fb, fc, p) < 0) cand[nc++] = k;
        }
        if (nc == 0) {
            for (int k = 0; k < 4; ++k)
                if (pts_[tets_[t].v[k]] == p) {
                    on_vertex = true;
                    vertex_id = tets_[t].v[k];
                }
            return t;
        }
        int k = cand[0];
        if (nc > 1) {
            // Stochastic face choice among the violated ones; prevents the
            // walk from cycling.
            walk_rand_ ^= walk_rand_ << 13;
            walk_rand_ ^= walk_rand_ >> 7;
            walk_rand_ ^= walk_rand_ << 17;
            k = cand[walk_rand_ % nc];
        }
        const int u = tets_[t].nb[k];
        if (u < 0) return -1;  // left the hull through a supporting plane
        t = u;
    }
    // Exhaustive fallback: first live tet whose closure contains p.
    stats.brute_locates += 1;
    for (int i = 0; i < static_cast<int>(tets_.size()); ++i) {
        if (!tets_[i].alive) continue;
        bool inside = true;
        for (int k = 0; k < 4 && inside; ++k) {
            const Vec3& fa = pts_[tets_[i].v[TetMesh::face_corners[k][0]]];
            const Vec3& fb = pts_[tets_[i].v[TetMesh::face_corners[k][1]]];
            const Vec3& fc = pts_[tets_[i].v[TetMesh::face_corners[k][2]]];
            if (orient3d(fa, fb, fc, p) < 0) inside = false;
        }
        if (inside) {
            for (int k = 0; k < 4; ++k)
                if (pts_[tets_[i].v[k]] == p) {
                    on_vertex = true;
                    vertex_id = tets_[i].v[k];
                }
            return i;
        }
    }
    return -1;
}

void DelaunayBuilder::remove_super() {
    for (int t = 0; t < static_cast<int>(tets_.size()); ++t) {
        if (!tets_[t].alive) continue;
        bool super = false;
        for (int v : tets_[t].v)
            if (v >= n_super_base_) super = true;
        if (super) {
            tets_[t].alive = false;
            free_.push_back(t);
        }
    }
    last_ = -1;
    long alive_count = 0;
    for (int t = 0; t < static_cast<int>(tets_.size()); ++t) {
        if (!tets_[t].alive) continue;
        ++alive_count;
        last_ = t;
        for (int k = 0; k < 4; ++k) {
            const int u = tets_[t].nb[k];
            if (u >= 0 && !tets_[u].alive) tets_[t].nb[k] = -1;
        }
    }
    check(alive_count > 0,
          "DelaunayBuilder: input points are coplanar (or fewer than four distinct points)");
    pts_.resize(n_super_base_);
}

int DelaunayBuilder::new_tet(int a, int b, int c, int d) {
    int t;
    if (!free_.empty()) {
        t = free_.back();
        free_.pop_back();
    } else {
        t = static_cast<int>(tets_.size());
        tets_.push_back({});
        mark_.push_back(0);
    }
    tets_[t].v = {a, b, c, d};
    tets_[t].nb = {-1, -1, -1, -1};
    tets_[t].alive = true;
    return t;
}

double DelaunayBuilder::in_ball(int t, const Vec3& p) const {
    const auto& v = tets_[t].v;
    return insphere(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[v[3]], p);
}

int DelaunayBuilder::locate(const Vec3& p) const {
    check(!tets_.empty(), "DelaunayBuilder: locate() on an empty triangulation");
    bool on_vertex = false;
    int vertex_id = -1;
    return locate_from(p, last_, on_vertex, vertex_id);
}

TetMesh DelaunayBuilder::take_mesh() const {
    check(built_, "DelaunayBuilder: take_mesh() before build()");
    TetMesh m;
    m.nodes = pts_;
    std::vector<int> slot_id(tets_.size(), -1);
    int nt = 0;
    for (int t = 0; t < static_cast<int>(tets_.size()); ++t)
        if (tets_[t].alive) slot_id[t] = nt++;
    m.tets.reserve(nt);
    m.neigh.reserve(nt);
    for (int t = 0; t < static_cast<int>(tets_.size()); ++t) {
        if (!tets_[t].alive) continue;
        m.tets.push_back(tets_[t].v);
        std::array<int, 4> nb;
        for (int k = 0; k < 4; ++k)
            nb[k] = tets_[t].nb[k] >= 0 ? slot_id[tets_[t].nb[k]] : -1;
        m.neigh.push_back(nb);
    }
    m.node_flags.assign(m.nodes.size(), NODE_NONE);
    m.node_domains.assign(m.nodes.size(), NodeDomain::Unknown);
    m.tet_domains.assign(m.tets.size(), TetDomain::Unknown);
    return m;
}

}  // namespace nanofield
