#include "nanofield/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "nanofield/check.h"
#include "nanofield/delaunay.h"
#include "nanofield/grid_index.h"
#include "nanofield/interp.h"
#include "nanofield/laplace.h"
#include "nanofield/meshops.h"
#include "nanofield/postprocess.h"
#include "nanofield/refine.h"
#include "nanofield/surface.h"
#include "nanofield/validation.h"

namespace nanofield {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Config fields are V/nm; the solve runs in V and Angstrom.
constexpr double kFieldToInternal = 0.1;
constexpr double kFieldToOutput = 10.0;

// Tips shorter than this (in units of lambda) have no material cavity to
// separate: a bare slab, or a slab with an adatom.
constexpr double kFlatTipFactor = 2.5;

// Slot of the edge (i, j) of local vertices in the 10-node tet layout
// [v0 v1 v2 v3 e01 e12 e20 e03 e13 e23].
constexpr int kEdgeSlot[4][4] = {
    {-1, 4, 6, 7},
    {4, -1, 5, 8},
    {6, 5, -1, 9},
    {7, 8, 9, -1},
};

// Hex-mesh nodes held at the conductor potential: every node lying on a
// hull triangle of the vacuum tet mesh whose three vertices are all
// surface-flagged (the structure shell, the flat continuation sheet, and
// the box-floor rim). Wall and top hull triangles have boundary-only
// vertices and are skipped. The face-centroid node of hull face kf of tet
// t is recovered from the hex around the face's first local vertex lv
// (hex id 4t+lv): corners 2/5/7 of that hex hold the centroids of the
// three faces incident to lv, in the kOther pair order of the splitter.
std::vector<int> conductor_nodes(const TetMesh& vac, const HexMesh& hex) {
    static constexpr int kOther[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
    std::vector<int> out;
    for (int t = 0; t < vac.n_tets(); ++t) {
        const auto& tt = vac.tets[t];
        for (int kf = 0; kf < 4; ++kf) {
            if (vac.neigh[t][kf] >= 0) continue;
            const int la = TetMesh::face_corners[kf][0];
            const int lb = TetMesh::face_corners[kf][1];
            const int lc = TetMesh::face_corners[kf][2];
            if (!(vac.node_flags[tt[la]] & NODE_SURFACE) ||
                !(vac.node_flags[tt[lb]] & NODE_SURFACE) ||
                !(vac.node_flags[tt[lc]] & NODE_SURFACE))
                continue;
            const auto& t10 = hex.tet_nodes10[t];
            out.push_back(tt[la]);
            out.push_back(tt[lb]);
            out.push_back(tt[lc]);
            out.push_back(t10[kEdgeSlot[la][lb]]);
            out.push_back(t10[kEdgeSlot[lb][lc]]);
            out.push_back(t10[kEdgeSlot[la][lc]]);
            int pos = 7;
            if (kOther[la][2] == kf)
                pos = 2;
            else if (kOther[la][1] == kf)
                pos = 5;
            out.push_back(hex.hexes[4 * t + la][pos]);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

SolveResult solve_generators(GeneratorSet gens, const CoarsenSpec& spec,
                             double z_substrate, const Aabb& atom_box,
                             const RunConfig& cfg) {
    const auto t_start = Clock::now();
    cfg.validate();
    spec.require_valid();
    gens.require_valid();
    check(gens.size() >= 4, "pipeline: too few surface generators");

    SolveResult res;
    res.order = cfg.order;
    SolveStats& st = res.stats;
    st.n_surface_gens = gens.size();
    st.z_substrate = z_substrate;
    st.structure_radius = spec.radius;

    const double lambda = spec.lambda;
    const double R = spec.radius;
    const double d_box =
        cfg.box_height_abs > 0.0 ? cfg.box_height_abs : cfg.box_height_factor * R;
    const double D_box =
        cfg.box_halfwidth_abs > 0.0 ? cfg.box_halfwidth_abs : cfg.box_halfwidth_factor * R;
    st.box_height = d_box;
    st.box_halfwidth = D_box;

    const double tip_height = spec.apex.z - z_substrate;
    check(tip_height <= d_box - 2.0 * lambda,
          "pipeline: structure apex at " + std::to_string(tip_height) +
              " A reaches the box top (height " + std::to_string(d_box) +
              " A); raise box_height");

    double reach = 0.0;
    if (atom_box.valid()) {
        reach = std::max({std::abs(atom_box.lo.x - spec.base.x),
                          std::abs(atom_box.hi.x - spec.base.x),
                          std::abs(atom_box.lo.y - spec.base.y),
                          std::abs(atom_box.hi.y - spec.base.y)});
    }
    check(D_box >= reach + lambda,
          "pipeline: box halfwidth " + std::to_string(D_box) +
              " A does not cover the atomistic footprint (reach " +
              std::to_string(reach) + " A); raise box_halfwidth");

    Aabb box;
    box.lo = Vec3{spec.base.x - D_box, spec.base.y - D_box, z_substrate};
    box.hi = Vec3{spec.base.x + D_box, spec.base.y + D_box, z_substrate + d_box};

    // The flat continuation stops half a wall spacing short of the walls so
    // sheet points never coincide with wall-grid points.
    const double s_wall = std::max(2.0 * lambda, std::min(d_box, D_box) / 12.0);
    double d_ext = D_box - 0.5 * s_wall;
    if (cfg.extend_halfwidth > 0.0)
        d_ext = std::min(cfg.extend_halfwidth, d_ext);
    d_ext = std::max(d_ext, reach);

    ExtendOpts eopt;
    eopt.d_ext = d_ext;
    eopt.atom_box = atom_box;
    eopt.z_substrate = z_substrate;
    extend_domain(gens, spec, eopt);
    st.n_extended_gens = gens.size() - st.n_surface_gens;

    // Free material seed just above the floor, deterministically below any
    // Steiner point (whose domain floor is raised by delta).
    const bool flat = tip_height < kFlatTipFactor * lambda;
    st.flat_mode = flat;
    const double delta = 0.25 * lambda;
    int anchor_id = -1;
    if (!flat) {
        gens.append(Vec3{spec.base.x, spec.base.y, z_substrate + 0.5 * delta},
                    GenOrigin::Boundary, GenRegion::Far, -1);
        anchor_id = gens.size() - 1;
    }

    add_box_nodes(gens, box, s_wall);
    st.n_box_gens =
        gens.size() - st.n_surface_gens - st.n_extended_gens - (anchor_id >= 0 ? 1 : 0);
    st.ms_coarsen = ms_since(t_start);

    const auto t_mesh = Clock::now();
    DelaunayBuilder builder;
    builder.build(gens.points);

    RefineOpts ropt;
    ropt.q_min = cfg.q_min;
    ropt.v_max = cfg.v_max;
    ropt.max_sweeps = cfg.refine_max_sweeps;
    ropt.domain.lo = box.lo + Vec3{delta, delta, delta};
    ropt.domain.hi = box.hi - Vec3{delta, delta, delta};
    const RefineResult rr = refine_mesh(builder, ropt);
    st.n_steiner = rr.inserted;
    st.refine_sweeps = rr.sweeps;
    st.remaining_bad = rr.remaining_bad;

    TetMesh mesh = builder.take_mesh();
    st.n_mesh_nodes = mesh.n_nodes();
    st.n_tets = mesh.n_tets();

    // Surface nodes at (or below) the substrate plane lie on the box floor:
    // they carry the boundary bit too, which pins them during interface
    // smoothing (the structure rim must not lift off the floor).
    const double eps_z = 1e-9 * (1.0 + std::abs(z_substrate) + d_box);
    for (int i = 0; i < gens.size(); ++i) {
        if (i == anchor_id) continue;
        switch (gens.origins[i]) {
            case GenOrigin::Surface:
            case GenOrigin::Extended:
                mesh.node_flags[i] = (gens.points[i].z <= z_substrate + eps_z)
                                         ? (NODE_SURFACE | NODE_BOUNDARY)
                                         : NODE_SURFACE;
                break;
            case GenOrigin::Boundary:
                mesh.node_flags[i] = NODE_BOUNDARY;
                // The floor rim and floor corners sit on the conductor plane.
                if (std::abs(gens.points[i].z - z_substrate) <= eps_z)
                    mesh.node_flags[i] = NODE_SURFACE | NODE_BOUNDARY;
                break;
        }
    }

    if (flat) {
        mesh.tet_domains.assign(mesh.n_tets(), TetDomain::Vacuum);
        for (int i = 0; i < mesh.n_nodes(); ++i)
            mesh.node_domains[i] = (mesh.node_flags[i] & NODE_SURFACE)
                                       ? NodeDomain::Surface
                                       : NodeDomain::Vacuum;
    } else {
        separate_domains(mesh);
        check(mesh.node_domains[anchor_id] == NodeDomain::Material,
              "pipeline: material anchor landed in the wrong flood");
    }

    const InterfaceSmoothStats ss = taubin_smooth_interface(
        mesh, cfg.taubin_lambda, cfg.taubin_mu, cfg.taubin_iters, cfg.taubin_uniform_weights);
    st.smoothed_nodes = ss.movable_nodes;

    std::vector<int> old_of_new;
    res.vacuum = extract_domain(mesh, TetDomain::Vacuum, &old_of_new);
    st.n_vacuum_tets = res.vacuum.n_tets();

    std::vector<int> new_of_old(mesh.n_nodes(), -1);
    for (int i = 0; i < static_cast<int>(old_of_new.size()); ++i)
        new_of_old[old_of_new[i]] = i;
    res.gen_node.assign(gens.size(), -1);
    res.gen_atom = gens.atom_ids;
    for (int i = 0; i < gens.size(); ++i) {
        res.gen_node[i] = new_of_old[i];
        if (i != anchor_id)
            check(res.gen_node[i] >= 0,
                  "pipeline: generator " + std::to_string(i) +
                      " is missing from the vacuum mesh");
    }

    res.hex = split_to_hex(res.vacuum);
    st.n_hex_nodes = res.hex.n_nodes();
    st.n_hexes = res.hex.n_hexes();
    st.ms_mesh = ms_since(t_mesh);

    const auto t_solve = Clock::now();
    SparseSystem sys = assemble(res.hex);
    add_top_flux(sys, res.hex, -cfg.e0 * kFieldToInternal, box.hi.z, eps_z);
    const std::vector<int> dirichlet = conductor_nodes(res.vacuum, res.hex);
    check(!dirichlet.empty(), "pipeline: no conductor surface found on the hull");
    st.n_dirichlet = static_cast<int>(dirichlet.size());
    set_dirichlet_zero(sys, dirichlet);

    res.phi = solve_pcg(sys, cfg.cg_tol, cfg.cg_max_iter);
    res.field = compute_field(res.hex, res.phi);
    st.longest_edge = longest_edge(res.vacuum);
    if (cfg.postprocess) res.field = smooth_field(res.hex, res.field, st.longest_edge);
    for (Vec3& e : res.field) e = e * kFieldToOutput;
    st.ms_solve = ms_since(t_solve);
    st.ms_total = ms_since(t_start);
    return res;
}

SolveResult solve_cloud(AtomCloud& cloud, const RunConfig& cfg) {
    const auto t_start = Clock::now();
    cfg.validate();
    cloud.require_valid("pipeline");

    SurfaceOpts sopt;
    sopt.r_nn = cfg.derived_r_nn();
    sopt.eps = cfg.derived_eps_dbscan();
    sopt.min_pts = cfg.dbscan_min_pts;
    sopt.coord_surface = cfg.coord_surface;
    sopt.voronoi = cfg.voronoi;
    const SurfaceResult sres = extract_surface(cloud, sopt);
    check(!sres.surface.empty(), "pipeline: no surface atoms found");
    const double ms_surface = ms_since(t_start);

    const auto t_coarsen = Clock::now();
    const double lambda = cfg.lattice / std::sqrt(2.0);
    CoarsenSpec spec = detect_spec(cloud, sres.surface, lambda, cfg.c1, cfg.c2, cfg.c3);
    if (cfg.structure_radius > 0.0) spec.radius = cfg.structure_radius;
    if (cfg.r_apex_set) spec.apex = cfg.r_apex;
    if (cfg.r_base_set) spec.base = cfg.r_base;
    const double zs = spec.base.z;

    // Only the top layer and anything above it become generators; slab
    // sides and bottom lie below the box floor.
    std::vector<int> kept;
    kept.reserve(sres.surface.size());
    for (int id : sres.surface)
        if (cloud.pos[id].z >= zs - 0.45 * lambda) kept.push_back(id);
    check(!kept.empty(), "pipeline: no surface atoms at or above the substrate plane");

    GeneratorSet gens = select_generators(cloud, kept, spec);

    Aabb atom_box;
    atom_box.expand(cloud.pos);
    const double ms_coarsen_pre = ms_since(t_coarsen);

    SolveResult res = solve_generators(std::move(gens), spec, zs, atom_box, cfg);
    res.stats.ms_surface = ms_surface;
    res.stats.ms_coarsen += ms_coarsen_pre;
    res.stats.n_atoms = cloud.size();
    res.stats.n_surface_atoms = static_cast<int>(sres.surface.size());

    // Per-atom fields: generator atoms read their own node; everything
    // else interpolates at its position. Misses fall back to the nearest
    // surface generator for surface-labeled atoms (the smoothed shell can
    // pass slightly behind an atom) and stay zero (shielded) otherwise.
    const auto t_fields = Clock::now();
    res.atom_field.assign(cloud.size(), Vec3{});
    res.atom_inside.assign(cloud.size(), 0);
    std::vector<char> is_gen(cloud.size(), 0);
    std::vector<Vec3> gen_pos;
    std::vector<int> gen_of_pos;
    for (int g = 0; g < static_cast<int>(res.gen_atom.size()); ++g) {
        const int a = res.gen_atom[g];
        if (a < 0) continue;
        is_gen[a] = 1;
        res.atom_field[a] = res.field[res.gen_node[g]];
        res.atom_inside[a] = 1;
        gen_pos.push_back(cloud.pos[a]);
        gen_of_pos.push_back(g);
    }

    std::vector<Vec3> query;
    std::vector<int> query_atom;
    for (int a = 0; a < cloud.size(); ++a)
        if (!is_gen[a]) {
            query.push_back(cloud.pos[a]);
            query_atom.push_back(a);
        }
    if (!query.empty()) {
        const auto vals =
            interp_batch<Vec3>(query, res.vacuum, res.field, cfg.order,
                               cfg.order == 2 ? &res.hex.tet_nodes10 : nullptr);
        GridIndex gen_grid(gen_pos, 2.0 * lambda);
        for (size_t i = 0; i < query.size(); ++i) {
            const int a = query_atom[i];
            if (vals[i].inside) {
                res.atom_field[a] = vals[i].value;
                res.atom_inside[a] = 1;
                continue;
            }
            if (cloud.labels[a] != AtomLabel::Surface) continue;  // shielded
            int best = -1;
            double best_d2 = 0.0;
            for (double r = 2.0 * lambda; r <= 16.0 * lambda && best < 0; r *= 2.0) {
                gen_grid.for_near(cloud.pos[a], r, [&](int j) {
                    const double d2 = (gen_pos[j] - cloud.pos[a]).norm2();
                    if (d2 > r * r) return;
                    if (best < 0 || d2 < best_d2 ||
                        (d2 == best_d2 && gen_of_pos[j] < gen_of_pos[best])) {
                        best = j;
                        best_d2 = d2;
                    }
                });
            }
            if (best >= 0) {
                res.atom_field[a] = res.field[res.gen_node[gen_of_pos[best]]];
                res.atom_inside[a] = 1;
            }
        }
    }
    res.stats.ms_fields = ms_since(t_fields);
    res.stats.ms_total = ms_since(t_start);
    return res;
}

SolveResult solve_hemisphere(double R, double lambda, const RunConfig& cfg) {
    check(R > 0.0 && lambda > 0.0 && R >= 4.0 * lambda,
          "pipeline: hemisphere surface needs R >= 4 lambda");
    const double r_out = R + std::max(4.0 * lambda, 0.05 * R);
    GeneratorSet gens = gen_smooth_hemisphere(R, lambda, r_out);

    CoarsenSpec spec;
    spec.radius = R;
    spec.apex = Vec3{0.0, 0.0, R};
    spec.base = Vec3{0.0, 0.0, 0.0};
    spec.lambda = lambda;
    spec.c1 = cfg.c1;
    spec.c2 = cfg.c2;
    spec.c3 = cfg.c3;

    Aabb atom_box;
    atom_box.expand(gens.points);
    return solve_generators(std::move(gens), spec, 0.0, atom_box, cfg);
}

std::vector<Vec3> sample_field(const SolveResult& sol, const std::vector<Vec3>& pts,
                               int order, std::vector<uint8_t>* inside,
                               const std::vector<Vec3>* fallback) {
    check(order == 1 || order == 2, "sample_field: order must be 1 or 2");
    check(!fallback || fallback->size() == pts.size(),
          "sample_field: fallback size does not match the query count");
    const auto vals = interp_batch<Vec3>(pts, sol.vacuum, sol.field, order,
                                         order == 2 ? &sol.hex.tet_nodes10 : nullptr);
    std::vector<Vec3> out(pts.size());
    if (inside) inside->assign(pts.size(), 0);
    for (size_t i = 0; i < pts.size(); ++i) {
        if (vals[i].inside) {
            out[i] = vals[i].value;
            if (inside) (*inside)[i] = 1;
        } else if (fallback) {
            out[i] = (*fallback)[i];
        }
    }
    return out;
}

}  // namespace nanofield
