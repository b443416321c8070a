/*
 * pipeline.h
 * End-to-end field solve. From an atom cloud: surface extraction,
 * clearance-law coarsening into generator points, flat continuation out to
 * the walls of a simulation box whose floor is the substrate plane,
 * Delaunay meshing with quality refinement, vacuum/material separation,
 * interface smoothing, tet-to-hex splitting, the Laplace solve (applied
 * field enters as a flux through the box top, the conductor surface is
 * held at zero), optional field post-processing, and per-atom field
 * extraction. A second entry point runs the same tail on a prebuilt
 * smooth generator set (the analytic hemisphere used for validation).
 */
#pragma once

#include <cstdint>
#include <vector>

#include "nanofield/aabb.h"
#include "nanofield/atoms.h"
#include "nanofield/coarsen.h"
#include "nanofield/config.h"
#include "nanofield/hexmesh.h"
#include "nanofield/tetmesh.h"
#include "nanofield/vec3.h"

namespace nanofield {

struct SolveStats {
    // Input and generator counts.
    int n_atoms = 0;
    int n_surface_atoms = 0;
    int n_surface_gens = 0;   // kept surface atoms (+ smooth-surface samples)
    int n_extended_gens = 0;  // flat continuation points
    int n_box_gens = 0;       // box wall/top/corner nodes
    // Mesh sizes.
    int n_steiner = 0;        // refinement insertions
    int refine_sweeps = 0;
    int remaining_bad = 0;    // low-quality tets left (mostly material side)
    int n_mesh_nodes = 0;     // full mesh before extraction
    int n_tets = 0;
    int n_vacuum_tets = 0;
    int n_hex_nodes = 0;
    int n_hexes = 0;
    int n_dirichlet = 0;
    int smoothed_nodes = 0;   // interface nodes moved by Taubin smoothing
    // Geometry.
    double structure_radius = 0.0;  // R (A)
    double z_substrate = 0.0;       // box floor height (A)
    double box_halfwidth = 0.0;     // D (A)
    double box_height = 0.0;        // d (A)
    double longest_edge = 0.0;      // smoothing length scale L (A)
    bool flat_mode = false;         // no material cavity (tip below 2.5 lambda)
    // Wall-clock breakdown, milliseconds.
    double ms_surface = 0.0;
    double ms_coarsen = 0.0;
    double ms_mesh = 0.0;
    double ms_solve = 0.0;
    double ms_fields = 0.0;
    double ms_total = 0.0;
};

// A solved configuration: the vacuum mesh pair, the nodal solution, and
// where each generator / atom landed. Fields are V/nm, potentials V,
// lengths Angstrom.
struct SolveResult {
    TetMesh vacuum;             // vacuum tet mesh (surface already smoothed)
    HexMesh hex;                // its hex split; nodes 0..n_tet_nodes-1 shared
    std::vector<double> phi;    // potential per hex node (V)
    std::vector<Vec3> field;    // E = -grad(phi) per hex node (V/nm)
    std::vector<int> gen_node;  // generator index -> vacuum-mesh node id
    std::vector<int> gen_atom;  // generator index -> source atom id or -1
    std::vector<Vec3> atom_field;      // per-atom field (V/nm); cloud entry only
    std::vector<uint8_t> atom_inside;  // 1 = interpolated/nodal, 0 = fallback
    SolveStats stats;

    int order = 2;  // interpolation order the result was built for
};

// Full pipeline from an atom cloud. Rewrites cloud.labels (surface
// extraction pass). Throws on geometry that cannot form a valid domain
// (box smaller than the atomistic footprint, apex above the box top, ...).
SolveResult solve_cloud(AtomCloud& cloud, const RunConfig& cfg);

// Pipeline tail for prebuilt surface generators (Surface origin, already
// containing any structure-specific sampling). `spec` carries the
// apex/base/radius geometry used for the clearance law of the flat
// continuation; `z_substrate` is the height of that continuation and of
// the box floor; `atom_box` bounds the prebuilt points.
SolveResult solve_generators(GeneratorSet gens, const CoarsenSpec& spec,
                             double z_substrate, const Aabb& atom_box,
                             const RunConfig& cfg);

// Analytic validation geometry: a smooth hemisphere of radius R on a flat
// plane, sampled at spacing lambda, solved with the same pipeline.
SolveResult solve_hemisphere(double R, double lambda, const RunConfig& cfg);

// Samples the solved field at arbitrary points with the given order.
// Points outside the vacuum mesh receive fallback values (zero when
// `fallback` is null) and inside = 0. Used for solution reuse.
std::vector<Vec3> sample_field(const SolveResult& sol, const std::vector<Vec3>& pts,
                               int order, std::vector<uint8_t>* inside = nullptr,
                               const std::vector<Vec3>* fallback = nullptr);

}  // namespace nanofield
