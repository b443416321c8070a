/*
 * coarsen.h
 * Turns the surface-atom set into mesh generator points. Near the structure
 * apex every surface atom is kept; farther out atoms are thinned with a
 * growing clearance radius, so the eventual mesh is dense where the field
 * varies fastest and coarse elsewhere. The generator set is then augmented
 * with flat "extended surface" rings beyond the atomistic box and with
 * coarse nodes on the simulation-box walls.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nanofield/aabb.h"
#include "nanofield/atoms.h"
#include "nanofield/vec3.h"

namespace nanofield {

// Geometry template for the clearance law: a sphere of radius R around the
// apex (densest), a vertical cylinder of the same radius dropping from it
// to the substrate (medium), and a far region whose spacing grows with the
// square root of the distance from the cylinder base.
struct CoarsenSpec {
    double radius = 0.0;  // R (A): apex-sphere / cylinder radius
    Vec3 apex{};          // apex center
    Vec3 base{};          // cylinder axis at substrate height
    double lambda = 0.0;  // characteristic nearest-neighbor distance (A)
    int c1 = 1;           // apex-sphere density factor
    int c2 = 1;           // cylinder-band density factor
    int c3 = 1;           // far-region growth factor

    // Throws unless radius > 0, lambda > 0, all factors >= 0, points finite.
    void require_valid() const;
};

enum class GenOrigin : uint8_t {
    Surface = 0,  // kept surface atom
    Extended,     // flat continuation ring beyond the atomistic box
    Boundary,     // simulation-box wall node
};

enum class GenRegion : uint8_t {
    Apex = 0,  // inside the apex sphere
    Shank,     // outside the sphere, laterally within the cylinder
    Far,       // everything else
    Boundary,  // box-wall nodes
};

const char* to_string(GenOrigin o);
const char* to_string(GenRegion r);

// Mesh generator points with provenance tags. atom_ids holds the source
// atom for Surface-origin points and -1 otherwise.
struct GeneratorSet {
    std::vector<Vec3> points;
    std::vector<GenOrigin> origins;
    std::vector<GenRegion> regions;
    std::vector<int> atom_ids;

    int size() const { return static_cast<int>(points.size()); }
    void append(const Vec3& p, GenOrigin o, GenRegion r, int atom_id = -1);
    void require_valid() const;  // parallel arrays, finite points
};

// Which density region a point falls in (never GenRegion::Boundary).
GenRegion region_of(const Vec3& r, const CoarsenSpec& spec);

// Minimum allowed distance from a generator at r to any earlier-placed
// generator: c1*lambda/4 inside the apex sphere, c2*lambda/4 in the
// cylinder band, and c3*0.1*lambda*sqrt(d - R) + c2*lambda/4 beyond it,
// where d is the distance from the cylinder base. The law is continuous
// across the cylinder wall at substrate height.
double clearance_radius(const Vec3& r, const CoarsenSpec& spec);

// Greedy thinning: surface atoms are visited by increasing distance from
// the apex (ties by atom id, so the result is deterministic) and kept iff
// no previously kept atom lies strictly within the candidate's clearance
// radius. Kept atoms become Surface-origin generators, in visit order.
GeneratorSet select_generators(const AtomCloud& cloud,
                               const std::vector<int>& surface_ids,
                               const CoarsenSpec& spec);

struct ExtendOpts {
    double d_ext = 0.0;        // target lateral half-width of the extension (A)
    Aabb atom_box;             // bounding box of the atomistic system
    double z_substrate = 0.0;  // height of the flat continuation
    // Optional height profile z = f(x, y); flat plane when absent.
    std::function<double(double, double)> profile;
};

// Appends rings of Extended-origin points outside the atomistic box,
// centered on the cylinder axis, out to lateral radius d_ext. Ring-to-ring
// and in-ring spacing follow the far-region clearance law continued
// outward, floored at lambda (the surface is never sampled denser than the
// atoms were). d_ext equal to the box lateral half-width is a no-op;
// d_ext below it is an error. Points laterally inside the box are skipped.
void extend_domain(GeneratorSet& gens, const CoarsenSpec& spec, const ExtendOpts& opt);

// Appends caller-supplied continuation points (e.g. loaded from a file).
// Any point inside the atomistic box is an error.
void extend_domain(GeneratorSet& gens, const std::vector<Vec3>& profile_points,
                   const Aabb& atom_box);

// Appends the 8 box corners plus grid points (spacing <= wall_spacing) on
// the top face and the four lateral walls. The bottom face gets corners
// and wall-edge points only: its interior belongs to the extended surface.
// Shared edge points are emitted once.
void add_box_nodes(GeneratorSet& gens, const Aabb& box, double wall_spacing);

// Detects the clearance-law geometry from labeled surface atoms:
// apex = highest surface atom (ties to the lowest id); substrate height =
// top of the surface at the outer rim; base = apex axis at substrate
// height; radius = lateral reach of the part elevated above the substrate,
// floored at lambda. Callers may override any field afterwards.
CoarsenSpec detect_spec(const AtomCloud& cloud, const std::vector<int>& surface_ids,
                        double lambda, int c1, int c2, int c3);

}  // namespace nanofield
