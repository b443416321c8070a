/*
 * validation.h
 * Closed-form reference solution for a hemispherical boss on a grounded
 * plane in a uniform applied field, plus error metrics, finite-box
 * correction factors, and the geometry generators (ideal smooth hemisphere
 * samplings and FCC-lattice nanotips) used to exercise the full pipeline.
 */
#pragma once

#include <vector>

#include "nanofield/atoms.h"
#include "nanofield/coarsen.h"
#include "nanofield/rng.h"
#include "nanofield/vec3.h"

namespace nanofield {

// Ideal geometry: hemisphere of radius R centered at the origin on the
// grounded plane z = 0, applied field E0 along +z far away, anode plane at
// z = d, lateral walls at |x| = |y| = D.
struct HemisphereSpec {
    double R = 0.0;   // tip radius (Angstrom)
    double E0 = 1.0;  // applied field (output units; the analytics scale linearly)
    double d = 0.0;   // anode height above the substrate plane
    double D = 0.0;   // lateral half-width
    void require_valid() const;  // R > 0, d > R, D > R
};

// Potential of the infinite-domain solution: -E0 z (1 - (R/|r|)^3).
// Throws for points inside the conductor (|r| < R, beyond tolerance).
double analytic_potential(const Vec3& r, const HemisphereSpec& spec);

// Field E = -grad(potential):
//   E/E0 = (3 R^3 x z / |r|^5, 3 R^3 y z / |r|^5, 1 - R^3 (x^2+y^2-2z^2)/|r|^5).
// Apex value (0,0,R) -> (0,0,3 E0).
Vec3 analytic_field(const Vec3& r, const HemisphereSpec& spec);

// gamma = |E_apex| / E0. Throws when E0 == 0.
double enhancement_factor(double apex_magnitude, double e0);

// Systematic bias of the finite simulation box relative to the infinite
// domain: a top plane at z = d raises the apex field by about 1 + 2(R/d)^3,
// lateral walls at D lower it by about 1 - (R/D)^3.
struct BoxCorrection {
    double top = 1.0;
    double lateral = 1.0;
    double combined() const { return top * lateral; }
};
BoxCorrection finite_box_correction(const HemisphereSpec& spec);

// Relative field error (E - E_ref) / E_ref. Throws when E_ref == 0.
double field_error(double e, double e_ref);

// Mean and 95% standard error of per-node relative errors grouped into
// polar-angle bins of `bin_deg` degrees (theta = 0 at the apex).
struct AngleBin {
    double theta_lo = 0.0, theta_hi = 0.0;  // degrees
    int count = 0;
    double mean = 0.0;
    double sem95 = 0.0;  // 1.96 * sample std / sqrt(count)
};
std::vector<AngleBin> bin_by_polar_angle(const std::vector<double>& theta_deg,
                                         const std::vector<double>& errors,
                                         double bin_deg);

// Surface sampling of the ideal geometry at nearest-neighbor spacing
// ~lambda: the hemisphere as latitude rings (apex point included), then
// substrate-plane rings continuing at the same density out to r_out.
// Every point lies exactly on the ideal surface. Hemisphere points carry
// the Apex region tag, substrate points Far.
GeneratorSet gen_smooth_hemisphere(double R, double lambda, double r_out);

// FCC lattice region: substrate slab (|x|,|y| <= half_width, -depth <= z <= 0)
// plus, when tip_radius > 0, a hemispherical tip (|r| <= tip_radius, z > 0).
// <100> orientation: cubic cell axes along x, y, z; one corner site at the
// origin, so the apex site (0, 0, tip_radius) exists whenever tip_radius is
// a multiple of the lattice constant.
struct FccRegion {
    double a = 3.61;          // conventional cubic lattice constant (Angstrom)
    double tip_radius = 0.0;  // 0 = flat slab
    double half_width = 0.0;
    double depth = 0.0;
    void require_valid() const;
};
AtomCloud gen_fcc(const FccRegion& region);

// Adds one adatom at a vacant FCC lattice site on the hemisphere cap
// (site just outside the cut with at least 3 nearest neighbors in the
// cloud), chosen uniformly by the generator. Returns its atom index.
int add_adatom(AtomCloud& cloud, const FccRegion& region, Rng& rng);

}  // namespace nanofield
