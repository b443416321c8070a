/*
 * predicates.h
 * Sign-exact orientation and in-sphere tests. Fast double evaluation with a
 * conservative error filter; when the filter cannot certify the sign, the
 * determinant is recomputed in exact rational arithmetic. Generator clouds
 * contain exactly cospherical subsets (lattice planes, latitude rings), so
 * tolerance-only predicates are not an option here.
 */
#pragma once

#include "nanofield/vec3.h"

namespace nanofield {

// > 0 when d lies on the positive side of the oriented plane (a, b, c),
// i.e. det[b - a; c - a; d - a] > 0. Returns 0 only for exact coplanarity.
// Only the sign of the result is meaningful.
double orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// > 0 when e lies strictly inside the circumsphere of the positively
// oriented tet (a, b, c, d); 0 when exactly on it. Only the sign is
// meaningful. Precondition: orient3d(a, b, c, d) > 0.
double insphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                const Vec3& e);

// Number of filter misses routed to the exact path since process start
// (diagnostic only).
long predicate_exact_fallbacks();

}  // namespace nanofield
