#include "nanofield/predicates.h"

#include <atomic>
#include <boost/multiprecision/cpp_int.hpp>

namespace nanofield {

namespace {

using Rat = boost::multiprecision::cpp_rational;

std::atomic<long> g_exact_calls{0};

// Relative filter threshold. The double evaluation of either determinant
// accrues at most a few tens of ulps relative to the permanent (sum of
// absolute products), well below 1e-13; anything smaller goes exact.
constexpr double kFilter = 1e-13;

double det3(double ax, double ay, double az,
            double bx, double by, double bz,
            double cx, double cy, double cz) {
    return ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx);
}

double perm3(double ax, double ay, double az,
             double bx, double by, double bz,
             double cx, double cy, double cz) {
    ax = std::fabs(ax); ay = std::fabs(ay); az = std::fabs(az);
    bx = std::fabs(bx); by = std::fabs(by); bz = std::fabs(bz);
    cx = std::fabs(cx); cy = std::fabs(cy); cz = std::fabs(cz);
    return ax * (by * cz + bz * cy) + ay * (bx * cz + bz * cx) + az * (bx * cy + by * cx);
}

Rat rdet3(const Rat& ax, const Rat& ay, const Rat& az,
          const Rat& bx, const Rat& by, const Rat& bz,
          const Rat& cx, const Rat& cy, const Rat& cz) {
    return ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx);
}

double sign_of(const Rat& r) {
    int s = r.sign();
    return s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
}

}  // namespace

long predicate_exact_fallbacks() { return g_exact_calls.load(); }

double orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    double bax = b.x - a.x, bay = b.y - a.y, baz = b.z - a.z;
    double cax = c.x - a.x, cay = c.y - a.y, caz = c.z - a.z;
    double dax = d.x - a.x, day = d.y - a.y, daz = d.z - a.z;
    double det = det3(bax, bay, baz, cax, cay, caz, dax, day, daz);
    double perm = perm3(bax, bay, baz, cax, cay, caz, dax, day, daz);
    if (std::fabs(det) > kFilter * perm) return det;

    ++g_exact_calls;
    Rat rbx = Rat(b.x) - Rat(a.x), rby = Rat(b.y) - Rat(a.y), rbz = Rat(b.z) - Rat(a.z);
    Rat rcx = Rat(c.x) - Rat(a.x), rcy = Rat(c.y) - Rat(a.y), rcz = Rat(c.z) - Rat(a.z);
    Rat rdx = Rat(d.x) - Rat(a.x), rdy = Rat(d.y) - Rat(a.y), rdz = Rat(d.z) - Rat(a.z);
    return sign_of(rdet3(rbx, rby, rbz, rcx, rcy, rcz, rdx, rdy, rdz));
}

double insphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                const Vec3& e) {
    double aex = a.x - e.x, aey = a.y - e.y, aez = a.z - e.z;
    double bex = b.x - e.x, bey = b.y - e.y, bez = b.z - e.z;
    double cex = c.x - e.x, cey = c.y - e.y, cez = c.z - e.z;
    double dex = d.x - e.x, dey = d.y - e.y, dez = d.z - e.z;
    double am = aex * aex + aey * aey + aez * aez;
    double bm = bex * bex + bey * bey + bez * bez;
    double cm = cex * cex + cey * cey + cez * cez;
    double dm = dex * dex + dey * dey + dez * dez;

    // Expansion of the 4x4 determinant along the squared-norm column; the
    // overall sign is flipped so that "strictly inside" is positive for a
    // positively oriented (a, b, c, d).
    double det = am * det3(bex, bey, bez, cex, cey, cez, dex, dey, dez)
                 - bm * det3(aex, aey, aez, cex, cey, cez, dex, dey, dez)
                 + cm * det3(aex, aey, aez, bex, bey, bez, dex, dey, dez)
                 - dm * det3(aex, aey, aez, bex, bey, bez, cex, cey, cez);
    double perm = am * perm3(bex, bey, bez, cex, cey, cez, dex, dey, dez)
                  + bm * perm3(aex, aey, aez, cex, cey, cez, dex, dey, dez)
                  + cm * perm3(aex, aey, aez, bex, bey, bez, dex, dey, dez)
                  + dm * perm3(aex, aey, aez, bex, bey, bez, cex, cey, cez);
    if (std::fabs(det) > kFilter * perm) return det;

    ++g_exact_calls;
    Rat ax = Rat(a.x) - Rat(e.x), ay = Rat(a.y) - Rat(e.y), az = Rat(a.z) - Rat(e.z);
    Rat bx = Rat(b.x) - Rat(e.x), by = Rat(b.y) - Rat(e.y), bz = Rat(b.z) - Rat(e.z);
    Rat cx = Rat(c.x) - Rat(e.x), cy = Rat(c.y) - Rat(e.y), cz = Rat(c.z) - Rat(e.z);
    Rat dx = Rat(d.x) - Rat(e.x), dy = Rat(d.y) - Rat(e.y), dz = Rat(d.z) - Rat(e.z);
    Rat ram = ax * ax + ay * ay + az * az;
    Rat rbm = bx * bx + by * by + bz * bz;
    Rat rcm = cx * cx + cy * cy + cz * cz;
    Rat rdm = dx * dx + dy * dy + dz * dz;
    Rat rdet = ram * rdet3(bx, by, bz, cx, cy, cz, dx, dy, dz)
               - rbm * rdet3(ax, ay, az, cx, cy, cz, dx, dy, dz)
               + rcm * rdet3(ax, ay, az, bx, by, bz, dx, dy, dz)
               - rdm * rdet3(ax, ay, az, bx, by, bz, cx, cy, cz);
    return sign_of(rdet);
}

}  // namespace nanofield
