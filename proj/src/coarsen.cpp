#include "nanofield/coarsen.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "nanofield/check.h"
#include "nanofield/grid_index.h"

namespace nanofield {

namespace {

double lateral_dist(const Vec3& r, const Vec3& axis) {
    double dx = r.x - axis.x, dy = r.y - axis.y;
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

void CoarsenSpec::require_valid() const {
    check(radius > 0.0, "coarsen: structure radius must be positive");
    check(lambda > 0.0, "coarsen: nearest-neighbor spacing must be positive");
    check(c1 >= 0 && c2 >= 0 && c3 >= 0, "coarsen: density factors must be >= 0");
    check(apex.finite() && base.finite(), "coarsen: non-finite apex/base point");
}

const char* to_string(GenOrigin o) {
    switch (o) {
        case GenOrigin::Surface: return "surface";
        case GenOrigin::Extended: return "extended";
        case GenOrigin::Boundary: return "boundary";
    }
    return "?";
}

const char* to_string(GenRegion r) {
    switch (r) {
        case GenRegion::Apex: return "apex";
        case GenRegion::Shank: return "shank";
        case GenRegion::Far: return "far";
        case GenRegion::Boundary: return "boundary";
    }
    return "?";
}

void GeneratorSet::append(const Vec3& p, GenOrigin o, GenRegion r, int atom_id) {
    points.push_back(p);
    origins.push_back(o);
    regions.push_back(r);
    atom_ids.push_back(atom_id);
}

void GeneratorSet::require_valid() const {
    check(origins.size() == points.size() && regions.size() == points.size() &&
              atom_ids.size() == points.size(),
          "generators: tag arrays out of step with the points");
    for (size_t i = 0; i < points.size(); ++i)
        check(points[i].finite(),
              "generators: non-finite point " + std::to_string(i));
}

GenRegion region_of(const Vec3& r, const CoarsenSpec& spec) {
    if (r.dist(spec.apex) <= spec.radius) return GenRegion::Apex;
    if (lateral_dist(r, spec.base) <= spec.radius) return GenRegion::Shank;
    return GenRegion::Far;
}

double clearance_radius(const Vec3& r, const CoarsenSpec& spec) {
    const double quarter = 0.25 * spec.lambda;
    switch (region_of(r, spec)) {
        case GenRegion::Apex:
            return spec.c1 * quarter;
        case GenRegion::Shank:
            return spec.c2 * quarter;
        default: {
            double d = r.dist(spec.base);
            // The far region starts where the lateral distance alone
            // exceeds the radius, so d > radius always holds here.
            check(d >= spec.radius, "clearance_radius: inconsistent region geometry");
            return spec.c3 * 0.1 * spec.lambda * std::sqrt(d - spec.radius) +
                   spec.c2 * quarter;
        }
    }
}

GeneratorSet select_generators(const AtomCloud& cloud,
                               const std::vector<int>& surface_ids,
                               const CoarsenSpec& spec) {
    spec.require_valid();
    check(!surface_ids.empty(), "select_generators: empty surface set");
    const int n = static_cast<int>(surface_ids.size());

    std::vector<Vec3> pos(n);
    double max_clear = 0.0;
    for (int k = 0; k < n; ++k) {
        int id = surface_ids[k];
        check(id >= 0 && id < cloud.size(),
              "select_generators: surface id " + std::to_string(id) + " out of range");
        pos[k] = cloud.pos[id];
        max_clear = std::max(max_clear, clearance_radius(pos[k], spec));
    }

    // Visit order: closest to the apex first, ties by atom id. The dense
    // apex sampling is then decided before any coarser point can shadow it.
    std::vector<int> order(n);
    for (int k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        double da = pos[a].dist2(spec.apex), db = pos[b].dist2(spec.apex);
        if (da != db) return da < db;
        return surface_ids[a] < surface_ids[b];
    });

    GridIndex grid(pos, std::max(max_clear, spec.lambda));
    std::vector<char> kept(n, 0);
    GeneratorSet out;
    for (int k : order) {
        const Vec3& p = pos[k];
        double rc = clearance_radius(p, spec);
        bool blocked = false;
        grid.for_near(p, rc, [&](int j) {
            if (!blocked && kept[j] && j != k && pos[j].dist2(p) < rc * rc)
                blocked = true;
        });
        if (blocked) continue;
        kept[k] = 1;
        out.append(p, GenOrigin::Surface, region_of(p, spec), surface_ids[k]);
    }
    return out;
}

void extend_domain(GeneratorSet& gens, const CoarsenSpec& spec, const ExtendOpts& opt) {
    spec.require_valid();
    check(opt.atom_box.valid(), "extend_domain: invalid atomistic box");
    const Aabb& box = opt.atom_box;

    // Lateral reach of the atomistic box as seen from the cylinder axis.
    double wxp = box.hi.x - spec.base.x, wxm = spec.base.x - box.lo.x;
    double wyp = box.hi.y - spec.base.y, wym = spec.base.y - box.lo.y;
    double half = std::max({wxp, wxm, wyp, wym});
    check(opt.d_ext >= half - 1e-12 * std::max(1.0, half),
          "extend_domain: extension half-width is smaller than the atomistic box");
    if (opt.d_ext <= half) return;

    double inscribed = std::max(0.0, std::min({wxp, wxm, wyp, wym}));
    double rho = inscribed;
    const double two_pi = 8.0 * std::atan(1.0);
    for (int ring = 1;; ++ring) {
        // Continuation of the far-region clearance law, never denser than
        // the atomistic sampling itself.
        Vec3 probe{spec.base.x + rho, spec.base.y, opt.z_substrate};
        double s = std::max(clearance_radius(probe, spec), spec.lambda);
        rho += s;
        if (rho > opt.d_ext * (1.0 + 1e-12)) break;
        int count = std::max(8, static_cast<int>(std::ceil(two_pi * rho / s)));
        double phase = (ring % 2) ? 0.0 : two_pi / (2.0 * count);  // stagger
        for (int j = 0; j < count; ++j) {
            double ang = phase + two_pi * j / count;
            double x = spec.base.x + rho * std::cos(ang);
            double y = spec.base.y + rho * std::sin(ang);
            if (x >= box.lo.x && x <= box.hi.x && y >= box.lo.y && y <= box.hi.y)
                continue;  // laterally inside the atomistic box
            double z = opt.profile ? opt.profile(x, y) : opt.z_substrate;
            gens.append({x, y, z}, GenOrigin::Extended, GenRegion::Far);
        }
    }
}

void extend_domain(GeneratorSet& gens, const std::vector<Vec3>& profile_points,
                   const Aabb& atom_box) {
    check(atom_box.valid(), "extend_domain: invalid atomistic box");
    for (size_t i = 0; i < profile_points.size(); ++i) {
        const Vec3& p = profile_points[i];
        check(p.finite(), "extend_domain: non-finite profile point " + std::to_string(i));
        check(!atom_box.contains(p),
              "extend_domain: profile point " + std::to_string(i) +
                  " lies inside the atomistic box");
        gens.append(p, GenOrigin::Extended, GenRegion::Far);
    }
}

void add_box_nodes(GeneratorSet& gens, const Aabb& box, double wall_spacing) {
    check(box.valid(), "add_box_nodes: invalid box");
    Vec3 sz = box.size();
    check(sz.x > 0 && sz.y > 0 && sz.z > 0, "add_box_nodes: degenerate box");
    check(wall_spacing > 0, "add_box_nodes: wall spacing must be positive");

    // Grid coordinates per axis; endpoints are taken verbatim from the box
    // so that points shared between faces, edges and corners dedup exactly.
    auto ticks = [&](double lo, double hi) {
        int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / wall_spacing)));
        std::vector<double> t(n + 1);
        for (int i = 1; i < n; ++i) t[i] = lo + (hi - lo) * i / n;
        t[0] = lo;
        t[n] = hi;
        return t;
    };
    std::vector<double> xs = ticks(box.lo.x, box.hi.x);
    std::vector<double> ys = ticks(box.lo.y, box.hi.y);
    std::vector<double> zs = ticks(box.lo.z, box.hi.z);

    std::set<std::array<double, 3>> seen;
    auto put = [&](double x, double y, double z) {
        if (seen.insert({x, y, z}).second)
            gens.append({x, y, z}, GenOrigin::Boundary, GenRegion::Boundary);
    };

    for (double x : {box.lo.x, box.hi.x})
        for (double y : {box.lo.y, box.hi.y})
            for (double z : {box.lo.z, box.hi.z}) put(x, y, z);

    for (double x : xs)
        for (double y : ys) put(x, y, box.hi.z);  // top face
    for (double x : {box.lo.x, box.hi.x})
        for (double y : ys)
            for (double z : zs) put(x, y, z);  // x walls
    for (double y : {box.lo.y, box.hi.y})
        for (double x : xs)
            for (double z : zs) put(x, y, z);  // y walls
}

CoarsenSpec detect_spec(const AtomCloud& cloud, const std::vector<int>& surface_ids,
                        double lambda, int c1, int c2, int c3) {
    check(lambda > 0.0, "detect_spec: nearest-neighbor spacing must be positive");
    check(!surface_ids.empty(), "detect_spec: empty surface set");

    int apex_id = -1;
    for (int id : surface_ids) {
        check(id >= 0 && id < cloud.size(),
              "detect_spec: surface id " + std::to_string(id) + " out of range");
        if (apex_id < 0 || cloud.pos[id].z > cloud.pos[apex_id].z ||
            (cloud.pos[id].z == cloud.pos[apex_id].z && id < apex_id))
            apex_id = id;
    }
    Vec3 apex = cloud.pos[apex_id];

    double lat_max = 0.0;
    for (int id : surface_ids) lat_max = std::max(lat_max, lateral_dist(cloud.pos[id], apex));

    // Substrate height: the top of the surface at the outer rim, where the
    // structure itself no longer reaches.
    double z_sub = -std::numeric_limits<double>::infinity();
    for (int id : surface_ids)
        if (lateral_dist(cloud.pos[id], apex) >= 0.9 * lat_max)
            z_sub = std::max(z_sub, cloud.pos[id].z);
    if (!(lat_max > 0.0)) z_sub = apex.z;

    // Radius: lateral reach of the part that rises above the substrate.
    double reach = 0.0;
    for (int id : surface_ids)
        if (cloud.pos[id].z > z_sub + 0.5 * lambda)
            reach = std::max(reach, lateral_dist(cloud.pos[id], apex));

    CoarsenSpec spec;
    spec.radius = std::max(reach, lambda);
    spec.apex = apex;
    spec.base = Vec3{apex.x, apex.y, z_sub};
    spec.lambda = lambda;
    spec.c1 = c1;
    spec.c2 = c2;
    spec.c3 = c3;
    spec.require_valid();
    return spec;
}

}  // namespace nanofield
