#include "nanofield/validation.h"

#include <algorithm>
#include <cmath>

#include "nanofield/check.h"
#include "nanofield/grid_index.h"

namespace nanofield {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void HemisphereSpec::require_valid() const {
    check(R > 0.0, "HemisphereSpec: tip radius must be positive");
    check(d > R, "HemisphereSpec: anode height d must exceed the tip radius");
    check(D > R, "HemisphereSpec: lateral half-width D must exceed the tip radius");
}

double analytic_potential(const Vec3& r, const HemisphereSpec& spec) {
    check(spec.R > 0.0, "analytic_potential: tip radius must be positive");
    const double dist = r.norm();
    if (dist < spec.R * (1.0 - 1e-12))
        fail("analytic_potential: point inside the conductor (|r| < R)");
    const double ratio = spec.R / dist;
    return -spec.E0 * r.z * (1.0 - ratio * ratio * ratio);
}

Vec3 analytic_field(const Vec3& r, const HemisphereSpec& spec) {
    check(spec.R > 0.0, "analytic_field: tip radius must be positive");
    const double dist = r.norm();
    if (dist < spec.R * (1.0 - 1e-12))
        fail("analytic_field: point inside the conductor (|r| < R)");
    const double r2 = dist * dist;
    const double R3_over_r5 = spec.R * spec.R * spec.R / (r2 * r2 * dist);
    return Vec3{3.0 * r.x * r.z * R3_over_r5, 3.0 * r.y * r.z * R3_over_r5,
                1.0 - (r.x * r.x + r.y * r.y - 2.0 * r.z * r.z) * R3_over_r5} *
           spec.E0;
}

double enhancement_factor(double apex_magnitude, double e0) {
    check(e0 != 0.0, "enhancement_factor: applied field is zero");
    return apex_magnitude / e0;
}

BoxCorrection finite_box_correction(const HemisphereSpec& spec) {
    spec.require_valid();
    const double rd = spec.R / spec.d;
    const double rD = spec.R / spec.D;
    return {1.0 + 2.0 * rd * rd * rd, 1.0 - rD * rD * rD};
}

double field_error(double e, double e_ref) {
    check(e_ref != 0.0, "field_error: reference field is zero");
    return (e - e_ref) / e_ref;
}

std::vector<AngleBin> bin_by_polar_angle(const std::vector<double>& theta_deg,
                                         const std::vector<double>& errors,
                                         double bin_deg) {
    check(theta_deg.size() == errors.size(), "bin_by_polar_angle: size mismatch");
    check(bin_deg > 0.0, "bin_by_polar_angle: bin width must be positive");
    const int n_bins = (int)std::ceil(90.0 / bin_deg);
    std::vector<AngleBin> bins(n_bins);
    std::vector<std::vector<double>> samples(n_bins);
    for (int b = 0; b < n_bins; ++b) {
        bins[b].theta_lo = b * bin_deg;
        bins[b].theta_hi = std::min((b + 1) * bin_deg, 90.0);
    }
    for (size_t i = 0; i < theta_deg.size(); ++i) {
        const double t = theta_deg[i];
        if (t < 0.0 || t > 90.0) continue;  // outside the cap
        int b = std::min((int)(t / bin_deg), n_bins - 1);
        samples[b].push_back(errors[i]);
    }
    for (int b = 0; b < n_bins; ++b) {
        const auto& s = samples[b];
        bins[b].count = (int)s.size();
        if (s.empty()) continue;
        double mean = 0.0;
        for (double v : s) mean += v;
        mean /= (double)s.size();
        bins[b].mean = mean;
        if (s.size() > 1) {
            double var = 0.0;
            for (double v : s) var += (v - mean) * (v - mean);
            var /= (double)(s.size() - 1);
            bins[b].sem95 = 1.96 * std::sqrt(var / (double)s.size());
        }
    }
    return bins;
}

GeneratorSet gen_smooth_hemisphere(double R, double lambda, double r_out) {
    check(R > 0.0, "gen_smooth_hemisphere: radius must be positive");
    check(lambda > 0.0 && lambda < R, "gen_smooth_hemisphere: spacing must be in (0, R)");
    check(r_out >= R, "gen_smooth_hemisphere: outer radius must reach the rim");

    GeneratorSet out;
    // Apex, then latitude rings at polar steps of ~lambda of arc.
    out.append({0.0, 0.0, R}, GenOrigin::Surface, GenRegion::Apex);
    const int n_theta = std::max(2, (int)std::ceil((kPi / 2.0) * R / lambda));
    const double dtheta = (kPi / 2.0) / n_theta;
    for (int k = 1; k <= n_theta; ++k) {
        const double theta = k * dtheta;
        const double ring_r = R * std::sin(theta);
        const double z = R * std::cos(theta);
        const int count = std::max(6, (int)std::ceil(2.0 * kPi * ring_r / lambda));
        const double phase = (k % 2) ? 0.0 : kPi / count;
        for (int j = 0; j < count; ++j) {
            const double phi = phase + 2.0 * kPi * j / count;
            out.append({ring_r * std::cos(phi), ring_r * std::sin(phi),
                        (k == n_theta) ? 0.0 : z},
                       GenOrigin::Surface, GenRegion::Apex);
        }
    }
    // Substrate-plane rings continuing outward at the same density.
    if (r_out > R + 0.5 * lambda) {
        // Round to the nearest ring count so the radial step stays close
        // to lambda from both sides.
        const int n_sub = std::max(1, (int)std::lround((r_out - R) / lambda));
        const double dr = (r_out - R) / n_sub;
        for (int k = 1; k <= n_sub; ++k) {
            const double ring_r = R + k * dr;
            const int count = std::max(6, (int)std::ceil(2.0 * kPi * ring_r / lambda));
            const double phase = (k % 2) ? 0.0 : kPi / count;
            for (int j = 0; j < count; ++j) {
                const double phi = phase + 2.0 * kPi * j / count;
                out.append({ring_r * std::cos(phi), ring_r * std::sin(phi), 0.0},
                           GenOrigin::Surface, GenRegion::Far);
            }
        }
    }
    return out;
}

void FccRegion::require_valid() const {
    check(a > 0.0, "FccRegion: lattice constant must be positive");
    check(half_width > 0.0, "FccRegion: substrate half-width must be positive");
    check(depth > 0.0, "FccRegion: substrate depth must be positive");
    check(tip_radius >= 0.0, "FccRegion: tip radius must be non-negative");
    if (tip_radius > 0.0)
        check(tip_radius <= half_width,
              "FccRegion: the tip must fit inside the substrate extent");
}

namespace {

bool fcc_site_inside(const Vec3& p, const FccRegion& g) {
    const double eps = 1e-9 * g.a;
    if (p.z <= eps) {  // substrate slab
        return p.z >= -g.depth - eps && std::abs(p.x) <= g.half_width + eps &&
               std::abs(p.y) <= g.half_width + eps;
    }
    if (g.tip_radius <= 0.0) return false;
    return p.norm() <= g.tip_radius + eps;  // hemispherical tip
}

// All FCC sites of the conventional cell grid covering the region, in a
// deterministic cell-then-basis order.
template <class F>
void for_fcc_sites(const FccRegion& g, F&& visit) {
    static const double basis[4][3] = {
        {0.0, 0.0, 0.0}, {0.5, 0.5, 0.0}, {0.5, 0.0, 0.5}, {0.0, 0.5, 0.5}};
    const double top = std::max(g.tip_radius, 0.0);
    const int ix_max = (int)std::ceil(g.half_width / g.a) + 1;
    const int iz_lo = (int)std::floor(-g.depth / g.a) - 1;
    const int iz_hi = (int)std::ceil(top / g.a) + 1;
    for (int k = iz_lo; k <= iz_hi; ++k)
        for (int j = -ix_max; j <= ix_max; ++j)
            for (int i = -ix_max; i <= ix_max; ++i)
                for (const auto& b : basis)
                    visit(Vec3{(i + b[0]) * g.a, (j + b[1]) * g.a, (k + b[2]) * g.a});
}

}  // namespace

AtomCloud gen_fcc(const FccRegion& region) {
    region.require_valid();
    AtomCloud cloud;
    for_fcc_sites(region, [&](const Vec3& p) {
        if (fcc_site_inside(p, region)) {
            cloud.pos.push_back(p);
            cloud.species.push_back("Cu");
            cloud.labels.push_back(AtomLabel::Unclassified);
        }
    });
    check(!cloud.pos.empty(), "gen_fcc: region contains no lattice sites");
    return cloud;
}

int add_adatom(AtomCloud& cloud, const FccRegion& region, Rng& rng) {
    region.require_valid();
    check(region.tip_radius > 0.0, "add_adatom: region has no tip");
    cloud.require_valid("add_adatom");

    // Vacant cap sites just outside the cut, adjacent to enough atoms to
    // rest on the surface.
    const double nn_cut = 0.765 * region.a;
    GridIndex grid(cloud.pos, nn_cut);
    std::vector<Vec3> candidates;
    for_fcc_sites(region, [&](const Vec3& p) {
        if (fcc_site_inside(p, region)) return;           // occupied region
        if (p.z <= 1e-9 * region.a) return;               // cap only, not the substrate plane
        const double dist = p.norm();
        if (dist > region.tip_radius + region.a) return;  // too far off the surface
        int neighbors = 0;
        grid.for_near(p, nn_cut, [&](int) { ++neighbors; });
        if (neighbors >= 3) candidates.push_back(p);
    });
    check(!candidates.empty(), "add_adatom: no vacant surface site found");

    const int pick = rng.uniform_int(0, (int)candidates.size() - 1);
    cloud.pos.push_back(candidates[pick]);
    cloud.species.push_back(cloud.species.front());
    cloud.labels.push_back(AtomLabel::Unclassified);
    return cloud.size() - 1;
}

}  // namespace nanofield
