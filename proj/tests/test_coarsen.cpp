// Generator selection: region-dependent clearance law, greedy thinning,
// domain extension rings, and simulation-box wall nodes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "nanofield/coarsen.h"
#include "nanofield/rng.h"

using namespace nanofield;

namespace {

constexpr double kLambda = 3.61;

CoarsenSpec tip_spec(int c1, int c2, int c3, double R = 10.0) {
    CoarsenSpec s;
    s.radius = R;
    s.apex = {0.0, 0.0, R};
    s.base = {0.0, 0.0, 0.0};
    s.lambda = kLambda;
    s.c1 = c1;
    s.c2 = c2;
    s.c3 = c3;
    return s;
}

AtomCloud cloud_of(const std::vector<Vec3>& pts) {
    AtomCloud c;
    c.pos = pts;
    c.species.assign(pts.size(), "Cu");
    c.labels.assign(pts.size(), AtomLabel::Surface);
    return c;
}

std::vector<int> all_ids(const AtomCloud& c) {
    std::vector<int> ids(c.size());
    for (int i = 0; i < c.size(); ++i) ids[i] = i;
    return ids;
}

}  // namespace

TEST_CASE("clearance radius follows the three-region law") {
    CoarsenSpec s = tip_spec(2, 4, 3);

    // Densest at the apex: 2 * 3.61 / 4.
    CHECK(clearance_radius(s.apex, s) == doctest::Approx(1.805).epsilon(1e-12));
    CHECK(region_of(s.apex, s) == GenRegion::Apex);

    // Anywhere inside the apex sphere counts as apex.
    CHECK(clearance_radius({0, 0, 15}, s) == doctest::Approx(1.805));
    CHECK(clearance_radius({3, -4, 10}, s) == doctest::Approx(1.805));  // dist 5

    // On the shank: below the sphere, laterally inside the cylinder.
    Vec3 shank{9, 0, -5};
    CHECK(region_of(shank, s) == GenRegion::Shank);
    CHECK(clearance_radius(shank, s) == doctest::Approx(3.61).epsilon(1e-12));

    // Far region: square-root growth plus the shank floor.
    Vec3 far{20, 0, 0};
    CHECK(region_of(far, s) == GenRegion::Far);
    double expect = 3 * 0.1 * kLambda * std::sqrt(20.0 - 10.0) + 4 * kLambda / 4.0;
    CHECK(clearance_radius(far, s) == doctest::Approx(expect).epsilon(1e-12));

    // The law is continuous across the cylinder wall at substrate height.
    double inside = clearance_radius({10.0 - 1e-9, 0, 0}, s);
    double outside = clearance_radius({10.0 + 1e-9, 0, 0}, s);
    CHECK(std::abs(inside - outside) < 1e-4);

    // Zero factors disable the thinning everywhere.
    CoarsenSpec z = tip_spec(0, 0, 0);
    for (const Vec3& p : {Vec3{0, 0, 10}, Vec3{5, 0, 2}, Vec3{40, 13, 0}})
        CHECK(clearance_radius(p, z) == 0.0);
}

TEST_CASE("select_generators keeps a flat patch intact when growth is off") {
    // 20 x 20 square patch at the nearest-neighbor spacing.
    std::vector<Vec3> pts;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j)
            pts.push_back({i * kLambda, j * kLambda, 0.0});
    AtomCloud c = cloud_of(pts);

    CoarsenSpec s = tip_spec(1, 1, 0, kLambda);
    s.apex = pts[0];
    s.base = pts[0];

    GeneratorSet g = select_generators(c, all_ids(c), s);
    g.require_valid();
    CHECK(g.size() == 400);
    for (int i = 0; i < g.size(); ++i) {
        CHECK(g.origins[i] == GenOrigin::Surface);
        CHECK(g.atom_ids[i] >= 0);
    }

    // Clearance exactly equal to the spacing still removes nothing: the
    // separation bound is inclusive. Power-of-two spacing keeps every
    // distance and clearance value exact in floating point.
    std::vector<Vec3> p4;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) p4.push_back({i * 4.0, j * 4.0, 0.0});
    AtomCloud c4 = cloud_of(p4);
    CoarsenSpec s4;
    s4.radius = 4.0;
    s4.apex = s4.base = p4[0];
    s4.lambda = 4.0;
    s4.c1 = s4.c2 = 4;  // clearance = lambda on the nose
    s4.c3 = 0;
    CHECK(select_generators(c4, all_ids(c4), s4).size() == 100);
}

TEST_CASE("two atoms inside one clearance radius: exactly one survives") {
    CoarsenSpec s = tip_spec(2, 2, 2);
    AtomCloud c = cloud_of({{0.0, 0.0, 9.0}, {0.5, 0.0, 9.0}});  // both in the apex sphere

    GeneratorSet g = select_generators(c, all_ids(c), s);
    REQUIRE(g.size() == 1);
    // Atom 0 sits closer to the apex, so the sweep reaches it first.
    CHECK(g.atom_ids[0] == 0);
    CHECK(g.regions[0] == GenRegion::Apex);

    // Equidistant pair: the lower atom id wins the tie.
    AtomCloud t = cloud_of({{0.5, 0.0, 10.0}, {-0.5, 0.0, 10.0}});
    GeneratorSet gt = select_generators(t, all_ids(t), s);
    REQUIRE(gt.size() == 1);
    CHECK(gt.atom_ids[0] == 0);
}

TEST_CASE("greedy selection: pairwise clearance and maximality, brute force") {
    // Random points over a slab-like box, denser than the clearance scale.
    Rng rng(20240818);
    std::vector<Vec3> pts;
    for (int i = 0; i < 600; ++i)
        pts.push_back({rng.uniform(-40, 40), rng.uniform(-40, 40), rng.uniform(0, 6)});
    AtomCloud c = cloud_of(pts);
    CoarsenSpec s = tip_spec(1, 2, 3, 8.0);
    s.apex = {0, 0, 6};

    GeneratorSet g = select_generators(c, all_ids(c), s);
    g.require_valid();
    CHECK(g.size() > 0);
    CHECK(g.size() < 600);

    // Kept pairs respect min(R_cut) separation.
    for (int i = 0; i < g.size(); ++i)
        for (int j = i + 1; j < g.size(); ++j) {
            double d = g.points[i].dist(g.points[j]);
            double bound = std::min(clearance_radius(g.points[i], s),
                                    clearance_radius(g.points[j], s));
            CHECK(d >= bound - 1e-12);
        }

    // Every dropped atom is inside the clearance of some kept one
    // (otherwise the sweep would have kept it).
    std::set<int> kept_ids(g.atom_ids.begin(), g.atom_ids.end());
    for (int id = 0; id < c.size(); ++id) {
        if (kept_ids.count(id)) continue;
        double rc = clearance_radius(c.pos[id], s);
        bool covered = false;
        for (int i = 0; i < g.size() && !covered; ++i)
            covered = g.points[i].dist(c.pos[id]) < rc;
        CHECK(covered);
    }

    // Region tags match the geometry.
    for (int i = 0; i < g.size(); ++i)
        CHECK(g.regions[i] == region_of(g.points[i], s));

    // Determinism: same input, same output.
    GeneratorSet g2 = select_generators(c, all_ids(c), s);
    REQUIRE(g2.size() == g.size());
    for (int i = 0; i < g.size(); ++i) {
        CHECK(g2.points[i] == g.points[i]);
        CHECK(g2.atom_ids[i] == g.atom_ids[i]);
    }
}

TEST_CASE("raising any density factor never adds generators") {
    Rng rng(77);
    std::vector<Vec3> pts;
    for (int i = 0; i < 400; ++i)
        pts.push_back({rng.uniform(-30, 30), rng.uniform(-30, 30), rng.uniform(0, 12)});
    AtomCloud c = cloud_of(pts);
    std::vector<int> ids = all_ids(c);

    auto count = [&](int c1, int c2, int c3) {
        return select_generators(c, ids, tip_spec(c1, c2, c3, 6.0)).size();
    };

    CHECK(count(0, 0, 0) == 400);  // no thinning at factor zero
    int base = count(1, 1, 1);
    CHECK(base <= 400);
    CHECK(count(2, 1, 1) <= base);
    CHECK(count(1, 2, 1) <= base);
    CHECK(count(1, 1, 2) <= base);
    int prev = base;
    for (int f = 2; f <= 4; ++f) {
        int now = count(f, f, f);
        CHECK(now <= prev);
        prev = now;
    }
}

TEST_CASE("detect_spec finds apex, substrate height and radius") {
    // Hemispherical cap (radius 12) on a substrate annulus at z = 0.
    const double R = 12.0, lam = 2.55;
    std::vector<Vec3> pts;
    pts.push_back({0, 0, R});  // apex
    for (double th = lam / R; th < 1.55; th += lam / R) {
        double rring = R * std::sin(th), z = R * std::cos(th);
        int n = std::max(6, (int)std::ceil(2 * M_PI * rring / lam));
        for (int j = 0; j < n; ++j)
            pts.push_back({rring * std::cos(2 * M_PI * j / n),
                           rring * std::sin(2 * M_PI * j / n), z});
    }
    for (double rring = R + lam; rring < 40.0; rring += lam) {
        int n = std::max(6, (int)std::ceil(2 * M_PI * rring / lam));
        for (int j = 0; j < n; ++j)
            pts.push_back({rring * std::cos(2 * M_PI * j / n),
                           rring * std::sin(2 * M_PI * j / n), 0.0});
    }
    AtomCloud c = cloud_of(pts);

    CoarsenSpec s = detect_spec(c, all_ids(c), lam, 1, 1, 1);
    CHECK(s.apex.x == doctest::Approx(0.0));
    CHECK(s.apex.y == doctest::Approx(0.0));
    CHECK(s.apex.z == doctest::Approx(R));
    CHECK(s.base.z == doctest::Approx(0.0));          // substrate plane
    CHECK(s.base.x == doctest::Approx(0.0));
    CHECK(s.radius == doctest::Approx(R).epsilon(0.1));  // lateral reach of the cap
    CHECK(s.lambda == lam);

    // Flat patch: no elevated part, radius falls back to lambda and the
    // substrate height is the patch plane itself.
    std::vector<Vec3> flat;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) flat.push_back({i * lam, j * lam, 5.0});
    AtomCloud fc = cloud_of(flat);
    CoarsenSpec fs = detect_spec(fc, all_ids(fc), lam, 1, 1, 1);
    CHECK(fs.radius == doctest::Approx(lam));
    CHECK(fs.base.z == doctest::Approx(5.0));
    CHECK(fs.apex.z == doctest::Approx(5.0));
}

TEST_CASE("extend_domain grows rings with the far-region spacing law") {
    CoarsenSpec s = tip_spec(1, 1, 4, 5.0);
    ExtendOpts opt;
    opt.atom_box.expand({-20, -20, -5});
    opt.atom_box.expand({20, 20, 5});
    opt.z_substrate = 0.0;
    opt.d_ext = 60.0;

    GeneratorSet g;
    extend_domain(g, s, opt);
    g.require_valid();
    REQUIRE(g.size() > 0);

    std::vector<double> radii;
    for (int i = 0; i < g.size(); ++i) {
        const Vec3& p = g.points[i];
        CHECK(g.origins[i] == GenOrigin::Extended);
        CHECK(g.regions[i] == GenRegion::Far);
        CHECK(g.atom_ids[i] == -1);
        CHECK(p.z == 0.0);  // flat profile
        bool outside = p.x < -20 || p.x > 20 || p.y < -20 || p.y > 20;
        CHECK(outside);
        double rho = std::sqrt(p.x * p.x + p.y * p.y);
        CHECK(rho <= 60.0 * (1 + 1e-9));
        radii.push_back(rho);
    }

    // Recover the ring radii and check them against an independent
    // evaluation of the recurrence rho += max(clearance(rho), lambda).
    std::sort(radii.begin(), radii.end());
    std::vector<double> rings;
    for (double r : radii)
        if (rings.empty() || r - rings.back() > 1e-6) rings.push_back(r);

    std::vector<double> expect;
    double rho = 20.0;  // inscribed radius of the atomistic box
    while (true) {
        double rc = 4 * 0.1 * kLambda * std::sqrt(rho - 5.0) + 1 * kLambda / 4.0;
        rho += std::max(rc, kLambda);
        if (rho > 60.0) break;
        expect.push_back(rho);
    }
    REQUIRE(rings.size() == expect.size());
    for (size_t i = 0; i < rings.size(); ++i)
        CHECK(rings[i] == doctest::Approx(expect[i]).epsilon(1e-9));
    // Spacing widens outward.
    for (size_t i = 2; i < rings.size(); ++i)
        CHECK(rings[i] - rings[i - 1] > rings[i - 1] - rings[i - 2] - 1e-9);

    // Extension to exactly the box half-width adds nothing.
    GeneratorSet none;
    ExtendOpts tight = opt;
    tight.d_ext = 20.0;
    extend_domain(none, s, tight);
    CHECK(none.size() == 0);

    // Shrinking below the box is refused.
    ExtendOpts bad = opt;
    bad.d_ext = 10.0;
    CHECK_THROWS_AS(extend_domain(none, s, bad), std::runtime_error);
}

TEST_CASE("extend_domain with explicit points rejects points inside the box") {
    Aabb box;
    box.expand({-10, -10, -5});
    box.expand({10, 10, 5});

    GeneratorSet g;
    extend_domain(g, {{15, 0, 0}, {0, -12, 1}}, box);
    CHECK(g.size() == 2);
    CHECK(g.origins[0] == GenOrigin::Extended);

    CHECK_THROWS_WITH_AS(extend_domain(g, {{0, 0, 0}}, box),
                         doctest::Contains("inside the atomistic box"),
                         std::runtime_error);
    CHECK(g.size() == 2);  // failed call appended nothing before throwing
}

TEST_CASE("add_box_nodes covers corners, top and lateral walls") {
    Aabb box;
    box.expand({-10, -10, 0});
    box.expand({10, 10, 30});

    // Spacing larger than the box: only the 8 corners appear.
    GeneratorSet corners;
    add_box_nodes(corners, box, 1000.0);
    CHECK(corners.size() == 8);

    GeneratorSet g;
    add_box_nodes(g, box, 10.0);
    g.require_valid();
    CHECK(g.size() > 8);

    std::set<std::array<double, 3>> uniq;
    int bottom_interior = 0;
    for (int i = 0; i < g.size(); ++i) {
        const Vec3& p = g.points[i];
        CHECK(g.origins[i] == GenOrigin::Boundary);
        CHECK(g.regions[i] == GenRegion::Boundary);
        uniq.insert({p.x, p.y, p.z});

        bool on_top = p.z == 30.0;
        bool on_lateral = p.x == -10.0 || p.x == 10.0 || p.y == -10.0 || p.y == 10.0;
        CHECK((on_top || on_lateral));  // never strictly inside, never interior-bottom
        if (p.z == 0.0 && !on_lateral) ++bottom_interior;
    }
    CHECK(uniq.size() == static_cast<size_t>(g.size()));  // no duplicate nodes
    CHECK(bottom_interior == 0);

    // All 8 corners are present.
    for (double x : {-10.0, 10.0})
        for (double y : {-10.0, 10.0})
            for (double z : {0.0, 30.0}) CHECK(uniq.count({x, y, z}) == 1);

    // Spacing 10 over a 20-wide box puts a midpoint row on each wall.
    CHECK(uniq.count({0.0, 0.0, 30.0}) == 1);   // top face center
    CHECK(uniq.count({10.0, 0.0, 10.0}) == 1);  // lateral wall grid point
}

TEST_CASE("degenerate inputs are refused") {
    CoarsenSpec s = tip_spec(1, 1, 1);
    AtomCloud c = cloud_of({{0, 0, 0}});
    CHECK_THROWS_AS(select_generators(c, {}, s), std::runtime_error);
    CHECK_THROWS_AS(select_generators(c, {5}, s), std::runtime_error);  // id range

    CoarsenSpec bad = s;
    bad.radius = 0.0;
    CHECK_THROWS_AS(select_generators(c, {0}, bad), std::runtime_error);
    bad = s;
    bad.c2 = -1;
    CHECK_THROWS_AS(select_generators(c, {0}, bad), std::runtime_error);
    bad = s;
    bad.lambda = 0.0;
    CHECK_THROWS_AS(select_generators(c, {0}, bad), std::runtime_error);

    GeneratorSet g;
    Aabb flat;
    flat.expand({0, 0, 0});
    flat.expand({1, 1, 0});  // zero height
    CHECK_THROWS_AS(add_box_nodes(g, flat, 1.0), std::runtime_error);
    CHECK_THROWS_AS(add_box_nodes(g, Aabb{}, 1.0), std::runtime_error);
}
