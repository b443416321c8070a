#include "nanofield/grid_index.h"

#include <algorithm>
#include <cmath>

#include "nanofield/check.h"

namespace nanofield {

GridIndex::GridIndex(const std::vector<Vec3>& pts, double cell)
    : pts_(&pts), n_(static_cast<int>(pts.size())), cell_(cell) {
    check(cell > 0.0, "GridIndex: cell size must be positive");
    if (n_ == 0) {
        start_.assign(2, 0);
        return;
    }
    box_.expand(pts);
    Vec3 s = box_.size();
    nx_ = std::max(1, static_cast<int>(s.x / cell_) + 1);
    ny_ = std::max(1, static_cast<int>(s.y / cell_) + 1);
    nz_ = std::max(1, static_cast<int>(s.z / cell_) + 1);
    // Cap the cell array so pathological cell sizes cannot exhaust memory.
    while (static_cast<size_t>(nx_) * ny_ * nz_ > 1u << 27) {
        cell_ *= 2.0;
        nx_ = std::max(1, static_cast<int>(s.x / cell_) + 1);
        ny_ = std::max(1, static_cast<int>(s.y / cell_) + 1);
        nz_ = std::max(1, static_cast<int>(s.z / cell_) + 1);
    }
    size_t ncell = static_cast<size_t>(nx_) * ny_ * nz_;
    std::vector<int> count(ncell, 0);
    std::vector<size_t> cell_of(n_);
    for (int i = 0; i < n_; ++i) {
        const Vec3& p = pts[i];
        int ix = std::min(nx_ - 1, static_cast<int>((p.x - box_.lo.x) / cell_));
        int iy = std::min(ny_ - 1, static_cast<int>((p.y - box_.lo.y) / cell_));
        int iz = std::min(nz_ - 1, static_cast<int>((p.z - box_.lo.z) / cell_));
        cell_of[i] = flat(ix, iy, iz);
        ++count[cell_of[i]];
    }
    start_.assign(ncell + 1, 0);
    for (size_t c = 0; c < ncell; ++c) start_[c + 1] = start_[c] + count[c];
    item_.resize(n_);
    std::vector<int> cursor(start_.begin(), start_.end() - 1);
    for (int i = 0; i < n_; ++i) item_[cursor[cell_of[i]]++] = i;
}

void GridIndex::cell_range(const Vec3& p, double radius,
                           int& ix0, int& iy0, int& iz0,
                           int& ix1, int& iy1, int& iz1) const {
    auto clamp = [](int v, int hi) { return std::max(0, std::min(hi - 1, v)); };
    ix0 = clamp(static_cast<int>(std::floor((p.x - radius - box_.lo.x) / cell_)), nx_);
    iy0 = clamp(static_cast<int>(std::floor((p.y - radius - box_.lo.y) / cell_)), ny_);
    iz0 = clamp(static_cast<int>(std::floor((p.z - radius - box_.lo.z) / cell_)), nz_);
    ix1 = clamp(static_cast<int>(std::floor((p.x + radius - box_.lo.x) / cell_)), nx_);
    iy1 = clamp(static_cast<int>(std::floor((p.y + radius - box_.lo.y) / cell_)), ny_);
    iz1 = clamp(static_cast<int>(std::floor((p.z + radius - box_.lo.z) / cell_)), nz_);
}

int GridIndex::nearest(const Vec3& p, double radius_hint) const {
    if (n_ == 0) return -1;
    double r = std::max(radius_hint, cell_ * 0.5);
    // Every point within r is enumerated, so a hit at d <= r is the true
    // nearest; otherwise double the radius and retry.
    for (;;) {
        int best = -1;
        double best_d2 = r * r;
        for_near(p, r, [&](int i) {
            double d2 = (*pts_)[i].dist2(p);
            if (d2 < best_d2 || (d2 == best_d2 && (best < 0 || i < best))) {
                best_d2 = d2;
                best = i;
            }
        });
        if (best >= 0) return best;
        r *= 2.0;
    }
}

}  // namespace nanofield
