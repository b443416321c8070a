/*
 * grid_index.h
 * Uniform-grid spatial index over a fixed point set. Cell size is chosen by
 * the caller (typically the query radius); fixed-radius queries then touch
 * at most a constant number of cells. Distances at exactly the query radius
 * count as inside.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "nanofield/aabb.h"
#include "nanofield/vec3.h"

namespace nanofield {

class GridIndex {
public:
    GridIndex() = default;  // empty index; all queries come back empty
    GridIndex(const std::vector<Vec3>& pts, double cell);

    // Calls fn(i) for every indexed point with |pts[i] - p| <= radius.
    template <typename F>
    void for_near(const Vec3& p, double radius, F&& fn) const {
        if (n_ == 0) return;
        int ix0, iy0, iz0, ix1, iy1, iz1;
        cell_range(p, radius, ix0, iy0, iz0, ix1, iy1, iz1);
        double r2 = radius * radius;
        for (int iz = iz0; iz <= iz1; ++iz)
            for (int iy = iy0; iy <= iy1; ++iy)
                for (int ix = ix0; ix <= ix1; ++ix) {
                    size_t c = flat(ix, iy, iz);
                    for (int k = start_[c]; k < start_[c + 1]; ++k) {
                        int i = item_[k];
                        if ((*pts_)[i].dist2(p) <= r2) fn(i);
                    }
                }
    }

    std::vector<int> near(const Vec3& p, double radius) const {
        std::vector<int> out;
        for_near(p, radius, [&](int i) { out.push_back(i); });
        return out;
    }

    // Index of the nearest point to p, or -1 if the set is empty. Starts at
    // radius_hint and doubles until a hit is found.
    int nearest(const Vec3& p, double radius_hint) const;

    double cell_size() const { return cell_; }

private:
    size_t flat(int ix, int iy, int iz) const {
        return (static_cast<size_t>(iz) * ny_ + iy) * nx_ + ix;
    }
    void cell_range(const Vec3& p, double radius,
                    int& ix0, int& iy0, int& iz0, int& ix1, int& iy1, int& iz1) const;

    const std::vector<Vec3>* pts_ = nullptr;
    int n_ = 0;
    double cell_ = 1.0;
    Aabb box_;
    int nx_ = 1, ny_ = 1, nz_ = 1;
    std::vector<int> start_;  // CSR cell offsets, size nx*ny*nz + 1
    std::vector<int> item_;   // point ids bucketed by cell
};

}  // namespace nanofield
