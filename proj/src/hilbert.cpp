#include "nanofield/hilbert.h"

#include <algorithm>
#include <cmath>

#include "nanofield/check.h"

namespace nanofield {

// Skilling, "Programming the Hilbert curve" (2004): Gray-code the transpose
// and undo the per-level rotations.
void axes_to_transpose(uint32_t* x, int bits, int n) {
    uint32_t m = 1u << (bits - 1);
    // Inverse undo.
    for (uint32_t q = m; q > 1; q >>= 1) {
        uint32_t p = q - 1;
        for (int i = 0; i < n; ++i) {
            if (x[i] & q) {
                x[0] ^= p;
            } else {
                uint32_t t = (x[0] ^ x[i]) & p;
                x[0] ^= t;
                x[i] ^= t;
            }
        }
    }
    // Gray encode.
    for (int i = 1; i < n; ++i) x[i] ^= x[i - 1];
    uint32_t t = 0;
    for (uint32_t q = m; q > 1; q >>= 1)
        if (x[n - 1] & q) t ^= q - 1;
    for (int i = 0; i < n; ++i) x[i] ^= t;
}

void transpose_to_axes(uint32_t* x, int bits, int n) {
    uint32_t m = 2u << (bits - 1);
    // Gray decode by H ^ (H/2).
    uint32_t t = x[n - 1] >> 1;
    for (int i = n - 1; i > 0; --i) x[i] ^= x[i - 1];
    x[0] ^= t;
    // Undo excess work.
    for (uint32_t q = 2; q != m; q <<= 1) {
        uint32_t p = q - 1;
        for (int i = n - 1; i >= 0; --i) {
            if (x[i] & q) {
                x[0] ^= p;
            } else {
                t = (x[0] ^ x[i]) & p;
                x[0] ^= t;
                x[i] ^= t;
            }
        }
    }
}

uint64_t hilbert_key(uint32_t ix, uint32_t iy, uint32_t iz, int bits) {
    check(bits >= 1 && bits <= 21, "hilbert_key: bits must be in [1, 21]");
    uint32_t x[3] = {ix, iy, iz};
    axes_to_transpose(x, bits, 3);
    uint64_t key = 0;
    for (int b = bits - 1; b >= 0; --b)
        for (int i = 0; i < 3; ++i)
            key = (key << 1) | ((x[i] >> b) & 1u);
    return key;
}

void hilbert_decode(uint64_t key, int bits, uint32_t& ix, uint32_t& iy, uint32_t& iz) {
    uint32_t x[3] = {0, 0, 0};
    for (int b = bits - 1; b >= 0; --b)
        for (int i = 0; i < 3; ++i) {
            x[i] |= static_cast<uint32_t>((key >> (3 * b + 2 - i)) & 1u) << b;
        }
    transpose_to_axes(x, bits, 3);
    ix = x[0];
    iy = x[1];
    iz = x[2];
}

std::vector<int> hilbert_order(const std::vector<Vec3>& pts, int bits) {
    int n = static_cast<int>(pts.size());
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    if (n < 2) return perm;

    Aabb box;
    box.expand(pts);
    Vec3 s = box.size();
    double scale = static_cast<double>((1u << bits) - 1);
    auto quant = [&](double v, double lo, double ext) -> uint32_t {
        if (ext <= 0.0) return 0;
        double t = (v - lo) / ext * scale;
        t = std::max(0.0, std::min(scale, t));
        return static_cast<uint32_t>(t + 0.5);
    };
    std::vector<uint64_t> key(n);
    for (int i = 0; i < n; ++i)
        key[i] = hilbert_key(quant(pts[i].x, box.lo.x, s.x),
                             quant(pts[i].y, box.lo.y, s.y),
                             quant(pts[i].z, box.lo.z, s.z), bits);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int a, int b) { return key[a] < key[b]; });
    return perm;
}

}  // namespace nanofield
