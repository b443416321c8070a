/*
 * hilbert.h
 * 3-D Hilbert curve keys for spatially coherent orderings. Coordinates are
 * quantized to `bits` per axis over a bounding box and converted with the
 * Skilling transpose transform; consecutive keys map to face-adjacent cells.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "nanofield/aabb.h"
#include "nanofield/vec3.h"

namespace nanofield {

// In-place conversion between axis coordinates and the transpose form of the
// Hilbert index (n coordinates of `bits` bits each).
void axes_to_transpose(uint32_t* x, int bits, int n);
void transpose_to_axes(uint32_t* x, int bits, int n);

// Packed Hilbert key for quantized coordinates (3 * bits <= 63).
uint64_t hilbert_key(uint32_t ix, uint32_t iy, uint32_t iz, int bits);

// Inverse of hilbert_key.
void hilbert_decode(uint64_t key, int bits, uint32_t& ix, uint32_t& iy, uint32_t& iz);

// Permutation that visits pts in Hilbert order over their bounding box.
// Stable: equal keys keep input order, so an already-sorted input maps to
// the identity on re-sort.
std::vector<int> hilbert_order(const std::vector<Vec3>& pts, int bits = 21);

}  // namespace nanofield
