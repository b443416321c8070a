/*
 * vtk_io.h
 * Legacy-VTK mesh export. Writes tet and hex meshes as ASCII
 * UNSTRUCTURED_GRID files with optional per-node scalar and vector fields,
 * the plain-text flavor every VTK-compatible viewer reads and version
 * control can diff. Output is deterministic: fixed number formatting,
 * fields in insertion order.
 */
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nanofield/hexmesh.h"
#include "nanofield/tetmesh.h"
#include "nanofield/vec3.h"

namespace nanofield {

// Named per-node data attached to a mesh export. Every field must have one
// value per mesh node; names must be single tokens (no whitespace).
struct NodalFields {
    std::vector<std::pair<std::string, std::vector<double>>> scalars;
    std::vector<std::pair<std::string, std::vector<Vec3>>> vectors;

    void add(const std::string& name, std::vector<double> values) {
        scalars.emplace_back(name, std::move(values));
    }
    void add(const std::string& name, std::vector<Vec3> values) {
        vectors.emplace_back(name, std::move(values));
    }
    bool empty() const { return scalars.empty() && vectors.empty(); }
};

// Writes the mesh as a VTK legacy ASCII 3.0 UNSTRUCTURED_GRID file:
// tetrahedra as cell type 10, hexahedra as cell type 12, fields as
// POINT_DATA sections. Throws on field-length mismatch, malformed field
// names, or an unwritable path.
void write_vtk(const TetMesh& mesh, const NodalFields& fields, const std::string& path);
void write_vtk(const HexMesh& mesh, const NodalFields& fields, const std::string& path);

}  // namespace nanofield
