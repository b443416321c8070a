#include "nanofield/vtk_io.h"

#include <cstdio>
#include <fstream>

#include "nanofield/check.h"

namespace nanofield {

namespace {

// Fixed, locale-independent number format so files are byte-reproducible.
void put(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    out += buf;
}

void put_point(std::string& out, const Vec3& p) {
    put(out, p.x);
    out += ' ';
    put(out, p.y);
    out += ' ';
    put(out, p.z);
    out += '\n';
}

void check_fields(const NodalFields& fields, size_t n_nodes) {
    auto check_name = [](const std::string& name) {
        check(!name.empty(), "write_vtk: empty field name");
        check(name.find_first_of(" \t\n\r") == std::string::npos,
              "write_vtk: field name '" + name + "' contains whitespace");
    };
    for (const auto& [name, vals] : fields.scalars) {
        check_name(name);
        check(vals.size() == n_nodes,
              "write_vtk: field '" + name + "' has " + std::to_string(vals.size()) +
                  " values for " + std::to_string(n_nodes) + " nodes");
    }
    for (const auto& [name, vals] : fields.vectors) {
        check_name(name);
        check(vals.size() == n_nodes,
              "write_vtk: field '" + name + "' has " + std::to_string(vals.size()) +
                  " values for " + std::to_string(n_nodes) + " nodes");
    }
}

void append_fields(std::string& out, const NodalFields& fields, size_t n_nodes) {
    if (fields.empty()) return;
    out += "POINT_DATA " + std::to_string(n_nodes) + "\n";
    for (const auto& [name, vals] : fields.scalars) {
        out += "SCALARS " + name + " double 1\nLOOKUP_TABLE default\n";
        for (double v : vals) {
            put(out, v);
            out += '\n';
        }
    }
    for (const auto& [name, vals] : fields.vectors) {
        out += "VECTORS " + name + " double\n";
        for (const Vec3& v : vals) put_point(out, v);
    }
}

template <size_t K>
void write_grid(const std::vector<Vec3>& nodes,
                const std::vector<std::array<int, K>>& cells, int cell_type,
                const NodalFields& fields, const std::string& path) {
    check_fields(fields, nodes.size());

    std::string out;
    out.reserve(64 * nodes.size() + 8 * (K + 1) * cells.size());
    out += "# vtk DataFile Version 3.0\n";
    out += "nanofield mesh export\n";
    out += "ASCII\n";
    out += "DATASET UNSTRUCTURED_GRID\n";
    out += "POINTS " + std::to_string(nodes.size()) + " double\n";
    for (const Vec3& p : nodes) put_point(out, p);

    out += "CELLS " + std::to_string(cells.size()) + ' ' +
           std::to_string(cells.size() * (K + 1)) + '\n';
    for (const auto& c : cells) {
        out += std::to_string(K);
        for (int id : c) {
            out += ' ';
            out += std::to_string(id);
        }
        out += '\n';
    }
    out += "CELL_TYPES " + std::to_string(cells.size()) + '\n';
    for (size_t i = 0; i < cells.size(); ++i) {
        out += std::to_string(cell_type);
        out += '\n';
    }

    append_fields(out, fields, nodes.size());

    std::ofstream f(path, std::ios::binary);
    if (!f) fail("write_vtk: cannot open '" + path + "' for writing");
    f.write(out.data(), (std::streamsize)out.size());
    f.close();
    if (!f) fail("write_vtk: write to '" + path + "' failed");
}

}  // namespace

void write_vtk(const TetMesh& mesh, const NodalFields& fields, const std::string& path) {
    write_grid(mesh.nodes, mesh.tets, 10, fields, path);
}

void write_vtk(const HexMesh& mesh, const NodalFields& fields, const std::string& path) {
    write_grid(mesh.nodes, mesh.hexes, 12, fields, path);
}

}  // namespace nanofield
