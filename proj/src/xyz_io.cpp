#include "nanofield/xyz_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nanofield/check.h"

namespace nanofield {

namespace {

// %.17g round-trips every double exactly.
std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string g10(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

AtomCloud read_xyz_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    auto where = [&](int n) { return origin + ": line " + std::to_string(n); };

    check(static_cast<bool>(std::getline(in, line)), "read_xyz: " + where(1) + ": empty file");
    long n = 0;
    {
        std::istringstream ls(line);
        check(static_cast<bool>(ls >> n), "read_xyz: " + where(1) + ": expected atom count");
        std::string rest;
        check(!(ls >> rest), "read_xyz: " + where(1) + ": trailing junk after atom count");
    }
    check(n >= 1, "read_xyz: " + where(1) + ": atom count must be >= 1");

    AtomCloud cloud;
    check(static_cast<bool>(std::getline(in, cloud.comment)),
          "read_xyz: " + where(2) + ": missing comment line");
    if (!cloud.comment.empty() && cloud.comment.back() == '\r') cloud.comment.pop_back();

    cloud.pos.reserve(n);
    cloud.species.reserve(n);
    for (long i = 0; i < n; ++i) {
        int lineno = static_cast<int>(i) + 3;
        check(static_cast<bool>(std::getline(in, line)),
              "read_xyz: " + where(lineno) + ": unexpected end of file (expected " +
                  std::to_string(n) + " atom lines)");
        std::istringstream ls(line);
        std::string sp;
        double x, y, z;
        check(static_cast<bool>(ls >> sp >> x >> y >> z),
              "read_xyz: " + where(lineno) + ": expected 'species x y z'");
        check(std::isfinite(x) && std::isfinite(y) && std::isfinite(z),
              "read_xyz: " + where(lineno) + ": non-finite coordinate");
        cloud.species.push_back(sp);
        cloud.pos.push_back({x, y, z});
    }
    cloud.labels.assign(cloud.pos.size(), AtomLabel::Unclassified);
    return cloud;
}

AtomCloud read_xyz(const std::string& path) {
    std::ifstream in(path);
    check(in.good(), "read_xyz: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_xyz_text(ss.str(), path);
}

void write_xyz(const std::string& path, const AtomCloud& cloud) {
    cloud.require_valid("write_xyz");
    std::ofstream out(path);
    check(out.good(), "write_xyz: cannot open '" + path + "' for writing");
    out << cloud.size() << "\n"
        << (cloud.comment.empty() ? "generated by nanofield" : cloud.comment) << "\n";
    for (int i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.pos[i];
        out << cloud.species[i] << " " << g17(p.x) << " " << g17(p.y) << " " << g17(p.z) << "\n";
    }
    check(out.good(), "write_xyz: write failed for '" + path + "'");
}

std::string format_atom_field(const AtomCloud& cloud, const std::vector<Vec3>& field) {
    cloud.require_valid("write_atom_field");
    check(field.size() == cloud.pos.size(),
          "write_atom_field: field size does not match atom count");
    std::ostringstream out;
    out << cloud.size() << "\n"
        << "per-atom electric field, columns: species x[A] y[A] z[A] Ex Ey Ez |E| [V/nm]\n";
    for (int i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.pos[i];
        const Vec3& e = field[i];
        out << cloud.species[i] << " " << g17(p.x) << " " << g17(p.y) << " " << g17(p.z)
            << " " << g10(e.x) << " " << g10(e.y) << " " << g10(e.z) << " " << g10(e.norm())
            << "\n";
    }
    return out.str();
}

void write_atom_field(const std::string& path, const AtomCloud& cloud,
                      const std::vector<Vec3>& field) {
    std::ofstream out(path);
    check(out.good(), "write_atom_field: cannot open '" + path + "' for writing");
    out << format_atom_field(cloud, field);
    check(out.good(), "write_atom_field: write failed for '" + path + "'");
}

}  // namespace nanofield
