/*
 * xyz_io.h
 * XYZ atom files: a count line, a free-form comment line, then one
 * "species x y z" line per atom. Extra columns after z are ignored on read,
 * which makes the per-atom field files written here readable as plain
 * clouds again. Field components are written in V/nm.
 */
#pragma once

#include <string>
#include <vector>

#include "nanofield/atoms.h"
#include "nanofield/vec3.h"

namespace nanofield {

// Throws with the offending line number on malformed input: bad count,
// truncated file, unparsable or non-finite coordinates.
AtomCloud read_xyz(const std::string& path);
AtomCloud read_xyz_text(const std::string& text, const std::string& origin);

void write_xyz(const std::string& path, const AtomCloud& cloud);

// Extended rows "species x y z Ex Ey Ez |E|". field must hold one vector
// per atom, already in output units.
void write_atom_field(const std::string& path, const AtomCloud& cloud,
                      const std::vector<Vec3>& field);

std::string format_atom_field(const AtomCloud& cloud, const std::vector<Vec3>& field);

}  // namespace nanofield
