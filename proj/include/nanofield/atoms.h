#pragma once

#include <string>
#include <vector>

#include "nanofield/check.h"
#include "nanofield/vec3.h"

namespace nanofield {

// Per-atom classification produced by the surface extraction stage.
enum class AtomLabel : uint8_t {
    Unclassified = 0,
    Bulk,
    Surface,
    Cluster,    // part of a detached cluster (not the main body)
    Evaporated, // lone atom, DBSCAN noise
};

struct AtomCloud {
    std::vector<Vec3> pos;
    std::vector<std::string> species;
    std::vector<AtomLabel> labels;
    std::string comment;

    int size() const { return static_cast<int>(pos.size()); }

    void require_valid(const std::string& who) const {
        check(!pos.empty(), who + ": atom cloud is empty");
        check(species.size() == pos.size(), who + ": species/position size mismatch");
        for (size_t i = 0; i < pos.size(); ++i)
            check(pos[i].finite(), who + ": non-finite coordinates at atom " + std::to_string(i));
    }
};

}  // namespace nanofield
