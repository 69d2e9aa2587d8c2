#pragma once

// Fixed matrices in GL_2(Z) and GL_3(Z) covering bounded, polynomial and exponential growth.

#include "projdyn/matrix.hpp"

#include <string>
#include <vector>

namespace projdyn::suite {

struct GrowthCase {
    std::string name;
    IntMatrix a;
};

inline std::vector<GrowthCase> growth_cases() {
    return {
        {"identity2", IntMatrix{{1, 0}, {0, 1}}},
        {"minus_identity2", IntMatrix{{-1, 0}, {0, -1}}},
        {"rotation4", IntMatrix{{0, -1}, {1, 0}}},
        {"rotation3", IntMatrix{{0, -1}, {1, -1}}},
        {"rotation6", IntMatrix{{1, -1}, {1, 0}}},
        {"swap2", IntMatrix{{0, 1}, {1, 0}}},
        {"shear", IntMatrix{{1, 1}, {0, 1}}},
        {"shear_lower2", IntMatrix{{1, 0}, {2, 1}}},
        {"minus_shear", IntMatrix{{-1, 1}, {0, -1}}},
        {"cat", IntMatrix{{2, 1}, {1, 1}}},
        {"fibonacci", IntMatrix{{1, 1}, {1, 0}}},
        {"trace4", IntMatrix{{3, 2}, {1, 1}}},
        {"identity3", IntMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}},
        {"minus_identity3", IntMatrix{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}},
        {"cycle3", IntMatrix{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}},
        {"rotation4_3d", IntMatrix{{1, 0, 0}, {0, 0, -1}, {0, 1, 0}}},
        {"shear3_partial", IntMatrix{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}},
        {"shear3_full", IntMatrix{{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}},
        {"shear3_twisted", IntMatrix{{1, 1, 0}, {0, 1, 0}, {0, 0, -1}}},
        {"cat_plus_one", IntMatrix{{2, 1, 0}, {1, 1, 0}, {0, 0, 1}}},
        {"cat3", IntMatrix{{1, 1, 0}, {1, 2, 0}, {0, 0, -1}}},
        {"companion3", IntMatrix{{0, 1, 0}, {0, 0, 1}, {1, 1, 1}}},
    };
}

}  // namespace projdyn::suite
