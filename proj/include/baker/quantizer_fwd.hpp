#pragma once

#include <string_view>

namespace baker {

enum class Family { BalazsVoros, Saraceno, Generic, ShorBaker };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

/// BalazsVoros, Saraceno and Generic share the same block-DFT structure.
constexpr bool is_generic_type(Family family) {
    return family != Family::ShorBaker;
}

} // namespace baker
