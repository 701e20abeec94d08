#pragma once

#include "fracube/core.hpp"
#include "fracube/pipeline.hpp"

#include <string>
#include <vector>

namespace fixtures {

inline const char* const kPlus = "011_101_110_111_112_121_211";
inline const char* const kCorners = "000_002_020_200_022_202_220";
inline const char* const kSegment = "000_001_002";
inline const char* const kTree711 = "020_101_110_111_112_121_202";
inline const char* const kTree79 = "002_102_110_111_112_120_202";
inline const char* const kTree76 = "002_100_101_102_111_121_202";
inline const char* const kNonden1 = "012_021_102_111_120_201_210";

inline fracube::DigitSet set(const char* text, int order = fracube::kDefaultOrder) {
    return fracube::parse_digitset(text, order);
}

inline fracube::DigitSet full_cube(int order) {
    std::vector<fracube::Digit> all;
    for (int z = 0; z < order; ++z)
        for (int y = 0; y < order; ++y)
            for (int x = 0; x < order; ++x) all.push_back({x, y, z});
    return {order, all};
}

inline const std::vector<fracube::ReferenceEntry>& reference() {
    static const auto entries = fracube::bundled_reference_table();
    return entries;
}

} // namespace fixtures
