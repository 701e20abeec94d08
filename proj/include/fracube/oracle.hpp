#pragma once

// Brute-force cross-checks for the exact face decisions: voxel iterates of the
// Hutchinson operator, and a prefix-set expansion that decides #F_a without
// the product search used by NeighborAutomaton::classify.

#include "fracube/core.hpp"
#include "fracube/faces.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fracube {

inline constexpr std::size_t kDefaultVoxelBudget = std::size_t{1} << 25;
/// Number of (vertex, vertex, difference) states plus one.
inline constexpr int kOracleDepthCap = 26 * 26 * 27 + 1;

/// Level-m approximation A_m = T^m([0,1]^3): cell c covers c/n^m + [0, n^-m]^3.
struct VoxelSet {
    int order = kDefaultOrder;
    int depth = 0;
    std::vector<std::array<std::int64_t, 3>> cells; // sorted by (z, y, x)

    std::int64_t side() const; // n^depth
    bool contains(const std::array<std::int64_t, 3>& cell) const;
};

/// Throws BudgetExceeded when |D|^m exceeds `budget` or coordinates overflow.
VoxelSet voxelize(const DigitSet& set, int depth, std::size_t budget = kDefaultVoxelBudget);

enum class EmptinessVerdict { CertifiedEmpty, Unknown };
std::string_view to_string(EmptinessVerdict v);

/// CertifiedEmpty iff A_m and A_m + a share no point (closed cells); sound
/// because F_a ⊆ A_m ∩ (A_m + a).
EmptinessVerdict oracle_face_empty(const VoxelSet& voxels, const Offset& alpha);
EmptinessVerdict oracle_face_empty(const DigitSet& set, const Offset& alpha, int depth);

enum class Cardinality { Empty, One, AtLeastTwo };
std::string_view to_string(Cardinality c);
Cardinality to_cardinality(FaceKind kind);

/// Breadth-first expansion of the live prefix set from alpha. Throws
/// DepthTooSmall if undecided after `max_depth` levels.
Cardinality oracle_face_cardinality(const DigitSet& set, const Offset& alpha, int max_depth = kOracleDepthCap);

struct OracleSweep {
    std::size_t checks = 0;
    std::size_t agreed = 0;
    std::vector<std::string> disagreements;

    bool ok() const { return disagreements.empty() && agreed == checks; }
};

/// All 26 offsets of every set: exact class vs prefix oracle, and voxel
/// CertifiedEmpty at `voxel_depth` must imply Empty.
OracleSweep oracle_sweep(std::span<const DigitSet> sets, int voxel_depth = 6, int workers = 1);

/// "x y z" per line.
std::string to_cells_text(const VoxelSet& voxels);
/// Boundary faces of the voxel union as a Wavefront OBJ triangle mesh in [0,1]^3.
std::string to_obj(const VoxelSet& voxels);
/// {"order":..,"depth":..,"cells":[[x,y,z],..]}
std::string to_cells_json(const VoxelSet& voxels);

} // namespace fracube
