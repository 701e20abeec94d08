#pragma once

// Faces F_a = K ∩ (K + a) of a fractal cube K, decided exactly through the
// neighbor automaton on the 26 offsets a ∈ {-1,0,1}^3 \ {0}.
//
// A point x lies in K ∩ (K + u) iff x = (y + d)/n and x - u = (y' + d')/n for
// digits d, d' and y ∈ K ∩ (K + v) with v = n*u + d' - d. Infinite label paths
// from u therefore enumerate F_u, and x = Σ d_k n^-k over the first labels.

#include "fracube/core.hpp"
#include "fracube/rational.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fracube {

struct Offset {
    int a = 0;
    int b = 0;
    int c = 0;

    static constexpr int kSlots = 27;
    static constexpr int kZeroSlot = 13;

    /// Slot in [0, 27): (a+1) + 3(b+1) + 9(c+1); the zero vector sits at 13.
    constexpr int slot() const { return (a + 1) + 3 * (b + 1) + 9 * (c + 1); }
    static constexpr Offset from_slot(int s) { return {s % 3 - 1, (s / 3) % 3 - 1, s / 9 - 1}; }

    int operator[](int axis) const { return axis == 0 ? a : axis == 1 ? b : c; }
    std::array<int, 3> vec() const { return {a, b, c}; }
    bool is_zero() const { return a == 0 && b == 0 && c == 0; }
    Offset operator-() const { return {-a, -b, -c}; }
    bool operator==(const Offset&) const = default;
};

/// The 26 nonzero offsets in slot order.
const std::array<Offset, 26>& all_offsets();
/// a - b when it lies in {-1,0,1}^3 \ {0}.
std::optional<Offset> offset_between(const Digit& a, const Digit& b);
Offset apply_linear(const Isometry& g, const Offset& o);
std::string to_string(const Offset& o);

/// Exact point with eventually periodic base-n expansion per coordinate:
/// x = 0.a_1...a_p (b_1...b_q) repeating.
struct TriadicPoint {
    int base = kDefaultOrder;
    std::vector<Digit> preperiod;
    std::vector<Digit> period;
    RationalPoint value;
};

/// Value of the expansion given by `preperiod` followed by `period` repeated
/// forever; `period` must be nonempty.
RationalPoint expansion_value(std::span<const Digit> preperiod, std::span<const Digit> period, int base);

enum class FaceKind { Empty, Point, Multi };
std::string_view to_string(FaceKind kind);

struct FaceClass {
    FaceKind kind = FaceKind::Empty;
    std::optional<TriadicPoint> point; // set iff kind == Point
};

class NeighborAutomaton {
public:
    /// Labels are indices into the digit set's sorted digit list.
    struct Edge {
        std::uint8_t target;
        std::uint8_t first;
        std::uint8_t second;
    };

    explicit NeighborAutomaton(DigitSet set);

    const DigitSet& digit_set() const { return set_; }
    std::span<const Edge> edges(const Offset& u) const { return edges(u.slot()); }
    std::span<const Edge> edges(int slot) const {
        return {edges_.data() + start_[slot], edges_.data() + start_[slot + 1]};
    }
    std::size_t edge_count() const { return edges_.size(); }

    /// u has an infinite outgoing path, i.e. F_u is nonempty.
    bool live(const Offset& u) const { return live_[u.slot()]; }
    bool live(int slot) const { return live_[slot]; }

    /// Exact three-way cardinality class of F_a.
    FaceKind classify(const Offset& alpha) const;
    /// classify() plus the point when F_a is a singleton.
    FaceClass face_class(const Offset& alpha) const;
    /// Unique point of a singleton F_a; throws NotSingleton otherwise.
    TriadicPoint face_point(const Offset& alpha) const;

    /// One line per edge: "u -> v : (d,d')".
    std::string dump() const;

private:
    DigitSet set_;
    std::vector<Edge> edges_;
    std::array<std::uint32_t, Offset::kSlots + 1> start_{};
    std::array<bool, Offset::kSlots> live_{};
};

NeighborAutomaton build_automaton(const DigitSet& set);
FaceClass classify_face(const DigitSet& set, const Offset& alpha);
TriadicPoint face_point(const DigitSet& set, const Offset& alpha);

} // namespace fracube
