#pragma once

// Digit sets of fractal cubes, the 48 symmetries of the cube, and canonical
// forms of digit sets under those symmetries.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fracube {

/// Occupancy code of a digit set: bit `cell_index(d)` is set iff d is present.
/// 128 bits cover every order up to 5.
using CellCode = unsigned __int128;

enum class Errc {
    ParseError,
    DuplicateDigit,
    OutOfRange,
    InvalidArgument,
    NotSingleton,
    OnePointViolation,
    Disconnected,
    TooLarge,
    LabelConflict,
    UnknownCode,
    BudgetExceeded,
    DepthTooSmall,
    InternalInconsistency,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline constexpr int kMinOrder = 2;
inline constexpr int kMaxOrder = 5;
inline constexpr int kDefaultOrder = 3;

struct Digit {
    int x = 0;
    int y = 0;
    int z = 0;

    int operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
    int& operator[](int axis) { return axis == 0 ? x : axis == 1 ? y : z; }
    bool operator==(const Digit&) const = default;
};

/// x + n*y + n^2*z.
constexpr int cell_index(const Digit& d, int n) { return d.x + n * d.y + n * n * d.z; }
constexpr Digit digit_at(int index, int n) { return {index % n, (index / n) % n, index / (n * n)}; }

inline CellCode cell_bit(int index) { return CellCode{1} << index; }
int popcount(CellCode code);

/// Validated order n in [2, 5]; throws InvalidArgument otherwise.
int checked_order(int n);

/// Immutable set of distinct digits in {0..n-1}^3, sorted by cell index.
class DigitSet {
public:
    DigitSet() = default;
    /// Throws OutOfRange or DuplicateDigit.
    DigitSet(int order, std::vector<Digit> digits);

    static DigitSet from_code(CellCode code, int order);

    int order() const { return order_; }
    std::size_t size() const { return digits_.size(); }
    bool empty() const { return digits_.empty(); }
    std::span<const Digit> digits() const { return digits_; }
    const Digit& operator[](std::size_t i) const { return digits_[i]; }
    CellCode code() const { return code_; }
    bool contains(const Digit& d) const;

    bool operator==(const DigitSet& other) const {
        return order_ == other.order_ && code_ == other.code_;
    }

private:
    int order_ = kDefaultOrder;
    std::vector<Digit> digits_;
    CellCode code_ = 0;
};

/// Accepts the compact form "020_101_110" and the braced tuple list
/// "{(0,2,0), (1,0,1)}" (LaTeX "\ " spacing and whitespace tolerated).
DigitSet parse_digitset(std::string_view text, int order = kDefaultOrder);

/// Underscore-joined "xyz" triples in cell-index order.
std::string render_compact(const DigitSet& set);
/// "{(0,2,0), (1,0,1), ...}".
std::string render_braced(const DigitSet& set);

/// Signed permutation of the coordinate axes acting on the cube [0, n-1]^3.
/// Output axis i reads input axis perm[i], reflected if bit i of flips is set.
struct Isometry {
    std::array<std::uint8_t, 3> perm{0, 1, 2};
    std::uint8_t flips = 0;

    bool flipped(int axis) const { return (flips >> axis) & 1U; }

    Digit apply(const Digit& d, int n) const;
    /// Linear part, used on offsets in {-1,0,1}^3.
    std::array<int, 3> apply_linear(const std::array<int, 3>& v) const;

    bool operator==(const Isometry&) const = default;
};

Isometry identity_isometry();
/// (a * b)(x) = a(b(x)).
Isometry compose(const Isometry& a, const Isometry& b);
Isometry inverse(const Isometry& g);
/// The 48 symmetries in a fixed order; element 0 is the identity.
const std::array<Isometry, 48>& all_isometries();
std::string describe(const Isometry& g);

DigitSet apply_isometry(const Isometry& g, const DigitSet& set);
CellCode apply_isometry(const Isometry& g, CellCode code, int order);

struct CanonicalForm {
    DigitSet canonical;
    int orbit_size = 0;
    int stabilizer_size = 0;
    /// First isometry (in all_isometries() order) taking the input to `canonical`.
    Isometry witness;
};

/// Orbit minimum of the occupancy code over the 48 symmetries.
CanonicalForm canonical_form(const DigitSet& set);

/// Binomial coefficient; exact for the sizes used here (throws on overflow).
std::uint64_t binomial(int n, int k);

std::string to_decimal(CellCode code);

} // namespace fracube
