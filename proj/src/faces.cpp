#include "fracube/faces.hpp"

#include <algorithm>
#include <bitset>
#include <cstdlib>
#include <functional>

namespace fracube {

const std::array<Offset, 26>& all_offsets() {
    static const std::array<Offset, 26> table = [] {
        std::array<Offset, 26> t{};
        std::size_t k = 0;
        for (int s = 0; s < Offset::kSlots; ++s)
            if (s != Offset::kZeroSlot) t[k++] = Offset::from_slot(s);
        return t;
    }();
    return table;
}

std::optional<Offset> offset_between(const Digit& a, const Digit& b) {
    Offset o{a.x - b.x, a.y - b.y, a.z - b.z};
    if (std::abs(o.a) > 1 || std::abs(o.b) > 1 || std::abs(o.c) > 1 || o.is_zero()) return std::nullopt;
    return o;
}

Offset apply_linear(const Isometry& g, const Offset& o) {
    auto v = g.apply_linear(o.vec());
    return {v[0], v[1], v[2]};
}

std::string to_string(const Offset& o) {
    return "(" + std::to_string(o.a) + "," + std::to_string(o.b) + "," + std::to_string(o.c) + ")";
}

std::string_view to_string(FaceKind kind) {
    switch (kind) {
    case FaceKind::Empty: return "Empty";
    case FaceKind::Point: return "Point";
    case FaceKind::Multi: return "Multi";
    }
    return "?";
}

RationalPoint expansion_value(std::span<const Digit> preperiod, std::span<const Digit> period, int base) {
    if (period.empty()) throw Error(Errc::InvalidArgument, "expansion needs a nonempty period");
    RationalPoint out;
    for (int axis = 0; axis < 3; ++axis) {
        __int128 head = 0;
        __int128 head_scale = 1;
        for (const Digit& d : preperiod) {
            head = head * base + d[axis];
            head_scale *= base;
        }
        __int128 cycle = 0;
        __int128 cycle_scale = 1;
        for (const Digit& d : period) {
            cycle = cycle * base + d[axis];
            cycle_scale *= base;
        }
        // head/n^p + cycle / (n^p (n^q - 1))
        __int128 num = head * (cycle_scale - 1) + cycle;
        __int128 den = head_scale * (cycle_scale - 1);
        if (den > INT64_MAX || num > INT64_MAX) throw Error(Errc::TooLarge, "expansion too long for 64-bit rationals");
        out[axis] = Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
    }
    return out;
}

namespace {

bool fits_offset(const std::array<int, 3>& v) {
    return std::abs(v[0]) <= 1 && std::abs(v[1]) <= 1 && std::abs(v[2]) <= 1;
}

int slot_of(const std::array<int, 3>& v) { return (v[0] + 1) + 3 * (v[1] + 1) + 9 * (v[2] + 1); }

} // namespace

NeighborAutomaton::NeighborAutomaton(DigitSet set) : set_(std::move(set)) {
    const int n = set_.order();
    const auto digits = set_.digits();
    for (int u = 0; u < Offset::kSlots; ++u) {
        start_[u] = static_cast<std::uint32_t>(edges_.size());
        if (u == Offset::kZeroSlot) continue;
        const Offset from = Offset::from_slot(u);
        for (std::size_t i = 0; i < digits.size(); ++i) {
            for (std::size_t j = 0; j < digits.size(); ++j) {
                std::array<int, 3> v{};
                for (int axis = 0; axis < 3; ++axis) v[axis] = n * from[axis] + digits[j][axis] - digits[i][axis];
                if (!fits_offset(v)) continue;
                const int target = slot_of(v);
                if (target == Offset::kZeroSlot)
                    throw Error(Errc::InternalInconsistency, "automaton edge into the zero offset");
                edges_.push_back({static_cast<std::uint8_t>(target), static_cast<std::uint8_t>(i),
                                  static_cast<std::uint8_t>(j)});
            }
        }
    }
    start_[Offset::kSlots] = static_cast<std::uint32_t>(edges_.size());

    // Tarjan's SCC; a vertex lies on a cycle iff its component has more than
    // one vertex or it carries a self-loop.
    std::array<int, Offset::kSlots> index{};
    std::array<int, Offset::kSlots> low{};
    std::array<bool, Offset::kSlots> on_stack{};
    std::array<bool, Offset::kSlots> on_cycle{};
    index.fill(-1);
    std::vector<int> stack;
    int counter = 0;
    std::function<void(int)> connect = [&](int u) {
        index[u] = low[u] = counter++;
        stack.push_back(u);
        on_stack[u] = true;
        for (const Edge& e : edges(u)) {
            if (index[e.target] < 0) {
                connect(e.target);
                low[u] = std::min(low[u], low[e.target]);
            } else if (on_stack[e.target]) {
                low[u] = std::min(low[u], index[e.target]);
            }
        }
        if (low[u] != index[u]) return;
        std::vector<int> component;
        int w = -1;
        do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            component.push_back(w);
        } while (w != u);
        bool cyclic = component.size() > 1;
        if (!cyclic)
            for (const Edge& e : edges(u)) cyclic = cyclic || e.target == u;
        if (cyclic)
            for (int c : component) on_cycle[c] = true;
    };
    for (int u = 0; u < Offset::kSlots; ++u)
        if (u != Offset::kZeroSlot && index[u] < 0) connect(u);

    // Reverse reachability from the cyclic vertices.
    live_ = on_cycle;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int u = 0; u < Offset::kSlots; ++u) {
            if (live_[u] || u == Offset::kZeroSlot) continue;
            for (const Edge& e : edges(u)) {
                if (live_[e.target]) {
                    live_[u] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
}

// Product search over (u, v, s): two label paths from alpha, s the scaled
// difference of their partial sums. The paths name the same point iff s never
// leaves {-1,0,1}^3; an escape with both continuations live yields two points.
FaceKind NeighborAutomaton::classify(const Offset& alpha) const {
    if (alpha.is_zero()) throw Error(Errc::InvalidArgument, "zero offset");
    if (!live(alpha)) return FaceKind::Empty;
    const int n = set_.order();
    const auto digits = set_.digits();
    constexpr int kStates = Offset::kSlots * Offset::kSlots * Offset::kSlots;
    std::bitset<kStates> seen;
    struct State {
        int u, v, s;
    };
    std::vector<State> work;
    const int start = alpha.slot() * 729 + alpha.slot() * 27 + Offset::kZeroSlot;
    seen.set(start);
    work.push_back({alpha.slot(), alpha.slot(), Offset::kZeroSlot});
    while (!work.empty()) {
        const State st = work.back();
        work.pop_back();
        const Offset diff = Offset::from_slot(st.s);
        for (const Edge& e1 : edges(st.u)) {
            if (!live_[e1.target]) continue;
            const Digit& d = digits[e1.first];
            for (const Edge& e2 : edges(st.v)) {
                if (!live_[e2.target]) continue;
                const Digit& e = digits[e2.first];
                std::array<int, 3> next{n * diff.a + d.x - e.x, n * diff.b + d.y - e.y, n * diff.c + d.z - e.z};
                if (!fits_offset(next)) return FaceKind::Multi;
                const int id = e1.target * 729 + e2.target * 27 + slot_of(next);
                if (seen.test(id)) continue;
                seen.set(id);
                work.push_back({e1.target, e2.target, slot_of(next)});
            }
        }
    }
    return FaceKind::Point;
}

TriadicPoint NeighborAutomaton::face_point(const Offset& alpha) const {
    if (classify(alpha) != FaceKind::Point)
        throw Error(Errc::NotSingleton, "face " + to_string(alpha) + " is not a single point");
    std::array<int, Offset::kSlots> visited{};
    visited.fill(-1);
    std::vector<Digit> labels;
    int u = alpha.slot();
    while (visited[u] < 0) {
        visited[u] = static_cast<int>(labels.size());
        const Edge* next = nullptr;
        for (const Edge& e : edges(u)) {
            if (live_[e.target]) {
                next = &e;
                break;
            }
        }
        if (next == nullptr) throw Error(Errc::InternalInconsistency, "live vertex without live successor");
        labels.push_back(set_[next->first]);
        u = next->target;
    }
    TriadicPoint p;
    p.base = set_.order();
    const auto split = labels.begin() + visited[u];
    p.preperiod.assign(labels.begin(), split);
    p.period.assign(split, labels.end());
    p.value = expansion_value(p.preperiod, p.period, p.base);
    return p;
}

FaceClass NeighborAutomaton::face_class(const Offset& alpha) const {
    FaceClass fc;
    fc.kind = classify(alpha);
    if (fc.kind == FaceKind::Point) fc.point = face_point(alpha);
    return fc;
}

std::string NeighborAutomaton::dump() const {
    auto digit = [](const Digit& d) {
        return "(" + std::to_string(d.x) + "," + std::to_string(d.y) + "," + std::to_string(d.z) + ")";
    };
    std::string out;
    for (int u = 0; u < Offset::kSlots; ++u) {
        for (const Edge& e : edges(u)) {
            out += to_string(Offset::from_slot(u)) + " -> " + to_string(Offset::from_slot(e.target)) + " : (" +
                   digit(set_[e.first]) + "," + digit(set_[e.second]) + ")\n";
        }
    }
    return out;
}

NeighborAutomaton build_automaton(const DigitSet& set) { return NeighborAutomaton(set); }

FaceClass classify_face(const DigitSet& set, const Offset& alpha) { return NeighborAutomaton(set).face_class(alpha); }

TriadicPoint face_point(const DigitSet& set, const Offset& alpha) { return NeighborAutomaton(set).face_point(alpha); }

} // namespace fracube
