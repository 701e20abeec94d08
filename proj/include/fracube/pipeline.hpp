#pragma once

// Exhaustive classification: every N-subset of the n^3 cells, filtered by
// connectivity and the one-point property, grouped into orbits of the cube
// symmetries and then into intersection-graph types.

#include "fracube/core.hpp"
#include "fracube/topology.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracube {

/// Colex rank of a strictly increasing index list: Σ C(c_i, i+1).
std::uint64_t rank_combination(std::span<const int> cells);
/// Inverse of rank_combination for `size` elements.
std::vector<int> unrank_combination(std::uint64_t rank, int size);
/// Advances to the colex successor among subsets of {0..universe-1};
/// returns false after the last one.
bool next_combination(std::vector<int>& cells, int universe);

/// Calls `visit` on every N-subset of {0..n-1}^3 in increasing occupancy-code
/// order and returns the number visited.
std::uint64_t enumerate_all(int order, int pieces, const std::function<void(const DigitSet&)>& visit);
/// Same, restricted to colex ranks [begin, end).
void enumerate_range(int order, int pieces, std::uint64_t begin, std::uint64_t end,
                     const std::function<void(const DigitSet&)>& visit);

/// Connected and one-point; the two filters of the classification.
bool passes_filters(const NeighborAutomaton& automaton);

struct ClassRecord {
    DigitSet canonical;
    int orbit_size = 0;
    GraphCode graph;
    bool dendrite = false;
    int edges = 0;
    std::optional<std::string> label;
};

struct GraphType {
    GraphCode graph;
    std::optional<std::string> label;
    bool dendrite = false;
    int multiplicity = 0;
};

struct ClassificationReport {
    int order = kDefaultOrder;
    int pieces = 0;
    std::uint64_t candidates = 0;
    std::uint64_t survivors = 0;
    std::vector<ClassRecord> classes;    // ascending canonical code
    std::vector<GraphType> graph_types;  // labelled first (label order), then dendrites, then by code

    const ClassRecord* find_class(const DigitSet& canonical) const;
    const GraphType* find_type(const GraphCode& code) const;
};

/// Deterministic for any worker count. Throws InternalInconsistency if an
/// orbit is only partially present among the survivors.
ClassificationReport classify_all(int order = kDefaultOrder, int pieces = 7, int workers = 1);

struct ReferenceEntry {
    std::string label;
    std::string listing_id;
    DigitSet set;

    /// Tables whose label does not start with "nonden" list dendrites.
    bool dendrite_table() const;
};

/// Parses "label listing-id digit-string" lines ('#' comments allowed). The
/// listing id must equal the occupancy code under cell index n^2 x + n y + z;
/// any mismatch throws ParseError naming the line.
std::vector<ReferenceEntry> parse_reference_table(std::string_view text, int order = kDefaultOrder);
/// The 105 representatives shipped with the library.
std::string_view bundled_reference_text();
std::vector<ReferenceEntry> bundled_reference_table();
/// First entry of each label, in table order; the label source for reports.
std::vector<ReferenceEntry> table_heads(std::span<const ReferenceEntry> entries);

/// Attaches each entry's label to its graph type. Throws LabelConflict when a
/// code would get two labels or a label two codes, UnknownCode when a labelled
/// code is missing from the report, OnePointViolation for unusable entries.
ClassificationReport match_labels(ClassificationReport report, std::span<const ReferenceEntry> entries);

struct VerificationSummary {
    std::size_t entries = 0;
    std::size_t matched = 0;
    std::size_t distinct_classes = 0;
    std::vector<std::string> mismatches;

    bool ok() const { return mismatches.empty() && matched == entries; }
};

/// Checks every entry: survives both filters, its canonical form is in the
/// report, its graph code agrees with its table, its dendrite verdict agrees
/// with its table, and it has no triple points.
VerificationSummary verify_against_tables(const ClassificationReport& report, std::span<const ReferenceEntry> entries);

std::string to_json(const ClassificationReport& report);
std::string to_csv(const ClassificationReport& report);
/// Totals, then the graph types laid out as a dendrite block and a
/// non-dendrite block with N per type, then one row per class.
std::string to_markdown(const ClassificationReport& report);

} // namespace fracube
