#include "doctest.h"
#include "fixtures.hpp"

#include "fracube/pipeline.hpp"

#include "json.hpp"

#include <map>
#include <set>

using namespace fracube;
using fixtures::set;

namespace {

const ClassificationReport& full_report() {
    static const ClassificationReport report = match_labels(classify_all(3, 7, 2), table_heads(fixtures::reference()));
    return report;
}

Errc error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return Errc::InternalInconsistency;
}

} // namespace

TEST_CASE("combination ranking") {
    std::vector<int> c{0, 1, 2};
    std::uint64_t rank = 0;
    do {
        CHECK(rank_combination(c) == rank);
        CHECK(unrank_combination(rank, 3) == c);
        ++rank;
    } while (next_combination(c, 6));
    CHECK(rank == binomial(6, 3));

    const std::vector<int> last{20, 21, 22, 23, 24, 25, 26};
    CHECK(rank_combination(last) == binomial(27, 7) - 1);
    CHECK(unrank_combination(binomial(27, 7) - 1, 7) == last);
}

TEST_CASE("enumeration counts and order") {
    CHECK(enumerate_all(2, 8, [](const DigitSet&) {}) == 1);
    CHECK(enumerate_all(3, 1, [](const DigitSet&) {}) == 27);

    CellCode previous = 0;
    bool increasing = true;
    std::uint64_t count = enumerate_all(3, 3, [&](const DigitSet& d) {
        increasing = increasing && d.code() > previous;
        previous = d.code();
    });
    CHECK(count == binomial(27, 3));
    CHECK(increasing);

    std::uint64_t pieces = 0;
    for (std::uint64_t begin = 0; begin < binomial(27, 3); begin += 500)
        enumerate_range(3, 3, begin, begin + 500, [&](const DigitSet&) { ++pieces; });
    CHECK(pieces == binomial(27, 3));

    CHECK(error_of([] { enumerate_all(3, 0, [](const DigitSet&) {}); }) == Errc::InvalidArgument);
    CHECK(error_of([] { enumerate_all(6, 2, [](const DigitSet&) {}); }) == Errc::InvalidArgument);
}

TEST_CASE("single pieces form four classes") {
    const ClassificationReport r = classify_all(3, 1);
    CHECK(r.candidates == 27);
    CHECK(r.survivors == 27);
    REQUIRE(r.classes.size() == 4);
    std::multiset<int> orbits;
    for (const ClassRecord& c : r.classes) orbits.insert(c.orbit_size);
    CHECK(orbits == std::multiset<int>{1, 6, 8, 12});
}

TEST_CASE("small classification is consistent and worker independent") {
    const ClassificationReport one = classify_all(3, 4, 1);
    const ClassificationReport four = classify_all(3, 4, 4);
    CHECK(to_json(one) == to_json(four));
    CHECK(to_csv(one) == to_csv(four));
    CHECK(to_markdown(one) == to_markdown(four));

    std::uint64_t covered = 0;
    int previous_multiplicity_total = 0;
    for (std::size_t i = 0; i < one.classes.size(); ++i) {
        const ClassRecord& c = one.classes[i];
        covered += static_cast<std::uint64_t>(c.orbit_size);
        CHECK(canonical_form(c.canonical).canonical == c.canonical);
        if (i > 0) CHECK(one.classes[i - 1].canonical.code() < c.canonical.code());
        CHECK(passes_filters(NeighborAutomaton(c.canonical)));
    }
    for (const GraphType& t : one.graph_types) previous_multiplicity_total += t.multiplicity;
    CHECK(covered == one.survivors);
    CHECK(previous_multiplicity_total == static_cast<int>(one.classes.size()));

    std::uint64_t survivors = 0;
    enumerate_all(3, 4, [&](const DigitSet& d) { survivors += passes_filters(NeighborAutomaton(d)) ? 1 : 0; });
    CHECK(survivors == one.survivors);
}

TEST_CASE("reference table parsing") {
    const auto& entries = fixtures::reference();
    CHECK(entries.size() == 105);
    std::map<std::string, int> per_label;
    for (const ReferenceEntry& e : entries) {
        ++per_label[e.label];
        CHECK(e.set.size() == 7);
    }
    CHECK(per_label.size() == 12);
    CHECK(per_label["7_11"] == 19);
    CHECK(per_label["7_6"] == 1);
    CHECK(entries.front().set == set(fixtures::kTree711));
    CHECK(entries.front().dendrite_table());
    CHECK_FALSE(entries.back().dendrite_table());
    CHECK(table_heads(entries).size() == 12);
    CHECK(table_heads(entries)[0].label == "7_11");

    const std::string good = "# comment\n\n7_11 1143872 020_101_110_111_112_121_202\n";
    CHECK(parse_reference_table(good).size() == 1);
    try {
        parse_reference_table("# header\n7_11 1143873 020_101_110_111_112_121_202\n");
        FAIL("corrupted id accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ParseError);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK(error_of([] { parse_reference_table("7_11 1143872\n"); }) == Errc::ParseError);
    CHECK(error_of([] { parse_reference_table("7_11 1 000_000\n"); }) == Errc::DuplicateDigit);
}

TEST_CASE("full classification totals") {
    const ClassificationReport& r = full_report();
    CHECK(r.candidates == 888030);
    CHECK(r.survivors == 3200);
    std::uint64_t covered = 0;
    for (const ClassRecord& c : r.classes) covered += static_cast<std::uint64_t>(c.orbit_size);
    CHECK(covered == 3200);
    CHECK(r.graph_types.size() == 12);
    int trees = 0;
    for (const GraphType& t : r.graph_types) trees += t.dendrite ? 1 : 0;
    CHECK(trees == 5);
}

TEST_CASE("label matching") {
    const ClassificationReport& r = full_report();
    const GraphType* tree = r.find_type(graph_code(intersection_graph(set(fixtures::kTree711))));
    REQUIRE(tree != nullptr);
    CHECK(tree->label == std::optional<std::string>("7_11"));
    CHECK(tree->multiplicity == 19);
    CHECK(tree->dendrite);
    for (std::size_t i = 0; i < 12; ++i) CHECK(r.graph_types[i].label.has_value());
    CHECK(r.graph_types[0].label == std::optional<std::string>("7_11"));
    CHECK(r.graph_types[11].label == std::optional<std::string>("nonden7"));
    for (const ClassRecord& c : r.classes) {
        REQUIRE(c.label.has_value());
        CHECK(r.find_type(c.graph)->label == c.label);
    }
}

TEST_CASE("label matching errors") {
    const ClassificationReport& r = full_report();
    const auto entry = [](const char* label, const char* digits) { return ReferenceEntry{label, "0", set(digits)}; };

    const std::vector<ReferenceEntry> two_labels{entry("a", fixtures::kTree711), entry("b", fixtures::kTree711)};
    CHECK(error_of([&] { match_labels(r, two_labels); }) == Errc::LabelConflict);

    const std::vector<ReferenceEntry> two_codes{entry("a", fixtures::kTree711), entry("a", fixtures::kNonden1)};
    CHECK(error_of([&] { match_labels(r, two_codes); }) == Errc::LabelConflict);

    const ClassificationReport small = classify_all(3, 3);
    const std::vector<ReferenceEntry> foreign{entry("a", fixtures::kTree711)};
    CHECK(error_of([&] { match_labels(small, foreign); }) == Errc::UnknownCode);

    const std::vector<ReferenceEntry> unusable{entry("a", "000_100_200_010_110_210_020")};
    CHECK(error_of([&] { match_labels(r, unusable); }) == Errc::OnePointViolation);
}

TEST_CASE("verification against table heads") {
    const ClassificationReport& r = full_report();
    const auto heads = table_heads(fixtures::reference());
    const VerificationSummary ok = verify_against_tables(r, heads);
    CHECK(ok.ok());
    CHECK(ok.matched == 12);
    CHECK(ok.distinct_classes == 12);

    std::vector<ReferenceEntry> broken = heads;
    broken[0].set = set(fixtures::kCorners);
    broken[1].label = "7_11";
    const VerificationSummary bad = verify_against_tables(r, broken);
    CHECK_FALSE(bad.ok());
    REQUIRE(bad.mismatches.size() == 2);
    CHECK(bad.mismatches[0].find("not connected") != std::string::npos);
    CHECK(bad.mismatches[1].find("differs from table graph") != std::string::npos);
}

TEST_CASE("report formats") {
    const ClassificationReport& r = full_report();
    const auto json = nlohmann::json::parse(to_json(r));
    CHECK(json["meta"]["candidates"] == 888030);
    CHECK(json["meta"]["survivors"] == 3200);
    CHECK(json["meta"]["classes"] == r.classes.size());
    CHECK(json["classes"].size() == r.classes.size());
    for (const char* key : {"canonical", "orbit_size", "graph_code", "dendrite", "edges", "label"})
        CHECK(json["classes"][0].contains(key));
    for (const char* key : {"graph_code", "label", "dendrite", "multiplicity"})
        CHECK(json["graph_types"][0].contains(key));

    const std::string csv = to_csv(r);
    CHECK(csv.rfind("canonical,orbit_size,graph_code,dendrite,edges,label\n", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == r.classes.size() + 1);

    const std::string md = to_markdown(r);
    CHECK(md.find("## Dendrites") < md.find("## Non dendrites"));
    CHECK(md.find("| 7_11 | 7_10 | 7_9 | 7_5 | 7_6 |") != std::string::npos);
    CHECK(md.back() == '\n');
}
