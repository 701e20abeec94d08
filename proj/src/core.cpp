#include "fracube/core.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <limits>

namespace fracube {

std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicateDigit: return "DuplicateDigit";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotSingleton: return "NotSingleton";
    case Errc::OnePointViolation: return "OnePointViolation";
    case Errc::Disconnected: return "Disconnected";
    case Errc::TooLarge: return "TooLarge";
    case Errc::LabelConflict: return "LabelConflict";
    case Errc::UnknownCode: return "UnknownCode";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::DepthTooSmall: return "DepthTooSmall";
    case Errc::InternalInconsistency: return "InternalInconsistency";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

int popcount(CellCode code) {
    return std::popcount(static_cast<std::uint64_t>(code)) +
           std::popcount(static_cast<std::uint64_t>(code >> 64));
}

int checked_order(int n) {
    if (n < kMinOrder || n > kMaxOrder)
        throw Error(Errc::InvalidArgument, "order " + std::to_string(n) + " outside [2,5]");
    return n;
}

DigitSet::DigitSet(int order, std::vector<Digit> digits) : order_(checked_order(order)) {
    for (const Digit& d : digits) {
        for (int axis = 0; axis < 3; ++axis) {
            if (d[axis] < 0 || d[axis] >= order_)
                throw Error(Errc::OutOfRange, "coordinate " + std::to_string(d[axis]) +
                                                  " outside [0," + std::to_string(order_ - 1) + "]");
        }
        CellCode bit = cell_bit(cell_index(d, order_));
        if (code_ & bit)
            throw Error(Errc::DuplicateDigit, "(" + std::to_string(d.x) + "," + std::to_string(d.y) +
                                                  "," + std::to_string(d.z) + ") listed twice");
        code_ |= bit;
    }
    std::sort(digits.begin(), digits.end(), [n = order_](const Digit& a, const Digit& b) {
        return cell_index(a, n) < cell_index(b, n);
    });
    digits_ = std::move(digits);
}

DigitSet DigitSet::from_code(CellCode code, int order) {
    checked_order(order);
    const int cells = order * order * order;
    if (cells < 128 && (code >> cells) != 0)
        throw Error(Errc::OutOfRange, "occupancy code has bits beyond n^3");
    std::vector<Digit> digits;
    for (int i = 0; i < cells; ++i)
        if (code & cell_bit(i)) digits.push_back(digit_at(i, order));
    return DigitSet(order, std::move(digits));
}

bool DigitSet::contains(const Digit& d) const {
    for (int axis = 0; axis < 3; ++axis)
        if (d[axis] < 0 || d[axis] >= order_) return false;
    return (code_ & cell_bit(cell_index(d, order_))) != 0;
}

namespace {

// Removes whitespace and LaTeX spacing/escape noise ("\ ", "\{", "\}").
std::string squeeze(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\\') {
            if (i + 1 < text.size() && (text[i + 1] == '{' || text[i + 1] == '}')) {
                out.push_back(text[++i]);
                continue;
            }
            if (i + 1 < text.size() && (text[i + 1] == ' ' || text[i + 1] == ',')) {
                ++i;
                continue;
            }
            throw Error(Errc::ParseError, "unexpected backslash");
        }
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        out.push_back(c);
    }
    return out;
}

int parse_coordinate(char c) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
        throw Error(Errc::ParseError, std::string("expected a digit, got '") + c + "'");
    return c - '0';
}

std::vector<Digit> parse_braced(const std::string& s) {
    if (s.size() < 2 || s.back() != '}') throw Error(Errc::ParseError, "unterminated brace list");
    std::vector<Digit> digits;
    std::size_t i = 1;
    const std::size_t end = s.size() - 1;
    while (i < end) {
        if (s[i] != '(') throw Error(Errc::ParseError, "expected '(' at offset " + std::to_string(i));
        std::size_t close = s.find(')', i);
        if (close == std::string::npos || close > end) throw Error(Errc::ParseError, "unterminated tuple");
        std::string body = s.substr(i + 1, close - i - 1);
        std::array<int, 3> c{};
        int count = 0;
        std::size_t pos = 0;
        while (pos <= body.size()) {
            std::size_t comma = body.find(',', pos);
            std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (item.empty() || count == 3) throw Error(Errc::ParseError, "malformed tuple (" + body + ")");
            int value = 0;
            for (char ch : item) value = value * 10 + parse_coordinate(ch);
            c[count++] = value;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (count != 3) throw Error(Errc::ParseError, "tuple (" + body + ") needs three coordinates");
        digits.push_back({c[0], c[1], c[2]});
        i = close + 1;
        if (i < end) {
            if (s[i] != ',') throw Error(Errc::ParseError, "expected ',' between tuples");
            ++i;
            if (i == end) throw Error(Errc::ParseError, "trailing ','");
        }
    }
    return digits;
}

std::vector<Digit> parse_compact(const std::string& s) {
    std::vector<Digit> digits;
    std::size_t pos = 0;
    while (true) {
        std::size_t sep = s.find('_', pos);
        std::string token = s.substr(pos, sep == std::string::npos ? std::string::npos : sep - pos);
        if (token.size() != 3) throw Error(Errc::ParseError, "token '" + token + "' is not an xyz triple");
        digits.push_back({parse_coordinate(token[0]), parse_coordinate(token[1]), parse_coordinate(token[2])});
        if (sep == std::string::npos) break;
        pos = sep + 1;
    }
    return digits;
}

} // namespace

DigitSet parse_digitset(std::string_view text, int order) {
    checked_order(order);
    std::string s = squeeze(text);
    if (s.empty()) throw Error(Errc::ParseError, "empty digit set");
    std::vector<Digit> digits = s.front() == '{' ? parse_braced(s) : parse_compact(s);
    if (digits.empty()) throw Error(Errc::ParseError, "empty digit set");
    return DigitSet(order, std::move(digits));
}

std::string render_compact(const DigitSet& set) {
    std::string out;
    for (const Digit& d : set.digits()) {
        if (!out.empty()) out.push_back('_');
        out.push_back(static_cast<char>('0' + d.x));
        out.push_back(static_cast<char>('0' + d.y));
        out.push_back(static_cast<char>('0' + d.z));
    }
    return out;
}

std::string render_braced(const DigitSet& set) {
    std::string out = "{";
    bool first = true;
    for (const Digit& d : set.digits()) {
        if (!first) out += ", ";
        first = false;
        out += "(" + std::to_string(d.x) + "," + std::to_string(d.y) + "," + std::to_string(d.z) + ")";
    }
    return out + "}";
}

Digit Isometry::apply(const Digit& d, int n) const {
    Digit out;
    for (int i = 0; i < 3; ++i) {
        int c = d[perm[i]];
        out[i] = flipped(i) ? (n - 1) - c : c;
    }
    return out;
}

std::array<int, 3> Isometry::apply_linear(const std::array<int, 3>& v) const {
    std::array<int, 3> out{};
    for (int i = 0; i < 3; ++i) out[i] = flipped(i) ? -v[perm[i]] : v[perm[i]];
    return out;
}

Isometry identity_isometry() { return {}; }

Isometry compose(const Isometry& a, const Isometry& b) {
    Isometry out;
    out.flips = 0;
    for (int i = 0; i < 3; ++i) {
        int k = a.perm[i];
        out.perm[i] = b.perm[k];
        if (a.flipped(i) != b.flipped(k)) out.flips |= static_cast<std::uint8_t>(1U << i);
    }
    return out;
}

Isometry inverse(const Isometry& g) {
    Isometry out;
    out.flips = 0;
    for (int i = 0; i < 3; ++i) {
        out.perm[g.perm[i]] = static_cast<std::uint8_t>(i);
        if (g.flipped(i)) out.flips |= static_cast<std::uint8_t>(1U << g.perm[i]);
    }
    return out;
}

const std::array<Isometry, 48>& all_isometries() {
    static const std::array<Isometry, 48> table = [] {
        std::array<Isometry, 48> t{};
        std::array<std::uint8_t, 3> perm{0, 1, 2};
        std::size_t k = 0;
        do {
            for (std::uint8_t flips = 0; flips < 8; ++flips) t[k++] = Isometry{perm, flips};
        } while (std::next_permutation(perm.begin(), perm.end()));
        return t;
    }();
    return table;
}

std::string describe(const Isometry& g) {
    static constexpr char kAxis[] = {'x', 'y', 'z'};
    std::string out = "(";
    for (int i = 0; i < 3; ++i) {
        if (i) out.push_back(',');
        if (g.flipped(i)) out.push_back('-');
        out.push_back(kAxis[g.perm[i]]);
    }
    return out + ")";
}

DigitSet apply_isometry(const Isometry& g, const DigitSet& set) {
    std::vector<Digit> mapped;
    mapped.reserve(set.size());
    for (const Digit& d : set.digits()) mapped.push_back(g.apply(d, set.order()));
    return DigitSet(set.order(), std::move(mapped));
}

CellCode apply_isometry(const Isometry& g, CellCode code, int order) {
    CellCode out = 0;
    const int cells = order * order * order;
    for (int i = 0; i < cells; ++i)
        if (code & cell_bit(i)) out |= cell_bit(cell_index(g.apply(digit_at(i, order), order), order));
    return out;
}

CanonicalForm canonical_form(const DigitSet& set) {
    const auto& group = all_isometries();
    CellCode best = 0;
    std::size_t best_index = 0;
    int stabilizer = 0;
    for (std::size_t k = 0; k < group.size(); ++k) {
        CellCode image = apply_isometry(group[k], set.code(), set.order());
        if (image == set.code()) ++stabilizer;
        if (k == 0 || image < best) {
            best = image;
            best_index = k;
        }
    }
    CanonicalForm form;
    form.canonical = DigitSet::from_code(best, set.order());
    form.stabilizer_size = stabilizer;
    form.orbit_size = static_cast<int>(group.size()) / stabilizer;
    form.witness = group[best_index];
    return form;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (result > std::numeric_limits<std::uint64_t>::max())
            throw Error(Errc::TooLarge, "binomial overflow");
    }
    return static_cast<std::uint64_t>(result);
}

std::string to_decimal(CellCode code) {
    if (code == 0) return "0";
    std::string out;
    while (code) {
        out.push_back(static_cast<char>('0' + static_cast<int>(code % 10)));
        code /= 10;
    }
    return {out.rbegin(), out.rend()};
}

} // namespace fracube
