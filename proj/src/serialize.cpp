#include "convspec/serialize.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace convspec {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

long long parse_int(const std::string& s, const std::string& context) {
    std::string t = trim(s);
    if (t.empty()) throw ParseError("expected an integer in '" + context + "'");
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size())
        throw ParseError("bad integer '" + t + "' in '" + context + "'");
    return v;
}

std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

// Word tokens over single-letter generator names: "a", "b^-1", "a^2", and
// letter runs like "aba" (the optional exponent applies to the last letter).
GroupElement parse_word(const GroupSpec& spec, const std::string& text, int letter_count) {
    std::istringstream is(text);
    std::string tok;
    GroupElement acc = identity(spec);
    bool is_free = spec.kind() == GroupKind::FreeGroup;
    std::vector<GroupElement> gens = generators(spec);
    while (is >> tok) {
        std::string letters = tok;
        long long exp = 1;
        std::size_t caret = tok.find('^');
        if (caret != std::string::npos) {
            letters = tok.substr(0, caret);
            exp = parse_int(tok.substr(caret + 1), text);
        }
        if (letters.empty()) throw ParseError("bad token '" + tok + "' in '" + text + "'");
        for (std::size_t i = 0; i < letters.size(); ++i) {
            char c = letters[i];
            if (c < 'a' || c >= 'a' + letter_count)
                throw ParseError(std::string("unknown generator '") + c + "' in '" + text + "'");
            int idx = c - 'a';
            long long e = (i + 1 == letters.size()) ? exp : 1;
            if (is_free) {
                acc = multiply(acc, make_word_element(spec, {{idx, e}}));
            } else {
                acc = multiply(acc, power(gens[static_cast<std::size_t>(idx)], e));
            }
        }
    }
    return acc;
}

GroupElement parse_impl(const GroupSpec& spec, const std::string& raw) {
    std::string text = trim(raw);
    if (text.empty()) throw ParseError("empty element literal");
    if (text == "e") return identity(spec);
    switch (spec.kind()) {
        case GroupKind::IntLattice: {
            int d = spec.lattice_dim();
            std::string inner;
            if (text.front() == '(' && text.back() == ')') {
                inner = text.substr(1, text.size() - 2);
            } else if (d == 1) {
                inner = text;
            } else {
                throw ParseError("lattice element must look like (i1,...,id): '" + text + "'");
            }
            std::vector<std::string> parts = split_top_level(inner, ',');
            if (static_cast<int>(parts.size()) != d)
                throw ParseError("lattice element needs " + std::to_string(d) +
                                 " coordinates: '" + text + "'");
            std::vector<long long> coords;
            for (const auto& p : parts) coords.push_back(parse_int(p, text));
            return make_lattice_element(spec, std::move(coords));
        }
        case GroupKind::Cyclic:
            return make_cyclic_element(spec, parse_int(text, text));
        case GroupKind::Symmetric: {
            int n = spec.symmetric_degree();
            if (text.front() == '[') {
                if (text.back() != ']')
                    throw ParseError("unterminated permutation literal '" + text + "'");
                std::vector<std::string> parts =
                    split_top_level(text.substr(1, text.size() - 2), ',');
                if (static_cast<int>(parts.size()) != n)
                    throw ParseError("permutation needs " + std::to_string(n) + " entries: '" +
                                     text + "'");
                std::vector<int> perm;
                for (const auto& p : parts) {
                    long long v = parse_int(p, text);
                    if (v < 1 || v > n)
                        throw ParseError("permutation entry out of range in '" + text + "'");
                    perm.push_back(static_cast<int>(v - 1));
                }
                return make_perm_element(spec, std::move(perm));
            }
            int letters = n - 1;
            if (letters > 26) letters = 26;
            return parse_word(spec, text, letters);
        }
        case GroupKind::FreeGroup:
            return parse_word(spec, text, spec.free_rank());
        case GroupKind::DirectProduct:
        case GroupKind::Semidirect: {
            if (text.front() != '(' || text.back() != ')')
                throw ParseError("pair element must look like (<left>|<right>): '" + text + "'");
            std::vector<std::string> parts =
                split_top_level(text.substr(1, text.size() - 2), '|');
            if (parts.size() != 2)
                throw ParseError("pair element needs exactly one top-level '|': '" + text + "'");
            const GroupSpec& ls =
                spec.kind() == GroupKind::DirectProduct ? spec.left() : spec.fiber();
            const GroupSpec& rs =
                spec.kind() == GroupKind::DirectProduct ? spec.right() : spec.base();
            return make_pair_element(spec, parse_impl(ls, parts[0]), parse_impl(rs, parts[1]));
        }
    }
    throw ParseError("unsupported spec in parse_element");
}

}  // namespace

GroupElement parse_element(const GroupSpec& spec, const std::string& text) {
    return parse_impl(spec, text);
}

std::string format_element(const GroupElement& x) {
    std::ostringstream os;
    switch (x.spec.kind()) {
        case GroupKind::IntLattice: {
            os << "(";
            const auto& c = x.coords();
            for (std::size_t i = 0; i < c.size(); ++i) {
                if (i) os << ",";
                os << c[i];
            }
            os << ")";
            break;
        }
        case GroupKind::Cyclic:
            os << x.residue();
            break;
        case GroupKind::Symmetric: {
            os << "[";
            const auto& p = x.perm();
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (i) os << ",";
                os << p[i] + 1;
            }
            os << "]";
            break;
        }
        case GroupKind::FreeGroup: {
            const auto& w = x.word();
            if (w.empty()) {
                os << "e";
                break;
            }
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (i) os << " ";
                os << static_cast<char>('a' + w[i].first);
                if (w[i].second != 1) os << "^" << w[i].second;
            }
            break;
        }
        case GroupKind::DirectProduct:
        case GroupKind::Semidirect:
            os << "(" << format_element(x.pair_left()) << "|" << format_element(x.pair_right())
               << ")";
            break;
    }
    return os.str();
}

}  // namespace convspec
