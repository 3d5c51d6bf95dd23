#pragma once

#include "tiro/rational.hpp"

#include <cctype>
#include <functional>
#include <string>
#include <vector>

namespace tiro {

enum class Comparison { less, less_equal, equal, greater_equal, greater };

inline const char* comparison_text(Comparison c) {
    switch (c) {
        case Comparison::less: return "<";
        case Comparison::less_equal: return "<=";
        case Comparison::equal: return "==";
        case Comparison::greater_equal: return ">=";
        case Comparison::greater: return ">";
    }
    return "?";
}

inline bool compare(const Rational& lhs, Comparison c, const Rational& rhs) {
    switch (c) {
        case Comparison::less: return lhs < rhs;
        case Comparison::less_equal: return lhs <= rhs;
        case Comparison::equal: return lhs == rhs;
        case Comparison::greater_equal: return lhs >= rhs;
        case Comparison::greater: return lhs > rhs;
    }
    return false;
}

/// x ⋈ c for a clock index x and a nonnegative rational c.
struct ClockAtom {
    int clock = 0;
    Comparison op = Comparison::equal;
    Rational constant;

    friend bool operator==(const ClockAtom&, const ClockAtom&) = default;
};

/// A conjunction of atoms; the empty conjunction is true.
struct ClockConstraint {
    std::vector<ClockAtom> atoms;

    static ClockConstraint truth() { return {}; }

    bool satisfied(const std::vector<Rational>& valuation) const {
        for (auto& a : atoms)
            if (!compare(valuation.at(a.clock), a.op, a.constant)) return false;
        return true;
    }

    bool has_equality() const {
        for (auto& a : atoms)
            if (a.op == Comparison::equal) return true;
        return false;
    }

    ClockConstraint conjoin(const ClockConstraint& other) const {
        ClockConstraint out = *this;
        out.atoms.insert(out.atoms.end(), other.atoms.begin(), other.atoms.end());
        return out;
    }

    ClockConstraint shifted(int offset) const {
        ClockConstraint out = *this;
        for (auto& a : out.atoms) a.clock += offset;
        return out;
    }

    friend bool operator==(const ClockConstraint&, const ClockConstraint&) = default;
};

/// Parses "x>=1 && y<2"; an empty string or "true" is the true constraint.
inline ClockConstraint parse_guard(const std::string& text, const std::function<int(const std::string&)>& clock_index) {
    ClockConstraint g;
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t') s.push_back(c);
    if (s.empty() || s == "true") return g;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t amp = s.find("&&", pos);
        std::string atom = s.substr(pos, amp == std::string::npos ? std::string::npos : amp - pos);
        pos = amp == std::string::npos ? s.size() : amp + 2;
        std::size_t k = 0;
        while (k < atom.size() && (std::isalnum(static_cast<unsigned char>(atom[k])) || atom[k] == '_')) ++k;
        if (k == 0) throw ParseError("malformed guard atom '" + atom + "'");
        std::string clock = atom.substr(0, k);
        std::string rest = atom.substr(k);
        Comparison op;
        std::size_t oplen = 2;
        if (rest.rfind("<=", 0) == 0) op = Comparison::less_equal;
        else if (rest.rfind(">=", 0) == 0) op = Comparison::greater_equal;
        else if (rest.rfind("==", 0) == 0) op = Comparison::equal;
        else if (rest.rfind("<", 0) == 0) op = Comparison::less, oplen = 1;
        else if (rest.rfind(">", 0) == 0) op = Comparison::greater, oplen = 1;
        else if (rest.rfind("=", 0) == 0) op = Comparison::equal, oplen = 1;
        else throw ParseError("malformed guard atom '" + atom + "'");
        Rational c = parse_rational(rest.substr(oplen));
        if (c < 0) throw ParseError("negative guard constant in '" + atom + "'");
        int index = clock_index(clock);
        if (index < 0) throw ParseError("unknown clock '" + clock + "'");
        g.atoms.push_back({index, op, c});
    }
    return g;
}

inline std::string format_guard(const ClockConstraint& g, const std::vector<std::string>& clock_names) {
    if (g.atoms.empty()) return "true";
    std::string out;
    for (std::size_t i = 0; i < g.atoms.size(); ++i) {
        if (i) out += " && ";
        out += clock_names.at(g.atoms[i].clock) + comparison_text(g.atoms[i].op) + to_string(g.atoms[i].constant);
    }
    return out;
}

}  // namespace tiro
