#pragma once

#include "tiro/timed_word.hpp"

#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace tiro {

/// A similarity function over an alphabet extended with the padding letter.
/// Stored entries are symmetric; unlisted pairs are 1 off the diagonal and 0 on it.
class DiffFunction {
public:
    DiffFunction() = default;

    explicit DiffFunction(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

    static DiffFunction zero_one(const Alphabet& a) { return DiffFunction(a); }

    /// 0 on equal letters, infinite otherwise.
    static DiffFunction equality(const Alphabet& a) {
        DiffFunction d(a);
        auto all = d.letters();
        for (auto& x : all)
            for (auto& y : all)
                if (x != y) d.set(x, y, ExtendedValue::infinity());
        return d;
    }

    /// Number of differing positions between equal-width bit strings; padding counts as all bits differing.
    static DiffFunction hamming(const Alphabet& a) {
        DiffFunction d(a);
        auto all = a.symbols();
        std::size_t width = all.empty() ? 0 : all.front().size();
        for (auto& x : all) {
            if (x.size() != width) throw PreconditionError("hamming needs equal-width bit strings");
            d.set(x, kPadding, Rational(static_cast<long>(width)));
            for (auto& y : all) {
                long n = 0;
                for (std::size_t i = 0; i < width; ++i) n += x[i] != y[i];
                d.set(x, y, Rational(n));
            }
        }
        return d;
    }

    const Alphabet& alphabet() const { return alphabet_; }

    std::vector<Symbol> letters() const {
        auto out = alphabet_.symbols();
        out.push_back(kPadding);
        return out;
    }

    void set(const Symbol& a, const Symbol& b, ExtendedValue v) {
        check_letter(a);
        check_letter(b);
        if (v < ExtendedValue(0)) throw PreconditionError("diff entries must be nonnegative");
        if (a == b && v != ExtendedValue(0)) throw PreconditionError("diff must vanish on the diagonal");
        table_[key(a, b)] = v;
    }

    ExtendedValue operator()(const Symbol& a, const Symbol& b) const {
        if (a == b) return ExtendedValue(0);
        auto it = table_.find(key(a, b));
        if (it != table_.end()) return it->second;
        check_letter(a);
        check_letter(b);
        return ExtendedValue(1);
    }

    /// Largest finite entry, used to bound excursions.
    Rational max_finite() const {
        Rational m = 0;
        auto all = letters();
        for (auto& x : all)
            for (auto& y : all)
                if (auto v = (*this)(x, y); v.is_finite() && v.value() > m) m = v.value();
        return m;
    }

    bool all_finite() const {
        auto all = alphabet_.symbols();
        for (auto& x : all)
            for (auto& y : all)
                if (!(*this)(x, y).is_finite()) return false;
        return true;
    }

    /// Throws unless d(a,c) <= d(a,b) + d(b,c) whenever the right side is finite.
    void check_triangle() const {
        auto all = letters();
        for (auto& a : all)
            for (auto& b : all)
                for (auto& c : all) {
                    auto ab = (*this)(a, b), bc = (*this)(b, c);
                    if (!ab.is_finite() || !bc.is_finite()) continue;
                    if ((*this)(a, c) > ab + bc)
                        throw PreconditionError("triangle inequality fails for " + a + ", " + b + ", " + c);
                }
    }

private:
    static std::pair<Symbol, Symbol> key(const Symbol& a, const Symbol& b) {
        return a < b ? std::pair{a, b} : std::pair{b, a};
    }
    void check_letter(const Symbol& s) const {
        if (s != kPadding && !alphabet_.contains(s)) throw PreconditionError("letter '" + s + "' not in diff alphabet");
    }

    Alphabet alphabet_;
    std::map<std::pair<Symbol, Symbol>, ExtendedValue> table_;
};

/// Reads "diff <alphabet>" then "a b <value>" lines; the alphabet is resolved by name.
inline DiffFunction parse_diff(std::istream& in, const std::function<Alphabet(const std::string&)>& resolve,
                               const std::string& source = "<diff>") {
    std::string line;
    int lineno = 0;
    std::optional<DiffFunction> d;
    auto fail = [&](const std::string& msg) {
        throw ParseError(source + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto c = line.find("//"); c != std::string::npos) line = line.substr(0, c);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        if (!d) {
            std::string kw, name;
            ls >> kw >> name;
            if (kw != "diff" || name.empty()) fail("expected 'diff <alphabet>' header");
            try {
                d = DiffFunction(resolve(name));
            } catch (const std::exception& e) {
                fail(e.what());
            }
            continue;
        }
        std::string a, b, v, extra;
        ls >> a >> b >> v;
        if (v.empty() || (ls >> extra)) fail("expected '<letter> <letter> <value>'");
        try {
            d->set(a, b, parse_extended(v));
        } catch (const std::exception& e) {
            fail(e.what());
        }
    }
    if (!d) fail("missing 'diff' header");
    try {
        d->check_triangle();
    } catch (const PreconditionError& e) {
        fail(e.what());
    }
    return *d;
}

// ── Distances ───────────────────────────────────────────────────────

/// Sum of position-wise diffs, padding the shorter word with '#'.
inline ExtendedValue generalized_manhattan(const Word& s, const Word& t, const DiffFunction& d) {
    ExtendedValue total(0);
    std::size_t n = std::max(s.size(), t.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Symbol& a = i < s.size() ? s[i] : kPadding;
        const Symbol& b = i < t.size() ? t[i] : kPadding;
        total = total + d(a, b);
    }
    return total;
}

namespace detail {
inline void require_same_domain(const CadlagFunction& f, const CadlagFunction& g) {
    if (f.start() != g.start() || f.end() != g.end())
        throw PreconditionError("domains differ: [" + to_string(f.start()) + ", " + to_string(f.end()) + "] vs [" +
                                to_string(g.start()) + ", " + to_string(g.end()) + "]");
}
}  // namespace detail

/// Integral of diff(f_u(t), f_v(t)) over the shared domain.
inline ExtendedValue timed_manhattan(const CadlagFunction& f, const CadlagFunction& g, const DiffFunction& d) {
    detail::require_same_domain(f, g);
    std::vector<Rational> cuts = f.breakpoints();
    for (auto& b : g.breakpoints()) cuts.push_back(b);
    cuts.push_back(f.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    ExtendedValue total(0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total = total + Rational(cuts[i + 1] - cuts[i]) * d(f.value_at(cuts[i]), g.value_at(cuts[i]));
    return total;
}

inline ExtendedValue timed_manhattan(const TimedWord& u, const TimedWord& v, const DiffFunction& d) {
    return timed_manhattan(CadlagFunction::from_word(u), CadlagFunction::from_word(v), d);
}

/// Sum of breakpoint displacements when the stutter-free untimed words agree, infinite otherwise.
inline ExtendedValue accumulated_delay(const CadlagFunction& f, const CadlagFunction& g) {
    detail::require_same_domain(f, g);
    const auto& p = f.pieces();
    const auto& q = g.pieces();
    if (p.size() != q.size()) return ExtendedValue::infinity();
    Rational total = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].letter != q[i].letter) return ExtendedValue::infinity();
        total += abs_of(p[i].start - q[i].start);
    }
    return ExtendedValue(total);
}

inline ExtendedValue accumulated_delay(const TimedWord& u, const TimedWord& v) {
    return accumulated_delay(CadlagFunction::from_word(u), CadlagFunction::from_word(v));
}

/// Moves the breakpoints of f to the given times, keeping its letters and domain.
inline CadlagFunction retime(const CadlagFunction& f, const std::vector<Rational>& starts) {
    const auto& p = f.pieces();
    if (starts.size() != p.size()) throw PreconditionError("retiming needs one time per breakpoint");
    if (starts.front() != f.start()) throw PreconditionError("retiming must fix the domain start");
    std::vector<Event> ev;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (starts[i] > f.end()) throw PreconditionError("retimed breakpoint beyond domain");
        ev.push_back({p[i].letter, starts[i]});
    }
    ev.push_back({p.back().letter, f.end()});
    return CadlagFunction::from_word(TimedWord(std::move(ev)));
}

struct SkorokhodResult {
    ExtendedValue value;
    /// Optimal breakpoint times for the second argument.
    std::vector<Rational> retiming;
};

/// Minimizes, over monotone retimings of g's breakpoints, the total displacement plus the
/// timed Manhattan distance from f to the retimed g.
inline SkorokhodResult skorokhod_detailed(const CadlagFunction& f, const CadlagFunction& g, const DiffFunction& d) {
    detail::require_same_domain(f, g);
    const Rational t0 = f.start(), T = f.end();
    const auto& beta = g.pieces();
    const std::size_t n = beta.size();

    std::vector<Rational> cand = f.breakpoints();
    for (auto& b : g.breakpoints()) cand.push_back(b);
    cand.push_back(t0);
    cand.push_back(T);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    const std::size_t m = cand.size();

    auto segment = [&](const Symbol& letter, const Rational& from, const Rational& to) {
        ExtendedValue total(0);
        if (from >= to) return total;
        const auto& pieces = f.pieces();
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            Rational lo = std::max(from, pieces[i].start);
            Rational hi = i + 1 < pieces.size() ? std::min(to, pieces[i + 1].start) : to;
            if (lo < hi) total = total + Rational(hi - lo) * d(pieces[i].letter, letter);
        }
        return total;
    };

    const ExtendedValue INF = ExtendedValue::infinity();
    std::vector<std::vector<ExtendedValue>> best(n, std::vector<ExtendedValue>(m, INF));
    std::vector<std::vector<std::size_t>> parent(n, std::vector<std::size_t>(m, 0));
    std::size_t first = std::lower_bound(cand.begin(), cand.end(), t0) - cand.begin();
    best[0][first] = ExtendedValue(0);
    bool pinned_end = n > 1 && beta.back().start == T;

    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t c = 0; c < m; ++c) {
            if (pinned_end && j == n - 1 && cand[c] != T) continue;
            ExtendedValue here = INF;
            std::size_t arg = 0;
            for (std::size_t p = 0; p <= c; ++p) {
                if (best[j - 1][p].is_positive_infinity()) continue;
                auto v = best[j - 1][p] + segment(beta[j - 1].letter, cand[p], cand[c]);
                if (v < here) {
                    here = v;
                    arg = p;
                }
            }
            if (here.is_positive_infinity()) continue;
            best[j][c] = here + ExtendedValue(abs_of(cand[c] - beta[j].start));
            parent[j][c] = arg;
        }
    }

    SkorokhodResult out{INF, {}};
    std::size_t arg = 0;
    for (std::size_t c = 0; c < m; ++c) {
        if (best[n - 1][c].is_positive_infinity()) continue;
        auto v = best[n - 1][c] + segment(beta[n - 1].letter, cand[c], T);
        if (v < out.value) {
            out.value = v;
            arg = c;
        }
    }
    if (out.value.is_positive_infinity()) return out;
    out.retiming.assign(n, Rational(0));
    for (std::size_t j = n; j-- > 0;) {
        out.retiming[j] = cand[arg];
        arg = parent[j][arg];
    }
    return out;
}

inline ExtendedValue skorokhod(const CadlagFunction& f, const CadlagFunction& g, const DiffFunction& d) {
    return skorokhod_detailed(f, g, d).value;
}

inline ExtendedValue skorokhod(const TimedWord& u, const TimedWord& v, const DiffFunction& d) {
    return skorokhod(CadlagFunction::from_word(u), CadlagFunction::from_word(v), d);
}

}  // namespace tiro
