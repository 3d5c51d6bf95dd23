#pragma once

#include "tiro/rational.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace tiro {

using Symbol = std::string;

/// Reserved padding letter for unequal-length comparisons.
inline const Symbol kPadding = "#";

/// A finite named set of letters. Letters are opaque strings.
class Alphabet {
public:
    Alphabet() = default;
    Alphabet(std::string name, std::vector<Symbol> symbols) : name_(std::move(name)) {
        for (auto& s : symbols) add(s);
    }
    explicit Alphabet(std::vector<Symbol> symbols) : Alphabet("", std::move(symbols)) {}

    void add(const Symbol& s) {
        if (s.empty()) throw PreconditionError("empty letter");
        if (s == kPadding) throw PreconditionError("the padding letter '#' is reserved");
        if (s == "ε") throw PreconditionError("the letter 'ε' is reserved");
        if (!contains(s)) symbols_.push_back(s);
    }

    bool contains(const Symbol& s) const {
        return std::find(symbols_.begin(), symbols_.end(), s) != symbols_.end();
    }

    const std::string& name() const { return name_; }
    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }

    friend bool operator==(const Alphabet& a, const Alphabet& b) {
        return std::set<Symbol>(a.symbols_.begin(), a.symbols_.end()) ==
               std::set<Symbol>(b.symbols_.begin(), b.symbols_.end());
    }

private:
    std::string name_;
    std::vector<Symbol> symbols_;
};

/// All bit strings of the given width, in lexicographic order.
inline Alphabet bit_vector_alphabet(int width) {
    std::vector<Symbol> out;
    for (int v = 0; v < (1 << width); ++v) {
        Symbol s;
        for (int i = 0; i < width; ++i) s.push_back(((v >> (width - 1 - i)) & 1) ? '1' : '0');
        out.push_back(s);
    }
    return Alphabet("bits" + std::to_string(width), out);
}

// ── Timed words ─────────────────────────────────────────────────────

struct Event {
    Symbol letter;
    Rational time;

    friend bool operator==(const Event&, const Event&) = default;
};

/// A finite sequence of events with nondecreasing, nonnegative timestamps.
class TimedWord {
public:
    TimedWord() = default;
    explicit TimedWord(std::vector<Event> events) : events_(std::move(events)) { validate(); }

    static TimedWord from_pairs(std::initializer_list<std::pair<const char*, Rational>> items) {
        std::vector<Event> ev;
        for (auto& [l, t] : items) ev.push_back({l, t});
        return TimedWord(std::move(ev));
    }

    const std::vector<Event>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }
    const Event& operator[](std::size_t i) const { return events_[i]; }

    const Rational& start() const { return front().time; }
    const Rational& end() const { return back().time; }
    const Event& front() const {
        if (events_.empty()) throw PreconditionError("empty timed word has no domain");
        return events_.front();
    }
    const Event& back() const {
        if (events_.empty()) throw PreconditionError("empty timed word has no domain");
        return events_.back();
    }

    std::vector<Symbol> untimed() const {
        std::vector<Symbol> out;
        for (auto& e : events_) out.push_back(e.letter);
        return out;
    }

    void push_back(Event e) {
        events_.push_back(std::move(e));
        validate_tail();
    }

    friend bool operator==(const TimedWord&, const TimedWord&) = default;

private:
    void validate() {
        for (std::size_t i = 0; i < events_.size(); ++i) {
            if (events_[i].letter.empty()) throw PreconditionError("event with empty letter");
            if (events_[i].time < 0) throw PreconditionError("negative timestamp");
            if (i > 0 && events_[i].time < events_[i - 1].time)
                throw PreconditionError("timestamps not monotone at event " + std::to_string(i));
        }
    }
    void validate_tail() {
        auto n = events_.size();
        if (events_.back().time < 0) throw PreconditionError("negative timestamp");
        if (n > 1 && events_[n - 1].time < events_[n - 2].time)
            throw PreconditionError("timestamps not monotone");
    }

    std::vector<Event> events_;
};

struct TaggedEvent {
    Symbol letter;
    int tag = 0;
    Rational time;

    friend bool operator==(const TaggedEvent&, const TaggedEvent&) = default;
};

/// Events whose letters carry a component tag; produced by a disjoint union.
class TaggedTimedWord {
public:
    TaggedTimedWord() = default;
    explicit TaggedTimedWord(std::vector<TaggedEvent> events) : events_(std::move(events)) {
        for (std::size_t i = 1; i < events_.size(); ++i)
            if (events_[i].time < events_[i - 1].time) throw PreconditionError("timestamps not monotone");
    }

    const std::vector<TaggedEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }

    /// Events of one component, in order.
    TimedWord project(int tag) const {
        std::vector<Event> out;
        for (auto& e : events_)
            if (e.tag == tag) out.push_back({e.letter, e.time});
        return TimedWord(std::move(out));
    }

    friend bool operator==(const TaggedTimedWord&, const TaggedTimedWord&) = default;

private:
    std::vector<TaggedEvent> events_;
};

/// Merges words by timestamp, tagging the i-th word with i+1.
/// Events sharing a timestamp are ordered by ascending tag, then by original order.
inline TaggedTimedWord disjoint_union(const std::vector<TimedWord>& words) {
    std::vector<TaggedEvent> all;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (auto& e : words[i].events()) all.push_back({e.letter, static_cast<int>(i) + 1, e.time});
    std::stable_sort(all.begin(), all.end(), [](const TaggedEvent& a, const TaggedEvent& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.tag < b.tag;
    });
    return TaggedTimedWord(std::move(all));
}

inline TaggedTimedWord disjoint_union(const TimedWord& u, const TimedWord& v) { return disjoint_union({u, v}); }

/// Extends the word's domain to `end` by repeating its final letter.
inline TimedWord pad_to(const TimedWord& w, const Rational& end) {
    if (w.empty()) throw PreconditionError("cannot pad an empty timed word");
    if (end < w.end()) throw PreconditionError("padding horizon precedes the last event");
    if (end == w.end()) return w;
    auto ev = w.events();
    ev.push_back({w.back().letter, end});
    return TimedWord(std::move(ev));
}

// ── Càdlàg functions ────────────────────────────────────────────────

/// A right-continuous piecewise-constant function on a closed interval.
/// Piece i holds on [start_i, start_{i+1}); the last piece holds up to and including the domain end.
class CadlagFunction {
public:
    struct Piece {
        Rational start;
        Symbol letter;
        friend bool operator==(const Piece&, const Piece&) = default;
    };

    CadlagFunction() = default;
    CadlagFunction(std::vector<Piece> pieces, Rational end) : pieces_(std::move(pieces)), end_(std::move(end)) {
        if (pieces_.empty()) throw PreconditionError("Cadlag function needs at least one piece");
        for (std::size_t i = 1; i < pieces_.size(); ++i) {
            if (pieces_[i].start <= pieces_[i - 1].start) throw PreconditionError("piece starts not increasing");
            if (pieces_[i].letter == pieces_[i - 1].letter) throw PreconditionError("adjacent pieces share a letter");
        }
        if (pieces_.back().start > end_) throw PreconditionError("piece beyond domain end");
    }

    static CadlagFunction from_word(const TimedWord& w) {
        if (w.empty()) throw PreconditionError("empty timed word has no Cadlag function");
        std::vector<Piece> pieces;
        const auto& ev = w.events();
        for (std::size_t i = 0; i < ev.size(); ++i) {
            // the last event at a shared timestamp determines the value there
            if (i + 1 < ev.size() && ev[i + 1].time == ev[i].time) continue;
            if (!pieces.empty() && pieces.back().letter == ev[i].letter) continue;
            pieces.push_back({ev[i].time, ev[i].letter});
        }
        return CadlagFunction(std::move(pieces), w.end());
    }

    const Rational& start() const { return pieces_.front().start; }
    const Rational& end() const { return end_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    const Symbol& value_at(const Rational& t) const {
        if (t < start() || t > end_) throw PreconditionError("time " + to_string(t) + " outside domain");
        std::size_t i = 0;
        while (i + 1 < pieces_.size() && pieces_[i + 1].start <= t) ++i;
        return pieces_[i].letter;
    }

    std::vector<Rational> breakpoints() const {
        std::vector<Rational> out;
        for (auto& p : pieces_) out.push_back(p.start);
        return out;
    }

    /// The canonical stutter-free word, carrying a trailing event when needed to fix the domain end.
    TimedWord to_word() const {
        std::vector<Event> ev;
        for (auto& p : pieces_) ev.push_back({p.letter, p.start});
        if (pieces_.back().start < end_) ev.push_back({pieces_.back().letter, end_});
        return TimedWord(std::move(ev));
    }

    friend bool operator==(const CadlagFunction&, const CadlagFunction&) = default;

private:
    std::vector<Piece> pieces_;
    Rational end_;
};

/// The events of the word's Càdlàg function at its breakpoints.
inline TimedWord stutter_free(const TimedWord& w) {
    std::vector<Event> ev;
    const CadlagFunction f = CadlagFunction::from_word(w);
    for (auto& p : f.pieces()) ev.push_back({p.letter, p.start});
    return TimedWord(std::move(ev));
}

// ── Step functions ──────────────────────────────────────────────────

using Word = std::vector<Symbol>;

/// The Càdlàg function on [0, |w|] holding w_i on [i, i+1).
inline CadlagFunction step_function(const Word& w) {
    if (w.empty()) throw PreconditionError("empty word has no step function");
    std::vector<Event> ev;
    for (std::size_t i = 0; i < w.size(); ++i) ev.push_back({w[i], Rational(static_cast<long>(i))});
    ev.push_back({w.back(), Rational(static_cast<long>(w.size()))});
    return CadlagFunction::from_word(TimedWord(std::move(ev)));
}

inline TimedWord step_word(const Word& w) { return step_function(w).to_word(); }

/// Reads f(0) f(1) ... f(T-1) from a step function on [0, T].
inline Word discrete_word(const CadlagFunction& f) {
    if (f.start() != 0) throw PreconditionError("step function must start at 0");
    if (!is_integral(f.end())) throw PreconditionError("step function domain end must be integral");
    for (auto& b : f.breakpoints())
        if (!is_integral(b)) throw PreconditionError("step function breakpoint " + to_string(b) + " not integral");
    Word out;
    long n = to_int64(floor_of(f.end()));
    for (long i = 0; i < n; ++i) out.push_back(f.value_at(Rational(i)));
    return out;
}

// ── Text format ─────────────────────────────────────────────────────

struct TimedWordDocument {
    std::optional<Alphabet> alphabet;
    TimedWord word;
};

namespace detail {
inline std::string trim(std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}
}  // namespace detail

/// Reads lines "<letter> @ <time>", with an optional "alphabet <name> = {a, b}" header.
inline TimedWordDocument parse_timed_word(std::istream& in, const std::string& source = "<input>") {
    TimedWordDocument doc;
    std::vector<Event> ev;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseError(source + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto c = line.find("//"); c != std::string::npos) line = line.substr(0, c);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.rfind("alphabet", 0) == 0) {
            auto eq = line.find('=');
            auto lb = line.find('{'), rb = line.find('}');
            if (eq == std::string::npos || lb == std::string::npos || rb == std::string::npos || rb < lb)
                fail("malformed alphabet header");
            std::string name = detail::trim(line.substr(8, eq - 8));
            std::vector<Symbol> syms;
            for (auto& s : detail::split(line.substr(lb + 1, rb - lb - 1), ','))
                if (!s.empty()) syms.push_back(s);
            try {
                doc.alphabet = Alphabet(name, syms);
            } catch (const PreconditionError& e) {
                fail(e.what());
            }
            continue;
        }
        auto at = line.find('@');
        if (at == std::string::npos) fail("expected '<letter> @ <time>'");
        std::string letter = detail::trim(line.substr(0, at));
        std::string time = detail::trim(line.substr(at + 1));
        if (letter.empty()) fail("missing letter");
        Rational t;
        try {
            t = parse_rational(time);
        } catch (const ParseError& e) {
            fail(e.what());
        }
        if (t < 0) fail("negative timestamp");
        if (!ev.empty() && t < ev.back().time) fail("timestamps not monotone");
        if (doc.alphabet && !doc.alphabet->contains(letter)) fail("letter '" + letter + "' not in alphabet");
        ev.push_back({letter, t});
    }
    doc.word = TimedWord(std::move(ev));
    return doc;
}

inline TimedWordDocument parse_timed_word(const std::string& text, const std::string& source = "<input>") {
    std::istringstream in(text);
    return parse_timed_word(in, source);
}

inline std::string format_timed_word(const TimedWord& w) {
    std::string out;
    for (auto& e : w.events()) out += e.letter + " @ " + to_string(e.time) + "\n";
    return out;
}

}  // namespace tiro
