#pragma once

#include "tiro/clock_constraint.hpp"
#include "tiro/timed_word.hpp"

#include <map>
#include <optional>
#include <set>
#include <unordered_map>

namespace tiro {

/// Upper bound on the states an exploration may create.
struct ExplorationLimits {
    std::size_t max_nodes = 3'000'000;
};

// ── Labels ──────────────────────────────────────────────────────────

/// A letter together with a component tag; tag 0 is the plain letter.
struct Label {
    Symbol symbol;
    int tag = 0;

    std::string str() const { return tag == 0 ? symbol : symbol + ":" + std::to_string(tag); }

    static Label parse(const std::string& text) {
        auto colon = text.rfind(':');
        if (colon == std::string::npos || colon + 1 == text.size()) return {text, 0};
        std::string tail = text.substr(colon + 1);
        for (char c : tail)
            if (c < '0' || c > '9') return {text, 0};
        return {text.substr(0, colon), std::stoi(tail)};
    }

    friend auto operator<=>(const Label&, const Label&) = default;
    friend bool operator==(const Label&, const Label&) = default;
};

struct LabeledEvent {
    Label label;
    Rational time;
    friend bool operator==(const LabeledEvent&, const LabeledEvent&) = default;
};

using LabeledWord = std::vector<LabeledEvent>;

inline LabeledWord labeled(const TimedWord& w) {
    LabeledWord out;
    for (auto& e : w.events()) out.push_back({{e.letter, 0}, e.time});
    return out;
}

inline LabeledWord labeled(const TaggedTimedWord& w) {
    LabeledWord out;
    for (auto& e : w.events()) out.push_back({{e.letter, e.tag}, e.time});
    return out;
}

/// Events carrying the given tag, with the tag removed.
inline TimedWord project_tag(const LabeledWord& w, int tag) {
    std::vector<Event> out;
    for (auto& e : w)
        if (e.label.tag == tag) out.push_back({e.label.symbol, e.time});
    return TimedWord(std::move(out));
}

inline std::string format_labeled_word(const LabeledWord& w) {
    std::string out;
    for (auto& e : w) out += e.label.str() + " @ " + to_string(e.time) + "\n";
    return out;
}

// ── Automata ────────────────────────────────────────────────────────

/// A discrete switch; an absent letter marks a silent switch.
struct Switch {
    int from = 0;
    std::optional<int> letter;
    ClockConstraint guard;
    std::vector<int> resets;
    int to = 0;
    Rational weight{0};
};

/// A timed automaton with rational location rates and switch weights.
/// Unweighted automata carry zero weights throughout.
class TimedAutomaton {
public:
    int add_letter(const Label& l) {
        if (auto it = letter_index_.find(l); it != letter_index_.end()) return it->second;
        alphabet_.push_back(l);
        letter_index_[l] = static_cast<int>(alphabet_.size()) - 1;
        return letter_index_[l];
    }

    int add_location(const std::string& name, Rational weight = 0, bool accepting = false) {
        if (location_index_.count(name)) throw PreconditionError("duplicate location '" + name + "'");
        locations_.push_back(name);
        location_weights_.push_back(std::move(weight));
        accepting_.push_back(accepting);
        location_index_[name] = static_cast<int>(locations_.size()) - 1;
        return location_index_[name];
    }

    int add_clock(const std::string& name) {
        if (clock_index_.count(name)) throw PreconditionError("duplicate clock '" + name + "'");
        clocks_.push_back(name);
        clock_index_[name] = static_cast<int>(clocks_.size()) - 1;
        return clock_index_[name];
    }

    void add_switch(Switch s) {
        auto nloc = static_cast<int>(locations_.size());
        if (s.from < 0 || s.from >= nloc || s.to < 0 || s.to >= nloc)
            throw PreconditionError("switch references an unknown location");
        if (s.letter && (*s.letter < 0 || *s.letter >= static_cast<int>(alphabet_.size())))
            throw PreconditionError("switch references an unknown letter");
        for (auto& a : s.guard.atoms)
            if (a.clock < 0 || a.clock >= static_cast<int>(clocks_.size()))
                throw PreconditionError("guard references an unknown clock");
        for (int r : s.resets)
            if (r < 0 || r >= static_cast<int>(clocks_.size())) throw PreconditionError("reset of an unknown clock");
        switches_.push_back(std::move(s));
        outgoing_dirty_ = true;
    }

    void clear_switches() {
        switches_.clear();
        outgoing_dirty_ = true;
    }

    void set_initial(int loc) { initial_ = loc; }
    void set_accepting(int loc, bool acc) { accepting_.at(loc) = acc; }
    void set_location_weight(int loc, Rational w) { location_weights_.at(loc) = std::move(w); }

    const std::vector<Label>& alphabet() const { return alphabet_; }
    const std::vector<std::string>& locations() const { return locations_; }
    const std::vector<std::string>& clocks() const { return clocks_; }
    const std::vector<Switch>& switches() const { return switches_; }
    const std::vector<Rational>& location_weights() const { return location_weights_; }
    int initial() const { return initial_; }
    bool accepting(int loc) const { return accepting_.at(loc); }
    std::size_t location_count() const { return locations_.size(); }
    std::size_t clock_count() const { return clocks_.size(); }

    std::optional<int> letter_index(const Label& l) const {
        auto it = letter_index_.find(l);
        if (it == letter_index_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<int> location_index(const std::string& name) const {
        auto it = location_index_.find(name);
        if (it == location_index_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<int> clock_index(const std::string& name) const {
        auto it = clock_index_.find(name);
        if (it == clock_index_.end()) return std::nullopt;
        return it->second;
    }

    bool has_silent_switches() const {
        for (auto& s : switches_)
            if (!s.letter) return true;
        return false;
    }

    bool is_weighted() const {
        for (auto& w : location_weights_)
            if (w != 0) return true;
        for (auto& s : switches_)
            if (s.weight != 0) return true;
        return false;
    }

    const std::vector<int>& outgoing(int loc) const {
        if (outgoing_dirty_) {
            outgoing_.assign(locations_.size(), {});
            for (std::size_t i = 0; i < switches_.size(); ++i) outgoing_[switches_[i].from].push_back(static_cast<int>(i));
            outgoing_dirty_ = false;
        }
        return outgoing_.at(loc);
    }

    void validate() const {
        if (locations_.empty()) throw PreconditionError("automaton has no locations");
        if (initial_ < 0 || initial_ >= static_cast<int>(locations_.size()))
            throw PreconditionError("initial location out of range");
    }

private:
    std::vector<Label> alphabet_;
    std::map<Label, int> letter_index_;
    std::vector<std::string> locations_;
    std::unordered_map<std::string, int> location_index_;
    std::vector<Rational> location_weights_;
    std::vector<bool> accepting_;
    std::vector<std::string> clocks_;
    std::unordered_map<std::string, int> clock_index_;
    std::vector<Switch> switches_;
    int initial_ = 0;
    mutable std::vector<std::vector<int>> outgoing_;
    mutable bool outgoing_dirty_ = true;
};

using WeightedTimedAutomaton = TimedAutomaton;

/// One step of a run: the switch taken and its firing time.
struct RunStep {
    int switch_index = 0;
    Rational time;
};

using Run = std::vector<RunStep>;

namespace detail {

/// Maps word letters to automaton letters; an unknown letter yields nullopt.
inline std::optional<std::vector<int>> resolve_letters(const TimedAutomaton& A, const LabeledWord& w) {
    std::vector<int> out;
    for (auto& e : w) {
        auto i = A.letter_index(e.label);
        if (!i) return std::nullopt;
        out.push_back(*i);
    }
    return out;
}

struct Configuration {
    int location;
    std::vector<Rational> valuation;
    friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

/// Exact minimum-cost run over a word for automata without silent switches.
/// Returns nullopt when no accepting run exists.
inline std::optional<std::pair<Rational, Run>> best_run_concrete(const TimedAutomaton& A, const LabeledWord& w) {
    if (A.has_silent_switches()) throw std::logic_error("concrete run search needs an automaton without silent switches");
    auto letters = resolve_letters(A, w);
    if (!letters) return std::nullopt;
    struct Entry {
        Rational cost;
        Run run;
    };
    std::map<Configuration, Entry> current;
    current[{A.initial(), std::vector<Rational>(A.clock_count(), Rational(0))}] = {Rational(0), {}};
    Rational now = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        Rational delay = w[i].time - now;
        now = w[i].time;
        std::map<Configuration, Entry> next;
        for (auto& [conf, entry] : current) {
            std::vector<Rational> val = conf.valuation;
            for (auto& x : val) x += delay;
            Rational base = entry.cost + A.location_weights()[conf.location] * delay;
            for (int si : A.outgoing(conf.location)) {
                const Switch& s = A.switches()[si];
                if (s.letter != (*letters)[i] || !s.guard.satisfied(val)) continue;
                Configuration nc{s.to, val};
                for (int r : s.resets) nc.valuation[r] = 0;
                Rational cost = base + s.weight;
                auto it = next.find(nc);
                if (it == next.end() || cost < it->second.cost) {
                    Run run = entry.run;
                    run.push_back({si, now});
                    next[nc] = {cost, std::move(run)};
                }
            }
        }
        current = std::move(next);
        if (current.empty()) return std::nullopt;
    }
    std::optional<std::pair<Rational, Run>> best;
    for (auto& [conf, entry] : current)
        if (A.accepting(conf.location) && (!best || entry.cost < best->first)) best = std::pair{entry.cost, entry.run};
    return best;
}

}  // namespace detail

/// Throws unless the word's timestamps are nondecreasing and nonnegative.
inline void check_labeled_word(const LabeledWord& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i].time < 0) throw PreconditionError("negative timestamp");
        if (i && w[i].time < w[i - 1].time) throw PreconditionError("timestamps not monotone");
    }
}

}  // namespace tiro
