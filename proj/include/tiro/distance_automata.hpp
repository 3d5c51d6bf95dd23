#pragma once

#include "tiro/metrics.hpp"
#include "tiro/product.hpp"

#include <deque>

namespace tiro {

// ── Distance automata ───────────────────────────────────────────────
//
// Each automaton reads the union of two words whose letters are tagged 1 and 2.

/// Tracks the current letter of each word and accrues diff of the pair as its rate.
/// Both words must start at the same instant; the value integrates up to the last event.
inline TimedAutomaton build_manhattan_wta(const DiffFunction& d) {
    const auto& sigma = d.alphabet().symbols();
    TimedAutomaton A;
    for (int tag : {1, 2})
        for (auto& a : sigma) A.add_letter({a, tag});
    int s = A.add_clock("s");
    bool needs_z = !d.all_finite();
    int z = needs_z ? A.add_clock("z") : -1;

    std::vector<std::string> side{""};
    for (auto& a : sigma) side.push_back(a);
    const int n = static_cast<int>(side.size());
    auto loc = [&](int i, int j) { return i * n + j; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational rate = 0;
            bool both = i > 0 && j > 0;
            if (both) {
                auto v = d(side[i], side[j]);
                rate = v.is_finite() ? v.value() : Rational(0);
            }
            A.add_location("l[" + (i ? side[i] : "_") + "," + (j ? side[j] : "_") + "]", rate, both);
        }
    A.set_initial(loc(0, 0));
    auto infinite = [&](int i, int j) { return i > 0 && j > 0 && !d(side[i], side[j]).is_finite(); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int c = 1; c < n; ++c)
                for (int tag : {1, 2}) {
                    Switch sw;
                    sw.from = loc(i, j);
                    sw.letter = *A.letter_index({side[c], tag});
                    int ni = tag == 1 ? c : i, nj = tag == 2 ? c : j;
                    sw.to = loc(ni, nj);
                    bool other_started = tag == 1 ? j > 0 : i > 0;
                    bool self_started = tag == 1 ? i > 0 : j > 0;
                    if (!self_started && !other_started) sw.resets.push_back(s);
                    if (!self_started && other_started) sw.guard.atoms.push_back({s, Comparison::equal, 0});
                    if (needs_z) {
                        if (infinite(i, j)) sw.guard.atoms.push_back({z, Comparison::equal, 0});
                        sw.resets.push_back(z);
                    }
                    A.add_switch(std::move(sw));
                }
    return A;
}

/// Deterministic automaton accruing the number of pending unmatched letter changes as its rate.
/// The words' letter-change sequences must agree; at most ⌈B/λ⌉ + 1 changes may be pending.
inline TimedAutomaton build_accumulated_delay_wta(const Alphabet& sigma, const Rational& lambda, const Rational& bound) {
    if (lambda <= 0 || bound < 0) throw PreconditionError("accumulated delay automaton needs λ > 0 and B ≥ 0");
    const std::size_t capacity = static_cast<std::size_t>(to_int64(ceil_of(bound / lambda))) + 1;
    TimedAutomaton A;
    for (int tag : {1, 2})
        for (auto& a : sigma.symbols()) A.add_letter({a, tag});

    struct State {
        std::string last1, last2;
        int lead = 0;
        std::vector<std::string> buffer;
        auto operator<=>(const State&) const = default;
    };
    std::map<State, int> ids;
    std::deque<State> queue;
    auto name = [](const State& s) {
        std::string b;
        for (auto& x : s.buffer) b += x + " ";
        return "(" + (s.last1.empty() ? "_" : s.last1) + "," + (s.last2.empty() ? "_" : s.last2) + ",lead" +
               std::to_string(s.lead) + ",[" + b + "])";
    };
    auto intern = [&](const State& s) {
        if (auto it = ids.find(s); it != ids.end()) return it->second;
        bool acc = s.buffer.empty() && !s.last1.empty() && !s.last2.empty();
        int id = A.add_location(name(s), Rational(static_cast<long>(s.buffer.size())), acc);
        ids[s] = id;
        queue.push_back(s);
        return id;
    };
    A.set_initial(intern(State{}));
    int reject = -1;
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        int from = ids[s];
        for (int tag : {1, 2})
            for (auto& c : sigma.symbols()) {
                int letter = *A.letter_index({c, tag});
                std::string& last = tag == 1 ? s.last1 : s.last2;
                if (c == last) {
                    A.add_switch({from, letter, {}, {}, from, 0});
                    continue;
                }
                State t = s;
                (tag == 1 ? t.last1 : t.last2) = c;
                bool ok = true;
                if (t.lead == 0 || t.lead == tag) {
                    t.lead = tag;
                    t.buffer.push_back(c);
                    ok = t.buffer.size() <= capacity;
                } else if (t.buffer.front() == c) {
                    t.buffer.erase(t.buffer.begin());
                    if (t.buffer.empty()) t.lead = 0;
                } else {
                    ok = false;
                }
                int to;
                if (ok) {
                    to = intern(t);
                } else {
                    if (reject < 0) reject = A.add_location("reject");
                    to = reject;
                }
                A.add_switch({from, letter, {}, {}, to, 0});
            }
    }
    if (reject >= 0)
        for (std::size_t li = 0; li < A.alphabet().size(); ++li) A.add_switch({reject, static_cast<int>(li), {}, {}, reject, 0});
    return A;
}

/// Nondeterministically guesses a retimed copy of the second word as silent events, charging its
/// accumulated delay from the second word plus its timed Manhattan distance to the first.
inline TimedAutomaton build_skorokhod_wta(const DiffFunction& d, const Rational& lambda, const Rational& bound) {
    if (!d.all_finite()) throw PreconditionError("Skorokhod automaton needs a finite diff");
    const auto& sigma = d.alphabet().symbols();
    TimedAutomaton manhattan = build_manhattan_wta(d);
    TimedAutomaton delay = build_accumulated_delay_wta(d.alphabet(), lambda, bound);
    std::vector<Label> three;
    for (int tag : {1, 2, 3})
        for (auto& a : sigma) three.push_back({a, tag});
    auto m = lift(manhattan, three, [](const Label& l) -> std::optional<Label> {
        if (l.tag == 1) return l;
        if (l.tag == 3) return Label{l.symbol, 2};
        return std::nullopt;
    });
    auto ad = lift(delay, three, [](const Label& l) -> std::optional<Label> {
        if (l.tag == 2) return Label{l.symbol, 1};
        if (l.tag == 3) return Label{l.symbol, 2};
        return std::nullopt;
    });
    return silence(product(m, ad), [](const Label& l) { return l.tag == 3; });
}

/// A distance automaton paired with the metric it computes.
struct DistanceAutomaton {
    std::string name;
    TimedAutomaton automaton;
    /// Every accepted word has a single run, so the value is exact and not just an upper bound.
    bool functional = false;
    std::function<ExtendedValue(const TimedWord&, const TimedWord&)> evaluate;
};

inline DistanceAutomaton manhattan_distance(const DiffFunction& d) {
    return {"timed-manhattan", build_manhattan_wta(d), true,
            [d](const TimedWord& u, const TimedWord& v) { return timed_manhattan(u, v, d); }};
}

inline DistanceAutomaton accumulated_delay_distance(const Alphabet& sigma, const Rational& lambda, const Rational& bound) {
    return {"accumulated-delay", build_accumulated_delay_wta(sigma, lambda, bound), true,
            [](const TimedWord& u, const TimedWord& v) { return accumulated_delay(u, v); }};
}

inline DistanceAutomaton skorokhod_distance(const DiffFunction& d, const Rational& lambda, const Rational& bound) {
    return {"skorokhod", build_skorokhod_wta(d, lambda, bound), false,
            [d](const TimedWord& u, const TimedWord& v) { return skorokhod(u, v, d); }};
}

}  // namespace tiro
