#pragma once

#include "tiro/io.hpp"

#include <random>

namespace tiro::testing {

using Rng = std::mt19937;

inline Rational random_rational(Rng& rng, long max_numerator, long denominator) {
    return Rational(static_cast<long>(rng() % (max_numerator + 1)), denominator);
}

inline const Symbol& pick(Rng& rng, const std::vector<Symbol>& xs) { return xs[rng() % xs.size()]; }

/// A word starting at 0 and ending at `end`, with up to `events` events on a 1/den grid.
inline TimedWord random_word(Rng& rng, const Alphabet& sigma, int events, long den, const Rational& end) {
    int n = 1 + static_cast<int>(rng() % events);
    std::vector<Rational> times{0};
    long span = to_int64(floor_of(end * Rational(den)));
    for (int i = 1; i < n; ++i) times.push_back(random_rational(rng, span, den));
    std::sort(times.begin(), times.end());
    std::vector<Event> ev;
    for (auto& t : times) ev.push_back({pick(rng, sigma.symbols()), t});
    ev.push_back({ev.back().letter, end});
    return TimedWord(std::move(ev));
}

/// A stutter-free pair sharing its letter sequence, with segments of length at least `lambda`
/// on a 1/den grid, per-breakpoint offsets at most `bound`, both starting at 0 and ending at a common time.
/// Repeated letters are sprinkled in to exercise stutter handling.
inline std::pair<TimedWord, TimedWord> in_scope_pair(Rng& rng, const Alphabet& sigma, int changes, const Rational& lambda,
                                                     const Rational& bound, long den) {
    const auto& letters = sigma.symbols();
    int n = 1 + static_cast<int>(rng() % (changes + 1));
    std::vector<Symbol> seq{pick(rng, letters)};
    while (static_cast<int>(seq.size()) < n) {
        Symbol a = pick(rng, letters);
        if (a != seq.back()) seq.push_back(a);
    }
    const long off = to_int64(floor_of(bound * Rational(den)));
    const long gap = to_int64(ceil_of(lambda * Rational(den)));
    std::vector<Rational> du{0}, dv{0};
    for (int j = 1; j < n; ++j) {
        while (true) {
            Rational a = du.back() + Rational(gap + static_cast<long>(rng() % 3), den);
            Rational b = a + Rational(static_cast<long>(rng() % (2 * off + 1)) - off, den);
            if (b - dv.back() >= lambda) {
                du.push_back(a);
                dv.push_back(b);
                break;
            }
        }
    }
    Rational end = std::max(du.back(), dv.back()) + lambda + Rational(static_cast<long>(rng() % 3), den);
    auto build = [&](const std::vector<Rational>& ts) {
        std::vector<Event> ev;
        for (int j = 0; j < n; ++j) {
            ev.push_back({seq[j], ts[j]});
            if (rng() % 3 == 0) ev.push_back({seq[j], ts[j] + Rational(1, 2 * den)});
        }
        ev.push_back({seq.back(), end});
        return TimedWord(std::move(ev));
    };
    return {build(du), build(dv)};
}

/// Symmetric diff with off-diagonal entries drawn from [lo, hi] on a 1/4 grid.
inline DiffFunction random_diff(Rng& rng, const Alphabet& sigma, const Rational& lo, const Rational& hi) {
    DiffFunction d(sigma);
    long steps = to_int64(floor_of((hi - lo) * 4));
    const auto& s = sigma.symbols();
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            d.set(s[i], s[j], ExtendedValue(lo + Rational(static_cast<long>(rng() % (steps + 1)), 4)));
    return d;
}

// ── Oracles on raw events ───────────────────────────────────────────

/// Value at t: the last event at or before t.
inline Symbol raw_value(const TimedWord& w, const Rational& t) {
    Symbol cur = w[0].letter;
    for (auto& e : w.events())
        if (e.time <= t) cur = e.letter;
    return cur;
}

/// Integral of diff over the common domain, evaluated at midpoints of the merged event grid.
inline ExtendedValue oracle_timed_manhattan(const TimedWord& u, const TimedWord& v, const DiffFunction& d) {
    std::set<Rational> cuts;
    for (auto* w : {&u, &v})
        for (auto& e : w->events()) cuts.insert(e.time);
    std::vector<Rational> grid(cuts.begin(), cuts.end());
    ExtendedValue total(0);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        Rational mid = (grid[i] + grid[i + 1]) / 2;
        total = total + (grid[i + 1] - grid[i]) * d(raw_value(u, mid), raw_value(v, mid));
    }
    return total;
}

/// Breakpoints of the signal: times where the value changes, with the letter taken there.
inline std::vector<std::pair<Symbol, Rational>> raw_breakpoints(const TimedWord& w) {
    std::vector<std::pair<Symbol, Rational>> out;
    std::set<Rational> times;
    for (auto& e : w.events()) times.insert(e.time);
    for (auto& t : times) {
        Symbol x = raw_value(w, t);
        if (out.empty() || out.back().first != x) out.push_back({x, t});
    }
    return out;
}

inline ExtendedValue oracle_accumulated_delay(const TimedWord& u, const TimedWord& v) {
    auto a = raw_breakpoints(u), b = raw_breakpoints(v);
    if (a.size() != b.size()) return ExtendedValue::infinity();
    Rational total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].first != b[i].first) return ExtendedValue::infinity();
        total += abs_of(a[i].second - b[i].second);
    }
    return ExtendedValue(total);
}

/// Distortion plus mismatch of f against g with g's breakpoints moved to `starts` (first stays at the start).
inline ExtendedValue retiming_objective(const TimedWord& f, const TimedWord& g, const std::vector<Rational>& starts,
                                        const DiffFunction& d) {
    auto b = raw_breakpoints(g);
    std::vector<Event> ev;
    Rational shift = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        shift += abs_of(starts[i] - b[i].second);
        ev.push_back({b[i].first, starts[i]});
    }
    ev.push_back({b.back().first, g.end()});
    return ExtendedValue(shift) + oracle_timed_manhattan(f, TimedWord(std::move(ev)), d);
}

/// Best retiming of g's breakpoints restricted to a grid of the given step, by dynamic programming over
/// (breakpoint index, grid position). The grid must contain every breakpoint of f, and diffs must be finite.
/// A breakpoint of g at the domain end stays there.
inline Rational grid_skorokhod(const TimedWord& f, const TimedWord& g, const DiffFunction& d, const Rational& step) {
    auto b = raw_breakpoints(g);
    const Rational T0 = f.start(), T = f.end();
    const long cells = to_int64(floor_of((T - T0) / step));
    if (T0 + step * Rational(cells) != T) throw PreconditionError("grid does not reach the domain end");
    for (auto& [x, t] : raw_breakpoints(f))
        if (!is_integral((t - T0) / step)) throw PreconditionError("grid misses a breakpoint");
    std::vector<Rational> grid;
    for (long p = 0; p <= cells; ++p) grid.push_back(T0 + step * Rational(p));
    // prefix[a][p]: mismatch of the constant letter a against f on [T0, grid[p])
    std::map<Symbol, std::vector<Rational>> prefix;
    for (auto& [a, t] : b) {
        if (prefix.count(a)) continue;
        std::vector<Rational> acc{0};
        for (long p = 0; p < cells; ++p) {
            auto c = d(raw_value(f, grid[p]), a);
            if (!c.is_finite()) throw PreconditionError("grid oracle needs finite diffs");
            acc.push_back(acc.back() + step * c.value());
        }
        prefix[a] = std::move(acc);
    }
    const std::size_t n = b.size(), G = grid.size();
    const bool pinned_end = n > 1 && b.back().second == T;
    std::vector<std::vector<std::optional<Rational>>> best(n, std::vector<std::optional<Rational>>(G));
    best[0][0] = Rational(0);
    for (std::size_t j = 1; j < n; ++j) {
        const auto& P = prefix[b[j - 1].first];
        for (std::size_t p = 1; p < G; ++p) {
            if (pinned_end && j == n - 1 && p != G - 1) continue;
            for (std::size_t q = 0; q < p; ++q) {
                if (!best[j - 1][q]) continue;
                Rational c = *best[j - 1][q] + (P[p] - P[q]) + abs_of(grid[p] - b[j].second);
                if (!best[j][p] || c < *best[j][p]) best[j][p] = c;
            }
        }
    }
    std::optional<Rational> out;
    const auto& P = prefix[b.back().first];
    for (std::size_t p = 0; p < G; ++p) {
        if (!best[n - 1][p]) continue;
        Rational c = *best[n - 1][p] + (P[G - 1] - P[p]);
        if (!out || c < *out) out = c;
    }
    return *out;
}

/// A random strictly increasing placement of g's breakpoints on the given grid, first one at the start.
inline std::vector<Rational> random_retiming(Rng& rng, const TimedWord& g, const Rational& step) {
    auto b = raw_breakpoints(g);
    const long cells = to_int64(floor_of((g.end() - g.start()) / step));
    std::set<long> picks;
    if (static_cast<long>(b.size()) > cells) return {};
    while (picks.size() + 1 < b.size()) picks.insert(1 + static_cast<long>(rng() % cells));
    std::vector<Rational> out{g.start()};
    for (long p : picks) out.push_back(g.start() + step * Rational(p));
    if (b.size() > 1 && b.back().second == g.end()) out.back() = g.end();
    return out;
}

// ── Discrete oracle ─────────────────────────────────────────────────

/// Generalized Manhattan distance with padding, summed position by position.
inline ExtendedValue oracle_manhattan(const Word& s, const Word& t, const DiffFunction& d) {
    ExtendedValue total(0);
    for (std::size_t i = 0; i < std::max(s.size(), t.size()); ++i)
        total = total + d(i < s.size() ? s[i] : kPadding, i < t.size() ? t[i] : kPadding);
    return total;
}

inline std::vector<Word> all_words(const std::vector<Symbol>& sigma, std::size_t min_len, std::size_t max_len) {
    std::vector<Word> out, layer{{}};
    if (min_len == 0) out.push_back({});
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (auto& w : layer)
            for (auto& a : sigma) {
                Word x = w;
                x.push_back(a);
                next.push_back(x);
            }
        layer = std::move(next);
        if (len >= min_len) out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

struct BruteForce {
    bool violated = false;
    std::size_t shortest = 0;
    Word s, t;
};

/// Searches all accepted input pairs up to the length bound for d_O > K·d_I with finite d_I.
inline BruteForce brute_force_robustness(const std::function<std::optional<Word>(const Word&)>& out,
                                         const std::vector<Symbol>& sigma, std::size_t max_len, bool equal_lengths,
                                         const DiffFunction& dI, const DiffFunction& dO, const Rational& K) {
    std::vector<std::pair<Word, Word>> accepted;
    for (auto& w : all_words(sigma, 0, max_len))
        if (auto o = out(w)) accepted.push_back({w, *o});
    BruteForce best;
    for (auto& [s, os] : accepted)
        for (auto& [t, ot] : accepted) {
            if (equal_lengths && s.size() != t.size()) continue;
            auto di = oracle_manhattan(s, t, dI);
            if (!di.is_finite()) continue;
            if (!(oracle_manhattan(os, ot, dO) > K * di)) continue;
            std::size_t len = std::max(s.size(), t.size());
            if (!best.violated || len < best.shortest) best = {true, len, s, t};
        }
    return best;
}

// ── Transducers ─────────────────────────────────────────────────────

/// Maps 0 to x and 1 to y.
inline DiscreteTransducer identity_fst() {
    DiscreteTransducer F(Alphabet("bits", {"0", "1"}), Alphabet("xy", {"x", "y"}));
    int s = F.add_state("s", true, true);
    F.add_transition({s, "0", {"x"}, s});
    F.add_transition({s, "1", {"y"}, s});
    return F;
}

/// Deterministic one-clock transducer over input a and outputs b, c. In structured mode every
/// location either reads inputs or emits through one rigid switch, and emitting locations reject.
inline TimedTransducer random_deterministic(Rng& rng, bool structured) {
    using C = Comparison;
    auto guard = [](std::vector<ClockAtom> atoms) { return ClockConstraint{std::move(atoms)}; };
    TimedAutomaton A;
    for (auto s : {"a", "b", "c"}) A.add_letter({s, 0});
    int x = A.add_clock("x");
    const int n = 3 + static_cast<int>(rng() % 2);
    std::vector<bool> emits(n);
    for (int q = 0; q < n; ++q) {
        emits[q] = structured ? q % 2 == 1 : rng() % 2 == 0;
        A.add_location("q" + std::to_string(q), 0, structured ? !emits[q] && rng() % 2 == 0 : rng() % 3 == 0);
    }
    auto target = [&] { return static_cast<int>(rng() % n); };
    auto reset = [&] { return rng() % 2 ? std::vector<int>{x} : std::vector<int>{}; };
    Rational k(static_cast<long>(rng() % 3));
    for (int q = 0; q < n; ++q) {
        if (!structured || !emits[q]) {
            if (rng() % 2) {
                A.add_switch({q, 0, guard({{x, C::less, k}}), reset(), target(), 0});
                A.add_switch({q, 0, guard({{x, C::greater_equal, k}}), reset(), target(), 0});
            } else {
                A.add_switch({q, 0, {}, reset(), target(), 0});
            }
        }
        if (!emits[q]) continue;
        int letter = 1 + static_cast<int>(rng() % 2);
        Rational c(static_cast<long>(rng() % 3));
        bool rigid = structured || rng() % 3 != 0;
        A.add_switch({q, letter, rigid ? guard({{x, C::equal, c}}) : guard({{x, C::greater, c}}), reset(), target(), 0});
        if (!structured && rng() % 2) {
            int other = letter == 1 ? 2 : 1;
            A.add_switch({q, other, guard({{x, C::equal, c + 1}}), reset(), target(), 0});
        }
    }
    return TimedTransducer(std::move(A), Alphabet("in", {"a"}), Alphabet("out", {"b", "c"}));
}

// ── Circuits ────────────────────────────────────────────────────────

/// Oscillator with the delay fed back through the output disjunction, or, when `transient`, fed by the input only.
inline AsyncCircuit oscillator(bool transient) {
    AsyncCircuit C;
    C.add_gate("i", GateOp::input);
    if (transient) {
        C.add_gate("y", GateOp::delay, {"i"}, 1);
    } else {
        C.add_gate("z", GateOp::or_gate, {"i", "y"});
        C.add_gate("y", GateOp::delay, {"z"}, 1);
    }
    C.add_gate("o", GateOp::or_gate, {"i", "y"});
    C.set_outputs({"o"});
    C.validate();
    return C;
}

/// Step-function view of the compiled run on [0, |w|]; the value at |w| opens the next round,
/// whose input repeats the last letter.
inline CadlagFunction compiled_waveform(const CircuitTransducer& t, const Word& w) {
    auto pieces = step_function(t.run(w)).pieces();
    Word extended = w;
    extended.push_back(w.back());
    const Symbol& last = t.run(extended).back();
    Rational n(static_cast<long>(w.size()));
    if (pieces.back().letter != last) pieces.push_back({n, last});
    return CadlagFunction(std::move(pieces), n);
}

/// A circuit with the given numbers of inputs, outputs and delay elements; delay lengths up to max_delay.
inline AsyncCircuit random_circuit(Rng& rng, int inputs, int outputs, int delays, int max_delay) {
    AsyncCircuit C;
    std::vector<std::string> sources;
    for (int i = 0; i < inputs; ++i) {
        C.add_gate("i" + std::to_string(i), GateOp::input);
        sources.push_back("i" + std::to_string(i));
    }
    for (int k = 0; k < delays; ++k) sources.push_back("y" + std::to_string(k));
    std::vector<std::string> logic;
    int gates = 1 + static_cast<int>(rng() % 4);
    const GateOp ops[] = {GateOp::and_gate, GateOp::or_gate, GateOp::not_gate, GateOp::xor_gate};
    for (int g = 0; g < gates; ++g) {
        GateOp op = ops[rng() % 4];
        std::vector<std::string> args;
        int arity = op == GateOp::not_gate ? 1 : 2;
        for (int a = 0; a < arity; ++a) args.push_back(pick(rng, sources));
        std::string id = "g" + std::to_string(g);
        C.add_gate(id, op, args);
        sources.push_back(id);
        logic.push_back(id);
    }
    for (int k = 0; k < delays; ++k)
        C.add_gate("y" + std::to_string(k), GateOp::delay, {pick(rng, sources)}, 1 + static_cast<int>(rng() % max_delay));
    std::vector<std::string> outs;
    for (int o = 0; o < outputs; ++o) outs.push_back(pick(rng, sources));
    C.set_outputs(outs);
    C.validate();
    return C;
}

// ── Automata ────────────────────────────────────────────────────────

/// Minimum value over all runs of an automaton without silent switches, by exhaustive enumeration.
inline std::optional<Rational> oracle_run_value(const TimedAutomaton& A, const LabeledWord& w) {
    std::optional<Rational> best;
    std::function<void(int, std::vector<Rational>, std::size_t, Rational, Rational)> go =
        [&](int loc, std::vector<Rational> nu, std::size_t i, Rational now, Rational cost) {
            if (i == w.size()) {
                if (A.accepting(loc) && (!best || cost < *best)) best = cost;
                return;
            }
            Rational delay = w[i].time - now;
            cost += A.location_weights()[loc] * delay;
            for (auto& x : nu) x += delay;
            for (auto& s : A.switches()) {
                if (s.from != loc || !s.letter || A.alphabet()[*s.letter] != w[i].label) continue;
                bool ok = true;
                for (auto& a : s.guard.atoms) ok = ok && compare(nu[a.clock], a.op, a.constant);
                if (!ok) continue;
                auto next = nu;
                for (int r : s.resets) next[r] = 0;
                go(s.to, next, i + 1, w[i].time, cost + s.weight);
            }
        };
    go(A.initial(), std::vector<Rational>(A.clock_count(), Rational(0)), 0, Rational(0), Rational(0));
    return best;
}

/// Integer-constant automaton over letters a and b with the given shape; every location may accept.
inline TimedAutomaton random_automaton(Rng& rng, int locations, int clocks, int switches, int max_constant,
                                       bool weighted) {
    TimedAutomaton A;
    A.add_letter({"a", 0});
    A.add_letter({"b", 0});
    for (int c = 0; c < clocks; ++c) A.add_clock("x" + std::to_string(c));
    for (int l = 0; l < locations; ++l)
        A.add_location("l" + std::to_string(l), weighted ? Rational(static_cast<long>(rng() % 4) - 1) : Rational(0),
                       rng() % 3 == 0);
    const Comparison ops[] = {Comparison::less, Comparison::less_equal, Comparison::equal, Comparison::greater_equal,
                              Comparison::greater};
    for (int k = 0; k < switches; ++k) {
        Switch s;
        s.from = k < locations ? k : static_cast<int>(rng() % locations);
        s.to = static_cast<int>(rng() % locations);
        s.letter = static_cast<int>(rng() % 2);
        int atoms = static_cast<int>(rng() % 3);
        for (int a = 0; a < atoms && clocks > 0; ++a)
            s.guard.atoms.push_back({static_cast<int>(rng() % clocks), ops[rng() % 5],
                                     Rational(static_cast<long>(rng() % (max_constant + 1)))});
        for (int c = 0; c < clocks; ++c)
            if (rng() % 3 == 0) s.resets.push_back(c);
        if (weighted) s.weight = Rational(static_cast<long>(rng() % 5) - 2);
        A.add_switch(std::move(s));
    }
    return A;
}

/// Untagged word over a and b with timestamps on a 1/den grid below the bound.
inline LabeledWord random_labeled_word(Rng& rng, int length, long den, long bound) {
    std::vector<Rational> ts;
    for (int i = 0; i < length; ++i) ts.push_back(Rational(static_cast<long>(rng() % (bound * den)), den));
    std::sort(ts.begin(), ts.end());
    LabeledWord w;
    for (auto& t : ts) w.push_back({{rng() % 2 ? "a" : "b", 0}, t});
    return w;
}

/// Applies f ↦ f² to every fractional part; integer parts and the order of fractional parts survive,
/// so each valuation along a run stays in its region for integer guard constants.
inline LabeledWord region_twin(const LabeledWord& w) {
    LabeledWord out = w;
    for (auto& e : out) {
        Rational f = frac_of(e.time);
        e.time = e.time - f + f * f;
    }
    return out;
}

/// Plain one-letter automaton builder used by the hand-built suites.
struct SmallWta {
    TimedAutomaton A;
    int x;
    SmallWta() {
        A.add_letter({"a", 0});
        A.add_letter({"b", 0});
        x = A.add_clock("x");
    }
    int loc(const std::string& n, Rational rate, bool acc = false) { return A.add_location(n, std::move(rate), acc); }
    void edge(int from, const std::string& letter, std::vector<ClockAtom> guard, bool reset, int to, Rational w = 0) {
        Switch s{from, *A.letter_index({letter, 0}), ClockConstraint{std::move(guard)}, {}, to, std::move(w)};
        if (reset) s.resets.push_back(x);
        A.add_switch(std::move(s));
    }
    ClockAtom at(Comparison op, Rational c) const { return {x, op, std::move(c)}; }
};

struct AnalyticCase {
    std::string name;
    TimedAutomaton automaton;
    ExtendedValue infimum;
    bool attained;
};

/// Ten single-clock automata with rates in {-1, 0, 1, 2} and hand-computed infima.
inline std::vector<AnalyticCase> analytic_suite() {
    using C = Comparison;
    std::vector<AnalyticCase> out;
    auto add = [&](std::string name, SmallWta& w, ExtendedValue inf, bool attained) {
        out.push_back({std::move(name), w.A, inf, attained});
    };
    {
        SmallWta w;
        int l0 = w.loc("l0", 1), l1 = w.loc("l1", 0, true);
        w.edge(l0, "a", {w.at(C::greater_equal, 1)}, false, l1);
        add("wait at least one unit at rate 1", w, ExtendedValue(1), true);
    }
    {
        SmallWta w;
        int l0 = w.loc("l0", 2), l1 = w.loc("l1", 0, true);
        w.edge(l0, "a", {w.at(C::greater, 1)}, false, l1);
        add("strict lower bound at rate 2", w, ExtendedValue(2), false);
    }
    {
        SmallWta w;
        int l0 = w.loc("l0", -1), l1 = w.loc("l1", 0, true);
        w.edge(l0, "a", {w.at(C::less_equal, 3)}, false, l1);
        add("negative rate up to a closed bound", w, ExtendedValue(-3), true);
    }
    {
        SmallWta w;
        int l0 = w.loc("l0", -1), l1 = w.loc("l1", 0, true);
        w.edge(l0, "a", {w.at(C::less, 2)}, false, l1);
        add("negative rate up to an open bound", w, ExtendedValue(-2), false);
    }
    {
        SmallWta w;
        int l0 = w.loc("l0", 1), l1 = w.loc("l1", 0, true), l2 = w.loc("l2", -1);
        w.edge(l0, "a", {w.at(C::greater_equal, 2)}, false, l1);
        w.edge(l0, "b", {}, true, l2);
        w.edge(l2, "a", {w.at(C::less_equal, 1)}, false, l1);
        add("cheaper detour through a negative location", w, ExtendedValue(-1), true);
    }
    {
        SmallWta w;
        int l0 = w.loc("l0", -1), l1 = w.loc("l1", 0, true);
        w.edge(l0, "a", {w.at(C::equal, 1)}, true, l0);
        w.edge(l0, "b", {w.at(C::less_equal, 1)}, false, l1);
        add("negative cycle", w, ExtendedValue::negative_infinity(), false);
    }
    {
        SmallWta w;
        int l0 = w.loc("l0", 2), l1 = w.loc("l1", -1), l2 = w.loc("l2", 0, true);
        w.edge(l0, "a", {w.at(C::greater, 1), w.at(C::less, 2)}, false, l1);
        w.edge(l1, "b", {w.at(C::less, 3)}, false, l2);
        add("open window followed by negative rate", w, ExtendedValue(0), false);
    }
    {
        SmallWta w;
        w.loc("l0", -1, true);
        add("accepting start with no switches", w, ExtendedValue(0), true);
    }
    {
        SmallWta w;
        int l0 = w.loc("l0", 1), l1 = w.loc("l1", 0, true);
        w.edge(l0, "a", {w.at(C::greater_equal, 1)}, true, l0);
        w.edge(l0, "b", {w.at(C::greater_equal, 2)}, false, l1);
        add("positive loop never pays off", w, ExtendedValue(2), true);
    }
    {
        SmallWta w;
        int l0 = w.loc("l0", 0), l1 = w.loc("l1", 2), l2 = w.loc("l2", 0, true);
        w.edge(l0, "a", {w.at(C::equal, 1)}, true, l1);
        w.edge(l1, "b", {w.at(C::greater_equal, Rational(1, 2))}, false, l2);
        add("half-unit constant at rate 2", w, ExtendedValue(1), true);
    }
    return out;
}

}  // namespace tiro::testing
