#pragma once

#include "tiro/difference_constraints.hpp"
#include "tiro/product.hpp"
#include "tiro/region_graph.hpp"

#include <climits>
#include <deque>

namespace tiro {

/// A path through a region graph: (node, edge index) pairs.
using GraphPath = std::vector<std::pair<int, int>>;

struct DecodedRun {
    LabeledWord word;
    Run run;
};

namespace detail {

/// Concrete switch times realizing a region-graph path. With a margin, each switch fires within
/// that many scaled time units of its corner-point time.
inline std::optional<DecodedRun> decode_path(const RegionGraph& G, const GraphPath& path,
                                             std::optional<Rational> margin = std::nullopt) {
    const TimedAutomaton& A = G.automaton();
    int discrete = 0;
    for (auto& [u, e] : path)
        if (G.edges(u)[e].kind >= 0) ++discrete;
    DifferenceSystem sys(discrete + 1);
    std::vector<int> last_reset(A.clock_count(), 0);
    long corner_time = 0;
    int var = 0;
    std::vector<int> switch_of;
    for (auto& [u, e] : path) {
        const auto& edge = G.edges(u)[e];
        if (edge.kind == RegionGraph::kUnitDelay) {
            ++corner_time;
            continue;
        }
        if (edge.kind < 0) continue;
        int t = ++var;
        sys.add(t - 1, t, 0);
        const auto& r = G.region(G.node(u).region);
        for (std::size_t x = 0; x < A.clock_count(); ++x) {
            if (!G.relevant(static_cast<int>(x))) continue;
            int R = last_reset[x];
            int ip = r[2 * x], rk = r[2 * x + 1];
            if (rk < 0) {
                sys.add(R, t, Rational(-G.clock_ceiling(static_cast<int>(x))), true);
            } else if (rk == 0) {
                sys.add_equal(t, R, Rational(ip));
            } else {
                sys.add(R, t, Rational(-ip), true);
                sys.add(t, R, Rational(ip + 1), true);
            }
            for (std::size_t y = 0; y < A.clock_count(); ++y) {
                if (y == x || !G.relevant(static_cast<int>(y))) continue;
                int ipy = r[2 * y], rky = r[2 * y + 1];
                if (rk <= 0 || rky <= 0) continue;
                if (rk < rky) sys.add(last_reset[y], R, Rational(ip - ipy), true);
                else if (rk == rky && x < y) sys.add_equal(last_reset[y], R, Rational(ip - ipy));
            }
        }
        if (margin) {
            sys.add(t, 0, Rational(corner_time) + *margin);
            sys.add(0, t, Rational(-corner_time) + *margin);
        }
        switch_of.push_back(edge.kind);
        for (int x : A.switches()[edge.kind].resets) last_reset[x] = t;
    }
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    DecodedRun out;
    Rational scale(G.time_scale());
    for (int i = 1; i <= discrete; ++i) {
        Rational time = ((*sol)[i] - (*sol)[0]) / scale;
        int si = switch_of[i - 1];
        out.run.push_back({si, time});
        if (auto l = A.switches()[si].letter) out.word.push_back({A.alphabet()[*l], time});
    }
    return out;
}

inline bool arrives(const RegionGraph& G, const RegionGraph::Edge& e) {
    return e.kind >= 0 && G.automaton().accepting(G.node(e.to).location);
}

}  // namespace detail

// ── Emptiness ───────────────────────────────────────────────────────

struct EmptinessResult {
    bool empty = true;
    std::optional<DecodedRun> witness;
};

/// Language emptiness through reachability in the region graph.
inline EmptinessResult emptiness(const TimedAutomaton& A, ExplorationLimits limits = {}) {
    RegionGraph G(A, false, limits);
    EmptinessResult res;
    if (A.accepting(A.initial())) {
        res.empty = false;
        res.witness = DecodedRun{};
        return res;
    }
    std::vector<std::pair<int, int>> parent(G.size(), {-1, -1});
    std::vector<bool> seen(G.size(), false);
    std::deque<int> queue{G.initial()};
    seen[G.initial()] = true;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        const auto& es = G.edges(u);
        for (std::size_t i = 0; i < es.size(); ++i) {
            if (detail::arrives(G, es[i])) {
                GraphPath path{{u, static_cast<int>(i)}};
                for (int v = u; parent[v].first >= 0; v = parent[v].first) path.push_back(parent[v]);
                std::reverse(path.begin(), path.end());
                res.empty = false;
                res.witness = detail::decode_path(G, path);
                if (!res.witness) throw std::logic_error("region path could not be realized");
                return res;
            }
            int v = es[i].to;
            if (!seen[v]) {
                seen[v] = true;
                parent[v] = {u, static_cast<int>(i)};
                queue.push_back(v);
            }
        }
    }
    return res;
}

// ── Optimal reachability ────────────────────────────────────────────

struct OptimalValue {
    ExtendedValue infimum = ExtendedValue::infinity();
    /// Path reaching acceptance at the infimum (finite case).
    GraphPath best_path;
    /// For an unbounded infimum: a path to a negative cycle, the cycle, and a path to acceptance.
    GraphPath prefix, cycle, suffix;
    std::size_t graph_size = 0;
};

namespace detail {

inline std::int64_t path_cost(const RegionGraph& G, const GraphPath& p) {
    std::int64_t c = 0;
    for (auto& [u, e] : p) c += G.edges(u)[e].cost;
    return c;
}

inline OptimalValue optimal_value_on(const RegionGraph& G) {
    const TimedAutomaton& A = G.automaton();
    const int n = static_cast<int>(G.size());
    OptimalValue out;
    out.graph_size = G.size();
    if (A.accepting(A.initial())) out.infimum = ExtendedValue(0);

    std::vector<std::vector<int>> rev(n);
    std::vector<bool> useful(n, false);
    std::deque<int> queue;
    for (int u = 0; u < n; ++u)
        for (auto& e : G.edges(u)) {
            rev[e.to].push_back(u);
            if (arrives(G, e) && !useful[u]) {
                useful[u] = true;
                queue.push_back(u);
            }
        }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : rev[v])
            if (!useful[u]) {
                useful[u] = true;
                queue.push_back(u);
            }
    }
    if (!useful[G.initial()]) return out;
    int useful_count = 0;
    for (bool b : useful) useful_count += b;

    const std::int64_t INF = LLONG_MAX;
    std::vector<std::int64_t> dist(n, INF);
    std::vector<int> len(n, 0);
    std::vector<std::pair<int, int>> pred(n, {-1, -1});
    std::vector<bool> queued(n, false);
    dist[G.initial()] = 0;
    queue.push_back(G.initial());
    queued[G.initial()] = true;
    std::int64_t best = INF;
    std::pair<int, int> best_edge{-1, -1};
    int cycle_node = -1;
    while (!queue.empty() && cycle_node < 0) {
        int u = queue.front();
        queue.pop_front();
        queued[u] = false;
        const auto& es = G.edges(u);
        for (std::size_t i = 0; i < es.size(); ++i) {
            const auto& e = es[i];
            std::int64_t nd = dist[u] + e.cost;
            if (arrives(G, e) && nd < best) {
                best = nd;
                best_edge = {u, static_cast<int>(i)};
            }
            int v = e.to;
            if (!useful[v] || nd >= dist[v]) continue;
            if (v == u) {
                cycle_node = u;
                break;
            }
            dist[v] = nd;
            pred[v] = {u, static_cast<int>(i)};
            len[v] = len[u] + 1;
            if (len[v] >= useful_count) {
                cycle_node = v;
                break;
            }
            if (!queued[v]) {
                queued[v] = true;
                queue.push_back(v);
            }
        }
    }

    auto bfs = [&](int from, const std::function<bool(int, const RegionGraph::Edge&)>& goal) -> GraphPath {
        std::vector<std::pair<int, int>> par(n, {-1, -1});
        std::vector<bool> seen(n, false);
        std::deque<int> q{from};
        seen[from] = true;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            const auto& es = G.edges(u);
            for (std::size_t i = 0; i < es.size(); ++i) {
                if (goal(u, es[i])) {
                    GraphPath p{{u, static_cast<int>(i)}};
                    for (int v = u; v != from; v = par[v].first) p.push_back(par[v]);
                    std::reverse(p.begin(), p.end());
                    return p;
                }
                int v = es[i].to;
                if (useful[v] && !seen[v]) {
                    seen[v] = true;
                    par[v] = {u, static_cast<int>(i)};
                    q.push_back(v);
                }
            }
        }
        throw std::logic_error("expected path not found");
    };

    if (cycle_node >= 0) {
        int c = cycle_node;
        GraphPath cyc;
        const auto& es = G.edges(c);
        for (std::size_t i = 0; i < es.size() && cyc.empty(); ++i)
            if (es[i].to == c && es[i].cost < 0) cyc.push_back({c, static_cast<int>(i)});
        if (cyc.empty()) {
            // walk predecessors until a node repeats; that node lies on a negative cycle
            std::vector<bool> mark(n, false);
            while (!mark[c]) {
                mark[c] = true;
                c = pred[c].first;
                if (c < 0) throw std::logic_error("predecessor walk left the cycle");
            }
            int v = c;
            do {
                cyc.push_back(pred[v]);
                v = pred[v].first;
            } while (v != c);
            std::reverse(cyc.begin(), cyc.end());
        }
        out.infimum = ExtendedValue::negative_infinity();
        out.cycle = cyc;
        if (c != G.initial())
            out.prefix = bfs(G.initial(), [&](int, const RegionGraph::Edge& e) { return e.to == c; });
        out.suffix = bfs(c, [&](int, const RegionGraph::Edge& e) { return arrives(G, e); });
        return out;
    }

    if (best < INF) {
        ExtendedValue v(G.real_cost(Integer(best)));
        if (v < out.infimum) {
            out.infimum = v;
            GraphPath p{best_edge};
            for (int x = best_edge.first; pred[x].first >= 0; x = pred[x].first) p.push_back(pred[x]);
            std::reverse(p.begin(), p.end());
            out.best_path = p;
        }
    }
    return out;
}

}  // namespace detail

/// Infimum of run values over accepted words, via the corner-point abstraction.
inline OptimalValue optimal_value(const TimedAutomaton& A, ExplorationLimits limits = {}) {
    RegionGraph G(A, true, limits);
    return detail::optimal_value_on(G);
}

// ── Word-level queries ──────────────────────────────────────────────

namespace detail {

/// An automaton accepting exactly the given word at its exact timestamps.
inline TimedAutomaton word_automaton(const std::vector<Label>& alphabet, const LabeledWord& w) {
    TimedAutomaton W;
    for (auto& l : alphabet) W.add_letter(l);
    int g = W.add_clock("g");
    for (std::size_t i = 0; i <= w.size(); ++i) W.add_location("w" + std::to_string(i), 0, i == w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        Switch s;
        s.from = static_cast<int>(i);
        s.to = static_cast<int>(i + 1);
        s.letter = *W.letter_index(w[i].label);
        s.guard.atoms.push_back({g, Comparison::equal, w[i].time});
        W.add_switch(std::move(s));
    }
    return W;
}

inline bool letters_known(const TimedAutomaton& A, const LabeledWord& w) {
    for (auto& e : w)
        if (!A.letter_index(e.label)) return false;
    return true;
}

}  // namespace detail

struct AcceptResult {
    bool accepted = false;
    /// Witness run; filled for automata without silent switches.
    Run run;
};

inline AcceptResult accepts(const TimedAutomaton& A, const LabeledWord& w, ExplorationLimits limits = {}) {
    check_labeled_word(w);
    if (!detail::letters_known(A, w)) return {};
    if (!A.has_silent_switches()) {
        auto best = detail::best_run_concrete(A, w);
        if (!best) return {};
        return {true, best->second};
    }
    auto P = product(A, detail::word_automaton(A.alphabet(), w), limits);
    return {!emptiness(P, limits).empty, {}};
}

inline AcceptResult accepts(const TimedAutomaton& A, const TimedWord& w, ExplorationLimits limits = {}) {
    return accepts(A, labeled(w), limits);
}

/// Infimum over accepting runs on the word; +inf when the word is rejected.
inline ExtendedValue wta_value(const TimedAutomaton& A, const LabeledWord& w, ExplorationLimits limits = {}) {
    check_labeled_word(w);
    if (!detail::letters_known(A, w)) return ExtendedValue::infinity();
    if (!A.has_silent_switches()) {
        auto best = detail::best_run_concrete(A, w);
        return best ? ExtendedValue(best->first) : ExtendedValue::infinity();
    }
    auto P = product(A, detail::word_automaton(A.alphabet(), w), limits);
    return optimal_value(P, limits).infimum;
}

inline ExtendedValue wta_value(const TimedAutomaton& A, const TimedWord& w, ExplorationLimits limits = {}) {
    return wta_value(A, labeled(w), limits);
}

// ── Quantitative emptiness ──────────────────────────────────────────

struct QuantitativeResult {
    bool yes = false;
    ExtendedValue infimum = ExtendedValue::infinity();
    std::optional<DecodedRun> witness;
    /// The witness word's value, re-evaluated independently of the search.
    std::optional<ExtendedValue> witness_value;
};

struct QuantitativeOptions {
    Rational initial_margin = Rational(1, 1024);
    int attempts = 12;
    ExplorationLimits limits;
};

/// Decides whether some accepted word has value below λ, returning a validated witness when so.
inline QuantitativeResult quantitative_emptiness(const TimedAutomaton& A, const Rational& lambda,
                                                 QuantitativeOptions opt = {}) {
    RegionGraph G(A, true, opt.limits);
    OptimalValue ov = detail::optimal_value_on(G);
    QuantitativeResult res;
    res.infimum = ov.infimum;
    res.yes = ov.infimum < ExtendedValue(lambda);
    if (!res.yes) return res;

    Rational lambda_units = lambda * Rational(G.time_scale() * G.weight_scale());
    std::int64_t pumps = 1;
    if (ov.infimum.is_negative_infinity()) {
        Rational open = Rational(detail::path_cost(G, ov.prefix) + detail::path_cost(G, ov.suffix)) - lambda_units;
        Rational per = Rational(-detail::path_cost(G, ov.cycle));
        pumps = std::max<std::int64_t>(1, to_int64(floor_of(open / per)) + 2);
    }
    if (ov.infimum.is_finite()) {
        if (auto exact = detail::decode_path(G, ov.best_path, Rational(0))) {
            ExtendedValue v = wta_value(A, exact->word, opt.limits);
            if (v < ExtendedValue(lambda)) {
                res.witness = exact;
                res.witness_value = v;
                return res;
            }
        }
    }
    Rational margin = opt.initial_margin;
    for (int attempt = 0; attempt < opt.attempts; ++attempt, margin /= 4) {
        GraphPath path = ov.best_path;
        if (ov.infimum.is_negative_infinity()) {
            path = ov.prefix;
            for (std::int64_t k = 0; k < pumps; ++k) path.insert(path.end(), ov.cycle.begin(), ov.cycle.end());
            path.insert(path.end(), ov.suffix.begin(), ov.suffix.end());
        }
        auto run = detail::decode_path(G, path, margin);
        if (!run) throw std::logic_error("corner path could not be realized");
        ExtendedValue v = wta_value(A, run->word, opt.limits);
        if (v < ExtendedValue(lambda)) {
            res.witness = run;
            res.witness_value = v;
            return res;
        }
        if (ov.infimum.is_negative_infinity()) pumps *= 2;
    }
    throw std::logic_error("no validated witness found below the threshold");
}

}  // namespace tiro
