#pragma once

#include "tiro/timed_automaton.hpp"

#include <cstdint>
#include <deque>
#include <unordered_map>

namespace tiro {

/// The reachable region graph of a timed automaton, optionally refined to corner points.
///
/// Time is rescaled by the least common multiple S of the guard constant denominators, so all
/// scaled constants are integers. Edge costs are integers in units of 1/(S·W), where W is the
/// least common multiple of the weight denominators.
class RegionGraph {
public:
    static constexpr int kTimeStep = -1;
    static constexpr int kUnitDelay = -2;

    struct Edge {
        int to;
        int kind;
        std::int64_t cost;
    };

    struct Node {
        int location;
        int region;
        int corner;
    };

    RegionGraph(const TimedAutomaton& A, bool corners, ExplorationLimits limits = {})
        : A_(A), corners_(corners), limits_(limits) {
        A.validate();
        compute_scales();
        explore();
    }

    const TimedAutomaton& automaton() const { return A_; }
    bool with_corners() const { return corners_; }
    const Integer& time_scale() const { return S_; }
    const Integer& weight_scale() const { return W_; }
    std::size_t size() const { return nodes_.size(); }
    const Node& node(int i) const { return nodes_[i]; }
    const std::vector<Edge>& edges(int i) const { return adj_[i]; }
    int initial() const { return 0; }

    /// Scaled integer part and rank of every clock; rank −1 marks values beyond the largest constant,
    /// rank 0 an integral value, and higher ranks order the fractional parts.
    const std::vector<int>& region(int id) const { return regions_[id]; }
    int clock_ceiling(int clock) const { return ceiling_[clock]; }
    bool relevant(int clock) const { return ceiling_[clock] >= 0; }

    /// Real-valued cost represented by an integer edge cost.
    Rational real_cost(const Integer& c) const { return Rational(c, Integer(S_ * W_)); }

    /// Scaled integer constant of a guard atom.
    std::int64_t scaled(const Rational& c) const { return to_int64(numerator_of(Rational(c * Rational(S_)))); }

    std::string describe(int i) const {
        const Node& n = nodes_[i];
        std::string out = A_.locations()[n.location] + " [";
        const auto& r = regions_[n.region];
        for (std::size_t x = 0; x < A_.clock_count(); ++x) {
            if (!relevant(static_cast<int>(x))) continue;
            out += A_.clocks()[x] + ":";
            int ip = r[2 * x], rk = r[2 * x + 1];
            if (rk < 0) out += ">" + std::to_string(ceiling_[x]);
            else if (rk == 0) out += std::to_string(ip);
            else out += "(" + std::to_string(ip) + "," + std::to_string(ip + 1) + ")#" + std::to_string(rk);
            out += " ";
        }
        out += "]";
        if (corners_) out += " corner " + std::to_string(n.corner);
        return out + " (scale 1/" + S_.str() + ")";
    }

private:
    struct VecHash {
        std::size_t operator()(const std::vector<int>& v) const {
            std::size_t h = 1469598103934665603ull;
            for (int x : v) h = (h ^ static_cast<std::size_t>(x + 0x9e3779b9)) * 1099511628211ull;
            return h;
        }
    };

    void compute_scales() {
        S_ = 1;
        W_ = 1;
        for (auto& s : A_.switches()) {
            for (auto& a : s.guard.atoms) S_ = lcm_integer(S_, denominator_of(a.constant));
            W_ = lcm_integer(W_, denominator_of(s.weight));
        }
        for (auto& w : A_.location_weights()) W_ = lcm_integer(W_, denominator_of(w));
        ceiling_.assign(A_.clock_count(), -1);
        scaled_guards_.clear();
        for (auto& s : A_.switches()) {
            std::vector<std::tuple<int, Comparison, long>> g;
            for (auto& a : s.guard.atoms) {
                long c = scaled(a.constant);
                if (c > 1'000'000) throw ResourceExceeded("scaled guard constant too large");
                ceiling_[a.clock] = std::max<int>(ceiling_[a.clock], static_cast<int>(c));
                g.emplace_back(a.clock, a.op, c);
            }
            scaled_guards_.push_back(std::move(g));
        }
        location_rate_.clear();
        for (auto& w : A_.location_weights()) location_rate_.push_back(to_int64(numerator_of(Rational(w * Rational(W_)))));
        switch_cost_.clear();
        for (auto& s : A_.switches())
            switch_cost_.push_back(to_int64(numerator_of(Rational(s.weight * Rational(S_ * W_)))));
    }

    int max_rank(const std::vector<int>& r) const {
        int m = 0;
        for (std::size_t x = 0; x < ceiling_.size(); ++x) m = std::max(m, r[2 * x + 1]);
        return m;
    }

    void compact(std::vector<int>& r) const {
        std::vector<int> present;
        for (std::size_t x = 0; x < ceiling_.size(); ++x)
            if (r[2 * x + 1] > 0) present.push_back(r[2 * x + 1]);
        std::sort(present.begin(), present.end());
        present.erase(std::unique(present.begin(), present.end()), present.end());
        for (std::size_t x = 0; x < ceiling_.size(); ++x) {
            int& rk = r[2 * x + 1];
            if (rk > 0) rk = static_cast<int>(std::lower_bound(present.begin(), present.end(), rk) - present.begin()) + 1;
        }
    }

    bool satisfies(const std::vector<int>& r, int si) const {
        for (auto& [x, op, c] : scaled_guards_[si]) {
            int ip = r[2 * x], rk = r[2 * x + 1];
            bool ok;
            if (rk < 0) {
                ok = op == Comparison::greater || op == Comparison::greater_equal;
            } else if (rk == 0) {
                ok = compare(Rational(ip), op, Rational(c));
            } else {
                switch (op) {
                    case Comparison::less:
                    case Comparison::less_equal: ok = ip + 1 <= c; break;
                    case Comparison::equal: ok = false; break;
                    default: ok = ip >= c; break;
                }
            }
            if (!ok) return false;
        }
        return true;
    }

    /// Time successor and how it maps corners: same index, or shifted down by one.
    std::optional<std::pair<std::vector<int>, bool>> successor(const std::vector<int>& r) const {
        bool bounded = false, zero_class = false;
        for (std::size_t x = 0; x < ceiling_.size(); ++x) {
            if (!relevant(static_cast<int>(x))) continue;
            if (r[2 * x + 1] >= 0) bounded = true;
            if (r[2 * x + 1] == 0) zero_class = true;
        }
        if (!bounded) return std::nullopt;
        std::vector<int> s = r;
        if (zero_class) {
            for (std::size_t x = 0; x < ceiling_.size(); ++x) {
                if (!relevant(static_cast<int>(x))) continue;
                int& ip = s[2 * x];
                int& rk = s[2 * x + 1];
                if (rk == 0) {
                    if (ip == ceiling_[x]) {
                        ip = ceiling_[x] + 1;
                        rk = -1;
                    } else {
                        rk = 1;
                    }
                } else if (rk > 0) {
                    rk += 1;
                }
            }
            compact(s);
            return std::pair{s, false};
        }
        int m = max_rank(r);
        for (std::size_t x = 0; x < ceiling_.size(); ++x)
            if (s[2 * x + 1] == m) {
                s[2 * x] += 1;
                s[2 * x + 1] = 0;
            }
        return std::pair{s, true};
    }

    std::pair<std::vector<int>, int> reset(const std::vector<int>& r, const std::vector<int>& clocks, int corner) const {
        std::vector<int> s = r;
        std::vector<bool> is_reset(ceiling_.size(), false);
        for (int x : clocks)
            if (relevant(x)) is_reset[x] = true;
        int m = max_rank(r);
        std::vector<bool> kept(m + 1, false);
        for (std::size_t x = 0; x < ceiling_.size(); ++x) {
            if (is_reset[x]) {
                s[2 * x] = 0;
                s[2 * x + 1] = 0;
            } else if (r[2 * x + 1] > 0) {
                kept[r[2 * x + 1]] = true;
            }
        }
        int nc = 0;
        for (int k = m - corner + 1; k <= m; ++k)
            if (k >= 1 && kept[k]) ++nc;
        compact(s);
        return {s, corners_ ? nc : 0};
    }

    int intern_region(const std::vector<int>& r) {
        auto [it, inserted] = region_ids_.emplace(r, static_cast<int>(regions_.size()));
        if (inserted) regions_.push_back(r);
        return it->second;
    }

    int intern_node(int loc, const std::vector<int>& r, int corner, std::deque<int>& queue) {
        int rid = intern_region(r);
        std::uint64_t key = (static_cast<std::uint64_t>(loc) << 44) ^ (static_cast<std::uint64_t>(rid) << 12) ^
                            static_cast<std::uint64_t>(corner);
        auto [it, inserted] = node_ids_.emplace(key, static_cast<int>(nodes_.size()));
        if (inserted) {
            if (nodes_.size() >= limits_.max_nodes)
                throw ResourceExceeded("region graph exceeds " + std::to_string(limits_.max_nodes) + " nodes");
            nodes_.push_back({loc, rid, corner});
            adj_.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    }

    void explore() {
        std::vector<int> init(2 * A_.clock_count(), 0);
        for (std::size_t x = 0; x < ceiling_.size(); ++x)
            if (!relevant(static_cast<int>(x))) init[2 * x + 1] = -1;
        std::deque<int> queue;
        intern_node(A_.initial(), init, 0, queue);
        while (!queue.empty()) {
            int id = queue.front();
            queue.pop_front();
            Node n = nodes_[id];
            std::vector<int> r = regions_[n.region];
            std::vector<Edge> out;
            int m = max_rank(r);
            auto succ = successor(r);
            if (succ) {
                auto& [s, shifts] = *succ;
                if (!shifts) {
                    out.push_back({intern_node(n.location, s, n.corner, queue), kTimeStep, 0});
                } else if (!corners_ || n.corner >= 1) {
                    out.push_back({intern_node(n.location, s, corners_ ? n.corner - 1 : 0, queue), kTimeStep, 0});
                }
                if (corners_ && shifts && n.corner == 0)
                    out.push_back({intern_node(n.location, r, m, queue), kUnitDelay, location_rate_[n.location]});
            } else if (corners_) {
                out.push_back({id, kUnitDelay, location_rate_[n.location]});
            }
            for (int si : A_.outgoing(n.location)) {
                if (!satisfies(r, si)) continue;
                const Switch& sw = A_.switches()[si];
                auto [s, corner] = reset(r, sw.resets, n.corner);
                out.push_back({intern_node(sw.to, s, corner, queue), si, switch_cost_[si]});
            }
            adj_[id] = std::move(out);
        }
    }

    const TimedAutomaton& A_;
    bool corners_;
    ExplorationLimits limits_;
    Integer S_, W_;
    std::vector<int> ceiling_;
    std::vector<std::vector<std::tuple<int, Comparison, long>>> scaled_guards_;
    std::vector<std::int64_t> location_rate_;
    std::vector<std::int64_t> switch_cost_;
    std::vector<std::vector<int>> regions_;
    std::unordered_map<std::vector<int>, int, VecHash> region_ids_;
    std::vector<Node> nodes_;
    std::vector<std::vector<Edge>> adj_;
    std::unordered_map<std::uint64_t, int> node_ids_;
};

}  // namespace tiro
