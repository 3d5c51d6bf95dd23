#pragma once

#include "tiro/rational.hpp"

#include <optional>
#include <vector>

namespace tiro {

/// A system of constraints x_a - x_b ≤ c (or < c) over rational variables.
class DifferenceSystem {
public:
    explicit DifferenceSystem(int variables) : n_(variables) {}

    int variables() const { return n_; }

    void add(int a, int b, Rational c, bool strict = false) { rows_.push_back({a, b, std::move(c), strict}); }

    void add_equal(int a, int b, const Rational& c) {
        add(a, b, c);
        add(b, a, Rational(-c));
    }

    /// A satisfying assignment, or nullopt when the system is infeasible.
    std::optional<std::vector<Rational>> solve() const {
        struct Dist {
            Rational c{0};
            long k = 0;
            bool operator<(const Dist& o) const { return c < o.c || (c == o.c && k < o.k); }
        };
        std::vector<Dist> d(n_);
        auto relax = [&] {
            bool changed = false;
            for (auto& r : rows_) {
                Dist cand{d[r.b].c + r.c, d[r.b].k - (r.strict ? 1 : 0)};
                if (cand < d[r.a]) {
                    d[r.a] = cand;
                    changed = true;
                }
            }
            return changed;
        };
        bool changed = true;
        for (int it = 0; it <= n_ && changed; ++it) changed = relax();
        if (changed) return std::nullopt;
        Rational eps = 1;
        for (auto& r : rows_) {
            Rational slack = d[r.b].c + r.c - d[r.a].c;
            if (slack > 0 && slack < eps) eps = slack;
        }
        eps /= Rational(2 * (n_ + 1));
        for (int attempt = 0; attempt < 64; ++attempt, eps /= 2) {
            std::vector<Rational> x(n_);
            for (int i = 0; i < n_; ++i) x[i] = d[i].c + Rational(d[i].k) * eps;
            if (satisfied(x)) return x;
        }
        return std::nullopt;
    }

    bool satisfied(const std::vector<Rational>& x) const {
        for (auto& r : rows_) {
            Rational diff = x[r.a] - x[r.b];
            if (r.strict ? !(diff < r.c) : !(diff <= r.c)) return false;
        }
        return true;
    }

    bool feasible() const { return solve().has_value(); }

private:
    struct Row {
        int a, b;
        Rational c;
        bool strict;
    };
    int n_;
    std::vector<Row> rows_;
};

}  // namespace tiro
