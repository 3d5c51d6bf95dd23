#pragma once

#include "tiro/timed_automaton.hpp"

#include <deque>
#include <functional>

namespace tiro {

/// Synchronized product of automata over a common alphabet.
/// Lettered switches fire jointly, silent switches interleave, and weights add up.
inline TimedAutomaton product(const std::vector<const TimedAutomaton*>& parts, ExplorationLimits limits = {}) {
    if (parts.empty()) throw PreconditionError("product of no automata");
    std::set<Label> base(parts[0]->alphabet().begin(), parts[0]->alphabet().end());
    for (auto* p : parts) {
        p->validate();
        if (std::set<Label>(p->alphabet().begin(), p->alphabet().end()) != base)
            throw PreconditionError("product components need the same alphabet");
    }
    const std::size_t k = parts.size();
    TimedAutomaton P;
    for (auto& l : parts[0]->alphabet()) P.add_letter(l);
    std::vector<int> clock_offset;
    for (std::size_t i = 0; i < k; ++i) {
        clock_offset.push_back(static_cast<int>(P.clock_count()));
        for (auto& c : parts[i]->clocks()) P.add_clock(std::to_string(i + 1) + "." + c);
    }
    // letter index of each product letter inside each component
    std::vector<std::vector<int>> local(k);
    for (std::size_t i = 0; i < k; ++i)
        for (auto& l : P.alphabet()) local[i].push_back(*parts[i]->letter_index(l));

    std::map<std::vector<int>, int> ids;
    std::deque<std::vector<int>> queue;
    auto intern = [&](const std::vector<int>& tuple) {
        auto it = ids.find(tuple);
        if (it != ids.end()) return it->second;
        if (ids.size() >= limits.max_nodes) throw ResourceExceeded("product exceeds location budget");
        std::string name;
        Rational w = 0;
        bool acc = true;
        for (std::size_t i = 0; i < k; ++i) {
            if (i) name += "|";
            name += parts[i]->locations()[tuple[i]];
            w += parts[i]->location_weights()[tuple[i]];
            acc = acc && parts[i]->accepting(tuple[i]);
        }
        int id = P.add_location(name + "#" + std::to_string(ids.size()), w, acc);
        ids[tuple] = id;
        queue.push_back(tuple);
        return id;
    };
    std::vector<int> init;
    for (auto* p : parts) init.push_back(p->initial());
    P.set_initial(intern(init));

    while (!queue.empty()) {
        std::vector<int> tuple = queue.front();
        queue.pop_front();
        int from = ids[tuple];
        for (std::size_t li = 0; li < P.alphabet().size(); ++li) {
            std::vector<std::vector<int>> options(k);
            bool blocked = false;
            for (std::size_t i = 0; i < k && !blocked; ++i) {
                for (int si : parts[i]->outgoing(tuple[i]))
                    if (parts[i]->switches()[si].letter == local[i][li]) options[i].push_back(si);
                blocked = options[i].empty();
            }
            if (blocked) continue;
            std::vector<std::size_t> pick(k, 0);
            while (true) {
                Switch s;
                s.from = from;
                s.letter = static_cast<int>(li);
                std::vector<int> target(k);
                for (std::size_t i = 0; i < k; ++i) {
                    const Switch& c = parts[i]->switches()[options[i][pick[i]]];
                    s.guard = s.guard.conjoin(c.guard.shifted(clock_offset[i]));
                    for (int r : c.resets) s.resets.push_back(r + clock_offset[i]);
                    s.weight += c.weight;
                    target[i] = c.to;
                }
                s.to = intern(target);
                P.add_switch(std::move(s));
                std::size_t i = 0;
                while (i < k && ++pick[i] == options[i].size()) pick[i++] = 0;
                if (i == k) break;
            }
        }
        for (std::size_t i = 0; i < k; ++i) {
            for (int si : parts[i]->outgoing(tuple[i])) {
                const Switch& c = parts[i]->switches()[si];
                if (c.letter) continue;
                std::vector<int> target = tuple;
                target[i] = c.to;
                Switch s;
                s.from = from;
                s.guard = c.guard.shifted(clock_offset[i]);
                for (int r : c.resets) s.resets.push_back(r + clock_offset[i]);
                s.weight = c.weight;
                s.to = intern(target);
                P.add_switch(std::move(s));
            }
        }
    }
    return P;
}

inline TimedAutomaton product(const TimedAutomaton& a, const TimedAutomaton& b, ExplorationLimits limits = {}) {
    return product(std::vector<const TimedAutomaton*>{&a, &b}, limits);
}

/// Re-expresses an automaton over a new alphabet. Each new letter either maps to an old letter,
/// whose switches it inherits, or is ignored through zero-weight self-loops on every location.
inline TimedAutomaton lift(const TimedAutomaton& A, const std::vector<Label>& alphabet,
                           const std::function<std::optional<Label>(const Label&)>& mapping) {
    TimedAutomaton B;
    for (auto& l : alphabet) B.add_letter(l);
    for (std::size_t i = 0; i < A.location_count(); ++i)
        B.add_location(A.locations()[i], A.location_weights()[i], A.accepting(static_cast<int>(i)));
    B.set_initial(A.initial());
    for (auto& c : A.clocks()) B.add_clock(c);
    for (auto& s : A.switches())
        if (!s.letter) B.add_switch(s);
    for (std::size_t li = 0; li < alphabet.size(); ++li) {
        auto target = mapping(alphabet[li]);
        if (!target) {
            for (std::size_t loc = 0; loc < A.location_count(); ++loc)
                B.add_switch({static_cast<int>(loc), static_cast<int>(li), {}, {}, static_cast<int>(loc), 0});
            continue;
        }
        auto old = A.letter_index(*target);
        if (!old) continue;
        for (auto s : A.switches()) {
            if (s.letter != *old) continue;
            s.letter = static_cast<int>(li);
            B.add_switch(std::move(s));
        }
    }
    return B;
}

/// Turns switches whose letter satisfies the predicate into silent ones and drops those letters.
inline TimedAutomaton silence(const TimedAutomaton& A, const std::function<bool(const Label&)>& hide) {
    TimedAutomaton B;
    std::vector<std::optional<int>> remap;
    for (auto& l : A.alphabet()) remap.push_back(hide(l) ? std::nullopt : std::optional<int>(B.add_letter(l)));
    for (std::size_t i = 0; i < A.location_count(); ++i)
        B.add_location(A.locations()[i], A.location_weights()[i], A.accepting(static_cast<int>(i)));
    B.set_initial(A.initial());
    for (auto& c : A.clocks()) B.add_clock(c);
    for (auto s : A.switches()) {
        if (s.letter) s.letter = remap[*s.letter];
        B.add_switch(std::move(s));
    }
    return B;
}

/// Multiplies every location rate and switch weight by the factor.
inline TimedAutomaton scale_weights(const TimedAutomaton& A, const Rational& factor) {
    TimedAutomaton B = A;
    for (std::size_t i = 0; i < A.location_count(); ++i)
        B.set_location_weight(static_cast<int>(i), A.location_weights()[i] * factor);
    B.clear_switches();
    for (auto s : A.switches()) {
        s.weight *= factor;
        B.add_switch(std::move(s));
    }
    return B;
}

/// Adds a letter marking the end of observation: it leads from every accepting location to a
/// fresh final location, which becomes the only accepting one.
inline TimedAutomaton with_end_marker(const TimedAutomaton& A, const Label& marker) {
    TimedAutomaton B = A;
    int m = B.add_letter(marker);
    int done = B.add_location("$end");
    for (std::size_t i = 0; i < A.location_count(); ++i) {
        if (!A.accepting(static_cast<int>(i))) continue;
        B.add_switch({static_cast<int>(i), m, {}, {}, done, 0});
        B.set_accepting(static_cast<int>(i), false);
    }
    B.set_accepting(done, true);
    return B;
}

}  // namespace tiro
