#include "support.hpp"

#include <gtest/gtest.h>

using namespace tiro;
using namespace tiro::testing;

namespace {

using C = Comparison;

LabeledWord lw(std::initializer_list<std::pair<const char*, Rational>> items) {
    LabeledWord w;
    for (auto& [l, t] : items) w.push_back({Label::parse(l), t});
    return w;
}

TimedAutomaton universal(const std::vector<Label>& letters) {
    TimedAutomaton A;
    for (auto& l : letters) A.add_letter(l);
    int q = A.add_location("q", 0, true);
    for (std::size_t i = 0; i < letters.size(); ++i) A.add_switch({q, static_cast<int>(i), {}, {}, q, 0});
    return A;
}

}  // namespace

// ── Constraints ─────────────────────────────────────────────────────

TEST(ClockConstraints, ParseFormatAndSatisfy) {
    auto idx = [](const std::string& n) { return n == "x" ? 0 : n == "y" ? 1 : -1; };
    auto g = parse_guard("x >= 1 && y < 5/2", idx);
    ASSERT_EQ(g.atoms.size(), 2u);
    EXPECT_TRUE(g.satisfied({Rational(1), Rational(2)}));
    EXPECT_FALSE(g.satisfied({Rational(1), Rational(5, 2)}));
    EXPECT_EQ(parse_guard(format_guard(g, {"x", "y"}), idx).atoms.size(), 2u);
    EXPECT_TRUE(parse_guard("true", idx).atoms.empty());
    EXPECT_THROW(parse_guard("z < 1", idx), ParseError);
    EXPECT_TRUE(parse_guard("x == 1", idx).has_equality());
}

// ── Membership ──────────────────────────────────────────────────────

TEST(Membership, UniversalAutomatonAcceptsEverything) {
    auto A = universal({{"a", 0}, {"b", 0}});
    Rng rng(2);
    for (int k = 0; k < 20; ++k) {
        EXPECT_TRUE(accepts(A, random_labeled_word(rng, 5, 4, 3)).accepted);
    }
    EXPECT_TRUE(accepts(A, LabeledWord{}).accepted);
}

TEST(Membership, EqualityGuard) {
    SmallWta w;
    int l0 = w.loc("l0", 0), l1 = w.loc("l1", 0, true);
    w.edge(l0, "a", {w.at(C::equal, 1)}, false, l1);
    EXPECT_TRUE(accepts(w.A, lw({{"a", 1}})).accepted);
    EXPECT_FALSE(accepts(w.A, lw({{"a", Rational(1, 2)}})).accepted);
    EXPECT_FALSE(accepts(w.A, lw({{"c", 1}})).accepted);
    auto r = accepts(w.A, lw({{"a", 1}}));
    ASSERT_EQ(r.run.size(), 1u);
    EXPECT_EQ(r.run[0].time, 1);
}

TEST(Membership, RejectsNonMonotoneWords) {
    auto A = universal({{"a", 0}});
    EXPECT_THROW(accepts(A, lw({{"a", 2}, {"a", 1}})), PreconditionError);
}

TEST(Membership, AgreesWithRunEnumerationOnRandomAutomata) {
    Rng rng(7);
    int accepted = 0;
    for (int k = 0; k < 150; ++k) {
        auto A = random_automaton(rng, 4, 1 + static_cast<int>(rng() % 3), 8, 3, false);
        for (int j = 0; j < 6; ++j) {
            auto w = random_labeled_word(rng, 1 + static_cast<int>(rng() % 4), 4, 4);
            bool expected = oracle_run_value(A, w).has_value();
            ASSERT_EQ(accepts(A, w).accepted, expected);
            accepted += expected;
        }
    }
    EXPECT_GT(accepted, 50);
}

TEST(Membership, RegionEquivalentWordsAcceptedAlike) {
    Rng rng(9);
    for (int k = 0; k < 150; ++k) {
        auto A = random_automaton(rng, 3, 1 + static_cast<int>(rng() % 3), 7, 3, false);
        for (int j = 0; j < 5; ++j) {
            auto w = random_labeled_word(rng, 1 + static_cast<int>(rng() % 4), 8, 4);
            EXPECT_EQ(accepts(A, w).accepted, accepts(A, region_twin(w)).accepted);
            EXPECT_EQ(accepts(A, region_twin(w)).accepted, oracle_run_value(A, region_twin(w)).has_value());
        }
    }
}

TEST(Membership, SilentSwitchesAreTakenBetweenEvents) {
    SmallWta w;
    int l0 = w.loc("l0", 0), l1 = w.loc("l1", 0), l2 = w.loc("l2", 0, true);
    w.A.add_switch({l0, std::nullopt, ClockConstraint{{w.at(C::equal, 1)}}, {w.x}, l1, 0});
    w.edge(l1, "a", {w.at(C::equal, 1)}, false, l2);
    EXPECT_TRUE(accepts(w.A, lw({{"a", 2}})).accepted);
    EXPECT_FALSE(accepts(w.A, lw({{"a", 1}})).accepted);
    EXPECT_FALSE(accepts(w.A, lw({{"a", Rational(5, 2)}})).accepted);
}

// ── Emptiness ───────────────────────────────────────────────────────

TEST(Emptiness, HandExamples) {
    SmallWta start;
    start.loc("l0", 0, true);
    EXPECT_FALSE(emptiness(start.A).empty);

    SmallWta never;
    int l0 = never.loc("l0", 0), l1 = never.loc("l1", 0), l2 = never.loc("l2", 0, true);
    never.edge(l0, "a", {never.at(C::less, 1)}, false, l1);
    never.edge(l1, "b", {never.at(C::greater, 2), never.at(C::less, 2)}, false, l2);
    EXPECT_TRUE(emptiness(never.A).empty);

    SmallWta inconsistent;
    int m0 = inconsistent.loc("m0", 0), m1 = inconsistent.loc("m1", 0, true);
    inconsistent.edge(m0, "a", {inconsistent.at(C::less, 1), inconsistent.at(C::greater, 2)}, false, m1);
    EXPECT_TRUE(emptiness(inconsistent.A).empty);

    SmallWta late;
    int k0 = late.loc("k0", 0), k1 = late.loc("k1", 0, true);
    late.edge(k0, "a", {late.at(C::greater, Rational(7, 3))}, false, k1);
    auto r = emptiness(late.A);
    ASSERT_FALSE(r.empty);
    ASSERT_TRUE(r.witness);
    EXPECT_GT(r.witness->word.at(0).time, Rational(7, 3));
    EXPECT_TRUE(accepts(late.A, r.witness->word).accepted);
}

TEST(Emptiness, AgreesWithBoundedValuationSearch) {
    Rng rng(13);
    int nonempty = 0;
    for (int k = 0; k < 150; ++k) {
        int clocks = 1 + static_cast<int>(rng() % 2);
        auto A = random_automaton(rng, 4, clocks, 6, 2, false);
        A.set_accepting(A.initial(), false);
        auto r = emptiness(A);
        if (!r.empty) {
            ASSERT_TRUE(r.witness);
            EXPECT_TRUE(oracle_run_value(A, r.witness->word).has_value());
            ++nonempty;
        }
        // every word of length at most 3 with timestamps on a 1/(|X|+1) grid below maxconst + 1
        const long den = clocks + 1;
        bool found = false;
        std::function<void(LabeledWord&)> search = [&](LabeledWord& w) {
            if (found) return;
            if (!w.empty() && oracle_run_value(A, w)) {
                found = true;
                return;
            }
            if (w.size() == 3) return;
            Rational from = w.empty() ? Rational(0) : w.back().time;
            for (long t = to_int64(floor_of(from * Rational(den))); t <= 3 * den; ++t)
                for (const char* l : {"a", "b"}) {
                    w.push_back({{l, 0}, Rational(t, den)});
                    search(w);
                    w.pop_back();
                }
        };
        LabeledWord w;
        search(w);
        if (found) {
            EXPECT_FALSE(r.empty);
        }
    }
    EXPECT_GT(nonempty, 20);
}

// ── Weighted values ─────────────────────────────────────────────────

TEST(WeightedValues, DeterministicAndRejected) {
    SmallWta w;
    int l0 = w.loc("l0", 2), l1 = w.loc("l1", -1, true);
    w.edge(l0, "a", {w.at(C::greater_equal, 1)}, true, l1, 3);
    w.edge(l1, "b", {}, false, l1, -1);
    EXPECT_EQ(wta_value(w.A, lw({{"a", Rational(3, 2)}, {"b", 2}})), ExtendedValue(Rational(3) + 3 - Rational(1, 2) - 1));
    EXPECT_TRUE(wta_value(w.A, lw({{"a", Rational(1, 2)}})).is_positive_infinity());
}

TEST(WeightedValues, AgreeWithRunEnumeration) {
    Rng rng(19);
    for (int k = 0; k < 150; ++k) {
        auto A = random_automaton(rng, 4, 1 + static_cast<int>(rng() % 2), 9, 3, true);
        for (int j = 0; j < 5; ++j) {
            auto w = random_labeled_word(rng, 1 + static_cast<int>(rng() % 4), 4, 4);
            auto expected = oracle_run_value(A, w);
            auto got = wta_value(A, w);
            if (expected) {
                EXPECT_EQ(got, ExtendedValue(*expected));
            } else {
                EXPECT_TRUE(got.is_positive_infinity());
            }
        }
    }
}

TEST(WeightedValues, SampleAutomatonValue) {
    auto A = automaton_from_json(parse_json(read_text(std::string(TIRO_SAMPLES_DIR) + "/late_start.json"), "late_start.json"));
    auto doc = parse_timed_word(read_text(std::string(TIRO_SAMPLES_DIR) + "/late_word.tw"));
    EXPECT_EQ(wta_value(A, doc.word), ExtendedValue(2));
}

// ── Quantitative emptiness ──────────────────────────────────────────

TEST(QuantitativeEmptiness, ThresholdExamples) {
    SmallWta w;
    int l0 = w.loc("l0", 1), l1 = w.loc("l1", 0, true);
    w.edge(l0, "a", {w.at(C::greater_equal, 2)}, false, l1);
    EXPECT_TRUE(quantitative_emptiness(w.A, Rational(5, 2)).yes);
    EXPECT_FALSE(quantitative_emptiness(w.A, 2).yes);
    EXPECT_EQ(optimal_value(w.A).infimum, ExtendedValue(2));

    SmallWta zero;
    int z0 = zero.loc("z0", 0), z1 = zero.loc("z1", 0, true);
    zero.edge(z0, "b", {}, false, z1);
    EXPECT_TRUE(quantitative_emptiness(zero.A, Rational(1, 100)).yes);
    EXPECT_FALSE(quantitative_emptiness(zero.A, 0).yes);
}

TEST(QuantitativeEmptiness, AnalyticSuite) {
    for (auto& c : analytic_suite()) {
        SCOPED_TRACE(c.name);
        EXPECT_EQ(optimal_value(c.automaton).infimum, c.infimum);
        if (c.infimum.is_negative_infinity()) {
            for (Rational lambda : {Rational(-1000), Rational(-7), Rational(0), Rational(5)}) {
                auto q = quantitative_emptiness(c.automaton, lambda);
                ASSERT_TRUE(q.yes);
                ASSERT_TRUE(q.witness_value);
                EXPECT_LT(*q.witness_value, ExtendedValue(lambda));
            }
            continue;
        }
        const Rational inf = c.infimum.value();
        EXPECT_FALSE(quantitative_emptiness(c.automaton, inf).yes);
        EXPECT_FALSE(quantitative_emptiness(c.automaton, inf - Rational(1, 3)).yes);
        auto q = quantitative_emptiness(c.automaton, inf + Rational(1, 1000));
        ASSERT_TRUE(q.yes);
        ASSERT_TRUE(q.witness && q.witness_value);
        EXPECT_EQ(wta_value(c.automaton, q.witness->word), *q.witness_value);
        EXPECT_LT(*q.witness_value, ExtendedValue(inf + Rational(1, 1000)));
        if (!c.attained) {
            EXPECT_GT(*q.witness_value, c.infimum);
        }
    }
}

TEST(QuantitativeEmptiness, MonotoneAndWitnessesValidate) {
    Rng rng(21);
    for (int k = 0; k < 60; ++k) {
        auto A = random_automaton(rng, 4, 1, 7, 2, true);
        auto inf = optimal_value(A).infimum;
        bool previous = false;
        for (long l = -6; l <= 6; ++l) {
            auto q = quantitative_emptiness(A, Rational(l, 2));
            EXPECT_EQ(q.yes, inf < ExtendedValue(Rational(l, 2)));
            EXPECT_TRUE(!previous || q.yes);
            previous = q.yes;
            if (q.yes) {
                ASSERT_TRUE(q.witness_value);
                EXPECT_LT(*q.witness_value, ExtendedValue(Rational(l, 2)));
                auto direct = oracle_run_value(A, q.witness->word);
                ASSERT_TRUE(direct);
                EXPECT_EQ(ExtendedValue(*direct), *q.witness_value);
            }
        }
    }
}

TEST(QuantitativeEmptiness, ScaledConstantsAndWeights) {
    SmallWta w;
    int l0 = w.loc("l0", Rational(3, 2)), l1 = w.loc("l1", 0, true);
    w.edge(l0, "a", {w.at(C::greater_equal, Rational(2, 3))}, false, l1, Rational(1, 5));
    EXPECT_EQ(optimal_value(w.A).infimum, ExtendedValue(Rational(1) + Rational(1, 5)));
}

// ── Products ────────────────────────────────────────────────────────

TEST(Products, WeightsAddAndAcceptanceIsConjunctive) {
    SmallWta a, b;
    int a0 = a.loc("a0", 1), a1 = a.loc("a1", 0, true);
    a.edge(a0, "a", {a.at(C::greater_equal, 1)}, false, a1, 1);
    a.edge(a0, "b", {}, false, a0);
    a.edge(a1, "b", {}, false, a1);
    int b0 = b.loc("b0", 2, true), b1 = b.loc("b1", 0);
    b.edge(b0, "a", {b.at(C::less_equal, 2)}, false, b0, Rational(1, 2));
    b.edge(b0, "b", {}, false, b1);
    auto P = product(a.A, b.A);
    EXPECT_EQ(wta_value(P, lw({{"a", Rational(3, 2)}})), ExtendedValue(Rational(3, 2) * 3 + 1 + Rational(1, 2)));
    EXPECT_TRUE(wta_value(P, lw({{"a", Rational(5, 2)}})).is_positive_infinity());
    EXPECT_TRUE(wta_value(P, lw({{"a", 1}, {"b", 2}})).is_positive_infinity());
    EXPECT_THROW(product(a.A, universal({{"a", 0}})), PreconditionError);
}

TEST(Products, LiftSilenceAndEndMarker) {
    SmallWta a;
    int a0 = a.loc("a0", 1), a1 = a.loc("a1", 0, true);
    a.edge(a0, "a", {a.at(C::greater_equal, 1)}, false, a1);
    std::vector<Label> wide{{"a", 1}, {"c", 2}};
    auto L = lift(a.A, wide, [](const Label& l) -> std::optional<Label> {
        if (l.tag == 1) return Label{l.symbol, 0};
        return std::nullopt;
    });
    EXPECT_EQ(wta_value(L, lw({{"c:2", 0}, {"a:1", 2}, {"c:2", 3}})), ExtendedValue(2));
    auto S = silence(L, [](const Label& l) { return l.tag == 1; });
    EXPECT_TRUE(accepts(S, lw({{"c:2", 3}})).accepted);
    auto E = with_end_marker(a.A, {"$", 0});
    EXPECT_FALSE(accepts(E, lw({{"a", 1}})).accepted);
    EXPECT_TRUE(accepts(E, lw({{"a", 1}, {"$", 4}})).accepted);
    auto N = scale_weights(a.A, -2);
    EXPECT_EQ(wta_value(N, lw({{"a", 3}})), ExtendedValue(-6));
}

// ── Distance automata ───────────────────────────────────────────────

TEST(DistanceAutomata, ManhattanValueEqualsTimedManhattan) {
    Rng rng(47);
    Alphabet S("abc", {"a", "b", "c"});
    for (int k = 0; k < 200; ++k) {
        std::size_t size = 1 + rng() % 3;
        Alphabet sub("s", std::vector<Symbol>(S.symbols().begin(), S.symbols().begin() + size));
        DiffFunction d = random_diff(rng, sub, 1, 2);
        if (size == 3 && k % 4 == 0) d.set("a", "c", ExtendedValue::infinity());
        auto A = build_manhattan_wta(d);
        auto u = random_word(rng, sub, 6, 8, 3), v = random_word(rng, sub, 6, 8, 3);
        EXPECT_EQ(wta_value(A, labeled(disjoint_union(u, v))), timed_manhattan(u, v, d));
    }
}

TEST(DistanceAutomata, AccumulatedDelayValueEqualsMetric) {
    Rng rng(53);
    Alphabet S("abc", {"a", "b", "c"});
    const Rational lambda(1, 2), bound(1);
    auto A = build_accumulated_delay_wta(S, lambda, bound);
    for (int k = 0; k < 200; ++k) {
        auto [u, v] = in_scope_pair(rng, S, 5, lambda, bound, 4);
        EXPECT_EQ(wta_value(A, labeled(disjoint_union(u, v))), accumulated_delay(u, v));
    }
    auto u = TimedWord::from_pairs({{"a", 0}, {"b", 1}, {"a", 2}, {"a", 3}});
    auto v = TimedWord::from_pairs({{"a", 0}, {"b", Rational(6, 5)}, {"a", 2}, {"a", 3}});
    auto B = build_accumulated_delay_wta(Alphabet({"a", "b"}), lambda, lambda);
    EXPECT_EQ(wta_value(B, labeled(disjoint_union(u, v))), ExtendedValue(Rational(1, 5)));
    auto x = TimedWord::from_pairs({{"a", 0}, {"b", 1}, {"b", 3}});
    EXPECT_TRUE(wta_value(B, labeled(disjoint_union(u, x))).is_positive_infinity());
}

TEST(DistanceAutomata, SkorokhodValueBracketsTheMetric) {
    Alphabet ab({"a", "b"});
    DiffFunction d(ab);
    auto A = build_skorokhod_wta(d, Rational(1, 2), 2);
    auto u = TimedWord::from_pairs({{"a", 0}, {"b", 1}, {"b", 3}});
    auto v = TimedWord::from_pairs({{"a", 0}, {"b", 2}, {"b", 3}});
    EXPECT_EQ(wta_value(A, labeled(disjoint_union(u, v))), ExtendedValue(1));
    EXPECT_EQ(wta_value(A, labeled(disjoint_union(u, u))), ExtendedValue(0));
    EXPECT_THROW(build_skorokhod_wta(DiffFunction::equality(ab), 1, 1), PreconditionError);
}

// ── JSON models ─────────────────────────────────────────────────────

TEST(AutomatonJson, RoundTripPreservesValues) {
    Rng rng(59);
    for (int k = 0; k < 30; ++k) {
        auto A = random_automaton(rng, 3, 2, 6, 3, true);
        auto B = automaton_from_json(automaton_to_json(A));
        for (int j = 0; j < 5; ++j) {
            auto w = random_labeled_word(rng, 3, 4, 4);
            EXPECT_EQ(wta_value(A, w), wta_value(B, w));
        }
    }
}

TEST(AutomatonJson, ErrorsNameTheField) {
    try {
        automaton_from_json(parse_json(R"({"alphabet": ["a"], "locations": ["p"], "initial": "q"})", "m.json"), "m.json");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("m.json"), std::string::npos);
    }
    try {
        parse_json("{\n\"a\": [1,\n", "broken.json");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("broken.json:"), std::string::npos);
    }
}
