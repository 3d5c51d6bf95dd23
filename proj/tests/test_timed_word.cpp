#include "support.hpp"

#include <gtest/gtest.h>

using namespace tiro;
using namespace tiro::testing;

// ── Rationals ───────────────────────────────────────────────────────

TEST(Rationals, ParsesFractionsAndDecimals) {
    EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
    EXPECT_EQ(parse_rational("1.25"), Rational(5, 4));
    EXPECT_EQ(parse_rational("-2"), Rational(-2));
    EXPECT_EQ(parse_rational("6/8"), Rational(3, 4));
    EXPECT_THROW(parse_rational("1/0"), ParseError);
    EXPECT_THROW(parse_rational("abc"), ParseError);
    EXPECT_THROW(parse_rational(""), ParseError);
}

TEST(Rationals, FloorCeilAndFraction) {
    EXPECT_EQ(floor_of(Rational(-1, 2)), -1);
    EXPECT_EQ(ceil_of(Rational(-1, 2)), 0);
    EXPECT_EQ(floor_of(Rational(7, 3)), 2);
    EXPECT_EQ(frac_of(Rational(7, 3)), Rational(1, 3));
    EXPECT_EQ(frac_of(Rational(-1, 3)), Rational(2, 3));
}

TEST(ExtendedValues, ArithmeticAndOrder) {
    auto inf = ExtendedValue::infinity(), ninf = ExtendedValue::negative_infinity();
    EXPECT_TRUE((ExtendedValue(3) + inf).is_positive_infinity());
    EXPECT_TRUE((-inf).is_negative_infinity());
    EXPECT_LT(ninf, ExtendedValue(-1000));
    EXPECT_LT(ExtendedValue(Rational(1, 3)), ExtendedValue(Rational(1, 2)));
    EXPECT_EQ((Rational(2) * ExtendedValue(Rational(3, 4))), ExtendedValue(Rational(3, 2)));
    EXPECT_TRUE((Rational(-1) * inf).is_negative_infinity());
    EXPECT_EQ(parse_extended("inf"), inf);
    EXPECT_EQ(ExtendedValue(Rational(5, 2)).str(), "5/2");
}

// ── Timed words ─────────────────────────────────────────────────────

TEST(TimedWords, RejectsDecreasingAndNegativeTimes) {
    EXPECT_THROW(TimedWord::from_pairs({{"a", 1}, {"b", 0}}), PreconditionError);
    EXPECT_THROW(TimedWord::from_pairs({{"a", -1}}), PreconditionError);
    EXPECT_NO_THROW(TimedWord::from_pairs({{"a", 1}, {"b", 1}}));
}

TEST(TimedWords, ParsesTextWithAlphabetHeader) {
    auto doc = parse_timed_word("alphabet ab = {a, b}\na @ 0 // start\nb @ 1/2\n\nb @ 0.75\n");
    ASSERT_TRUE(doc.alphabet);
    EXPECT_EQ(doc.alphabet->size(), 2u);
    EXPECT_EQ(doc.word, TimedWord::from_pairs({{"a", 0}, {"b", Rational(1, 2)}, {"b", Rational(3, 4)}}));
    EXPECT_EQ(parse_timed_word(format_timed_word(doc.word)).word, doc.word);
}

TEST(TimedWords, ParseErrorsCarryLineNumbers) {
    try {
        parse_timed_word("a @ 1\nb @ 0\n", "w.tw");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("w.tw:2"), std::string::npos);
    }
    EXPECT_THROW(parse_timed_word("alphabet x = {a}\nb @ 0\n"), ParseError);
    EXPECT_THROW(parse_timed_word("a 0\n"), ParseError);
}

TEST(TimedWords, ReservedLetters) {
    EXPECT_THROW(Alphabet({"a", "#"}), PreconditionError);
    EXPECT_THROW(Alphabet({"ε"}), PreconditionError);
}

TEST(TimedWords, BitVectorAlphabetIsLexicographic) {
    auto a = bit_vector_alphabet(2);
    EXPECT_EQ(a.symbols(), (std::vector<Symbol>{"00", "01", "10", "11"}));
    EXPECT_EQ(a.name(), "bits2");
}

// ── Càdlàg view ─────────────────────────────────────────────────────

TEST(Cadlag, LastEventAtSharedTimeWins) {
    auto w = TimedWord::from_pairs({{"a", 0}, {"b", 1}, {"c", 1}, {"c", 2}, {"a", 3}});
    auto f = CadlagFunction::from_word(w);
    ASSERT_EQ(f.pieces().size(), 3u);
    EXPECT_EQ(f.value_at(Rational(1, 2)), "a");
    EXPECT_EQ(f.value_at(1), "c");
    EXPECT_EQ(f.value_at(3), "a");
    EXPECT_EQ(f.end(), 3);
    EXPECT_THROW(f.value_at(4), PreconditionError);
}

TEST(Cadlag, StutterFreeMatchesRawBreakpoints) {
    Rng rng(11);
    Alphabet S({"a", "b", "c"});
    for (int k = 0; k < 200; ++k) {
        auto w = random_word(rng, S, 7, 4, 3);
        auto f = CadlagFunction::from_word(w);
        auto raw = raw_breakpoints(w);
        ASSERT_EQ(f.pieces().size(), raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            EXPECT_EQ(f.pieces()[i].letter, raw[i].first);
            EXPECT_EQ(f.pieces()[i].start, raw[i].second);
        }
        for (long q = 0; q <= 12; ++q) {
            EXPECT_EQ(f.value_at(Rational(q, 4)), raw_value(w, Rational(q, 4)));
        }
        EXPECT_EQ(CadlagFunction::from_word(f.to_word()), f);
    }
}

TEST(DisjointUnion, OrdersByTimeThenTag) {
    auto u = TimedWord::from_pairs({{"a", 0}, {"b", 1}});
    auto v = TimedWord::from_pairs({{"c", 0}, {"d", Rational(1, 2)}, {"e", 1}});
    auto w = disjoint_union(u, v);
    std::vector<std::pair<Symbol, int>> order;
    for (auto& e : w.events()) order.push_back({e.letter, e.tag});
    EXPECT_EQ(order, (std::vector<std::pair<Symbol, int>>{{"a", 1}, {"c", 2}, {"d", 2}, {"b", 1}, {"e", 2}}));
    EXPECT_EQ(w.project(1), u);
    EXPECT_EQ(w.project(2), v);
}

TEST(DisjointUnion, ProjectionInvertsUnionOnRandomWords) {
    Rng rng(5);
    Alphabet S({"a", "b"});
    for (int k = 0; k < 100; ++k) {
        auto u = random_word(rng, S, 5, 8, 2), v = random_word(rng, S, 5, 8, 2), x = random_word(rng, S, 3, 2, 2);
        auto w = disjoint_union({u, v, x});
        EXPECT_EQ(w.project(1), u);
        EXPECT_EQ(w.project(2), v);
        EXPECT_EQ(w.project(3), x);
        for (std::size_t i = 1; i < w.size(); ++i) {
            EXPECT_LE(w.events()[i - 1].time, w.events()[i].time);
        }
    }
}

TEST(StepWords, RoundTripThroughStepFunctions) {
    Word w{"0", "0", "1", "1", "0"};
    auto f = step_function(w);
    EXPECT_EQ(f.end(), 5);
    EXPECT_EQ(f.pieces().size(), 3u);
    EXPECT_EQ(discrete_word(f), w);
    EXPECT_EQ(discrete_word(CadlagFunction::from_word(step_word(w))), w);
    EXPECT_THROW(step_function({}), PreconditionError);
}

TEST(Padding, ExtendsTheDomain) {
    auto w = TimedWord::from_pairs({{"a", 0}, {"b", 1}});
    auto p = pad_to(w, 3);
    EXPECT_EQ(p.end(), 3);
    EXPECT_EQ(CadlagFunction::from_word(p).value_at(2), "b");
    EXPECT_THROW(pad_to(w, Rational(1, 2)), PreconditionError);
}
