#include <gtest/gtest.h>

#include <cmath>

#include "edgerm/code.hpp"
#include "edgerm/library.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace edgerm;

namespace {

std::vector<Symbol> butterfly_messages(Symbol a, Symbol b) {
    // hand evaluation, instance edge order:
    // s1u1 s2u2 u1m u2m bottleneck u1t1 u2t2 nt1 nt2
    Symbol x = a ^ b;
    return {a, b, a, b, x, a, b, x, x};
}

NetworkInstance relay_chain() {
    NetworkInstance inst;
    inst.nodes = {"s", "a", "b", "t"};
    inst.edges = {{"e1", "s", "a", 5}, {"e2", "a", "b", 5}, {"e3", "b", "t", 5}};
    inst.sources = {{"s", 5}};
    inst.terminals = {"t"};
    inst.demands = {{1}};
    return inst;
}

NetworkCode relay_code() {
    NetworkCode c;
    c.source_alphabets = {5};
    for (const auto* id : {"e1", "e2", "e3"}) {
        c.edge_alphabets[id] = 5;
        c.encoders[id] = {0, 1, 2, 3, 4};
    }
    c.decoders["t"] = {{0}, {1}, {2}, {3}, {4}};
    return c;
}

FeasibilityTarget target(Rational eps, std::vector<std::uint64_t> card) { return {eps, std::move(card)}; }

}  // namespace

TEST(EvaluateGlobal, ButterflyXor) {
    auto b = butterfly();
    std::vector<Symbol> x{1, 0};
    auto msg = evaluate_global(b.instance, b.code, x);
    EXPECT_EQ(msg[b.instance.edge_index("bottleneck")], 1u);
    for (Symbol a = 0; a < 2; ++a)
        for (Symbol c = 0; c < 2; ++c) {
            std::vector<Symbol> y{a, c};
            EXPECT_EQ(evaluate_global(b.instance, b.code, y), butterfly_messages(a, c));
        }
}

TEST(EvaluateGlobal, RelayChainCarriesInput) {
    std::vector<Symbol> x{3};
    EXPECT_EQ(evaluate_global(relay_chain(), relay_code(), x), (std::vector<Symbol>{3, 3, 3}));
}

TEST(EvaluateGlobal, ConstantEncoders) {
    auto c = relay_code();
    for (auto& [id, t] : c.encoders) std::fill(t.begin(), t.end(), 2);
    for (Symbol v = 0; v < 5; ++v) {
        std::vector<Symbol> x{v};
        EXPECT_EQ(evaluate_global(relay_chain(), c, x), (std::vector<Symbol>{2, 2, 2}));
    }
}

TEST(EvaluateGlobal, MalformedTables) {
    auto c = relay_code();
    c.encoders["e2"].pop_back();
    std::vector<Symbol> x{0};
    EXPECT_THROW(evaluate_global(relay_chain(), c, x), MalformedError);
    c = relay_code();
    c.encoders.erase("e3");
    EXPECT_THROW(evaluate_global(relay_chain(), c, x), MalformedError);
    c = relay_code();
    c.encoders["e1"][0] = 9;
    EXPECT_THROW(evaluate_global(relay_chain(), c, x), MalformedError);
}

TEST(GlobalTable, ButterflyAllGood) {
    auto b = butterfly();
    auto t = build_global_table(b.instance, b.code);
    EXPECT_EQ(t.tuple_count(), 4u);
    EXPECT_EQ(t.bad_count, 0u);
    EXPECT_EQ(t.error(), Rational(0));
}

TEST(GlobalTable, ConstantDecoderThreeQuartersBad) {
    auto b = butterfly();
    for (auto& [t, rows] : b.code.decoders)
        for (auto& row : rows) row = {0, 0};
    auto t = build_global_table(b.instance, b.code);
    EXPECT_EQ(t.error(), Rational(3, 4));
    auto r = check_feasibility(b.instance, b.code, t, target(Rational(1), {2, 2}));
    for (const auto& te : r.terminals) {
        EXPECT_EQ(te.error, Rational(3, 4));
        ASSERT_TRUE(te.first_bad_tuple.has_value());
        EXPECT_EQ(*te.first_bad_tuple, 1u);
    }
    EXPECT_EQ(oracle::decode_all(b.instance, b.code).bad, 3u);
}

TEST(GlobalTable, ZeroEntropyInstance) {
    NetworkInstance inst;
    inst.nodes = {"s", "t"};
    inst.edges = {{"e", "s", "t", 1}};
    inst.sources = {{"s", 1}};
    inst.terminals = {"t"};
    inst.demands = {{1}};
    NetworkCode c;
    c.source_alphabets = {1};
    c.edge_alphabets["e"] = 1;
    c.encoders["e"] = {0};
    c.decoders["t"] = {{0}};
    auto t = build_global_table(inst, c);
    EXPECT_EQ(t.tuple_count(), 1u);
    EXPECT_EQ(t.bad_count, 0u);
}

TEST(GlobalTable, CapExceededIsResourceError) {
    auto b = butterfly4();
    EnumerationOptions opt;
    opt.cap = 15;
    EXPECT_THROW(build_global_table(b.instance, b.code, opt), ResourceError);
    opt.cap = 16;
    EXPECT_NO_THROW(build_global_table(b.instance, b.code, opt));
}

TEST(GlobalTable, ChainConsistencyAndOracleAgreement) {
    gen::Rng rng(31);
    for (int k = 0; k < 150; ++k) {
        auto b = gen::random_network(rng);
        auto t = build_global_table(b.instance, b.code);
        oracle::Evaluator ev(b.instance, b.code);
        std::uint64_t bad = 0;
        for (std::uint64_t x = 0; x < t.tuple_count(); ++x) {
            auto msg = ev.messages(oracle::digits(x, b.code.source_alphabets));
            for (std::size_t e = 0; e < msg.size(); ++e) ASSERT_EQ(t.edge_values[e][x], msg[e]);
            bad += t.good[x] == 0;
        }
        EXPECT_EQ(bad, t.bad_count);
        EXPECT_EQ(t.bad_count, oracle::decode_all(b.instance, b.code).bad);
    }
}

TEST(GlobalTable, ParallelAgreesBitExactly) {
    gen::Rng rng(32);
    for (int k = 0; k < 40; ++k) {
        auto b = gen::random_network(rng);
        EnumerationOptions one, four;
        four.workers = 4;
        auto a = build_global_table(b.instance, b.code, one);
        auto c = build_global_table(b.instance, b.code, four);
        EXPECT_EQ(a.edge_values, c.edge_values);
        EXPECT_EQ(a.good, c.good);
        EXPECT_EQ(a.terminal_bad, c.terminal_bad);
        EXPECT_EQ(a.terminal_first_bad, c.terminal_first_bad);
    }
}

TEST(GlobalTable, ErrorDecomposition) {
    gen::Rng rng(33);
    for (int k = 0; k < 150; ++k) {
        auto b = gen::random_network(rng);
        auto t = build_global_table(b.instance, b.code);
        std::uint64_t sum = 0;
        for (auto v : t.terminal_bad) sum += v;
        EXPECT_LE(t.bad_count, sum);
        for (auto v : t.terminal_bad) EXPECT_GE(t.bad_count, v);
    }
}

TEST(Feasibility, ZeroEpsilonMeansPerfect) {
    auto b = butterfly();
    auto r = check_feasibility(b.instance, b.code, target(Rational(0), {2, 2}));
    EXPECT_TRUE(r.verdict);
    EXPECT_TRUE(r.uniform_independent_sources);
    EXPECT_TRUE(r.deterministic_encoding);
}

TEST(Feasibility, RateShortfall) {
    auto b = butterfly();
    auto r = check_feasibility(b.instance, b.code,
                               target(Rational(1, 4), {cardinality_from_bits(2, 1), cardinality_from_bits(2, 1)}));
    EXPECT_TRUE(r.decoding_ok);
    EXPECT_FALSE(r.rates_ok);
    EXPECT_FALSE(r.verdict);
}

TEST(Feasibility, EpsilonOneVacuous) {
    auto b = butterfly();
    for (auto& [t, rows] : b.code.decoders)
        for (auto& row : rows) row = {1, 1};
    EXPECT_TRUE(check_feasibility(b.instance, b.code, target(Rational(1), {2, 2})).decoding_ok);
    EXPECT_FALSE(check_feasibility(b.instance, b.code, target(Rational(3, 4), {2, 2})).decoding_ok);
}

TEST(Feasibility, StrictInequality) {
    auto b = butterfly();
    // t1 wrong on exactly one tuple of four
    b.code.decoders["t1"][0] = {1, 1};
    auto t = build_global_table(b.instance, b.code);
    EXPECT_EQ(t.error(), Rational(1, 4));
    EXPECT_FALSE(check_feasibility(b.instance, b.code, t, target(Rational(1, 4), {2, 2})).decoding_ok);
    EXPECT_TRUE(check_feasibility(b.instance, b.code, t, target(Rational(1, 3), {2, 2})).decoding_ok);
}

TEST(Feasibility, CapacityViolation) {
    auto b = butterfly();
    b.instance.edges[b.instance.edge_index("bottleneck")].alphabet_size = 1;
    auto r = check_feasibility(b.instance, b.code, target(Rational(0), {2, 2}));
    EXPECT_FALSE(r.capacity_ok);
    EXPECT_FALSE(r.verdict);
}

TEST(Feasibility, AgreesWithOracle) {
    gen::Rng rng(34);
    const std::vector<std::pair<std::int64_t, std::int64_t>> eps{{0, 1}, {1, 8}, {1, 4}, {1, 2}, {1, 1}};
    for (int k = 0; k < 150; ++k) {
        auto b = gen::random_network(rng);
        for (auto [num, den] : eps) {
            auto r = check_feasibility(b.instance, b.code, target(Rational(num, den), b.code.source_alphabets));
            // per-terminal oracle
            oracle::Evaluator ev(b.instance, b.code);
            std::vector<std::uint64_t> bad(b.instance.terminals.size(), 0);
            std::uint64_t total = 1;
            for (auto a : b.code.source_alphabets) total *= a;
            for (std::uint64_t x = 0; x < total; ++x) {
                auto d = oracle::digits(x, b.code.source_alphabets);
                auto msg = ev.messages(d);
                for (std::size_t t = 0; t < bad.size(); ++t) {
                    const auto& row = b.code.decoders.at(b.instance.terminals[t])[ev.terminal_index(t, msg)];
                    std::size_t j = 0;
                    bool ok = true;
                    for (std::size_t s = 0; s < b.instance.sources.size(); ++s)
                        if (b.instance.demands[s][t]) ok = ok && row[j++] == d[s];
                    bad[t] += !ok;
                }
            }
            bool expect = true;
            for (auto v : bad) expect = expect && oracle::meets(v, total, num, den);
            ASSERT_EQ(r.decoding_ok, expect);
        }
    }
}

TEST(Entropy, Examples) {
    // uniform source of size 4
    NetworkInstance inst;
    inst.nodes = {"s1", "s2", "t"};
    inst.edges = {{"x", "s1", "t", 2}, {"y", "s2", "t", 2}};
    inst.sources = {{"s1", 2}, {"s2", 2}};
    inst.terminals = {"t"};
    inst.demands = {{1}, {0}};
    NetworkCode c;
    c.source_alphabets = {2, 2};
    c.edge_alphabets = {{"x", 2}, {"y", 2}};
    c.encoders["x"] = {0, 1};
    c.encoders["y"] = {0, 1};
    c.decoders["t"] = {{0}, {0}, {1}, {1}};
    auto t = build_global_table(inst, c);
    EXPECT_NEAR(joint_entropy(t, {{0}, {}}), 1.0, entropy_tolerance_bits);
    EXPECT_NEAR(joint_entropy(t, {{0, 1}, {}}), 2.0, entropy_tolerance_bits);
    EXPECT_EQ(joint_entropy(t, {{}, {}}), 0.0);

    // XOR of two bits on the butterfly bottleneck
    auto b = butterfly();
    auto bt = build_global_table(b.instance, b.code);
    auto e = b.instance.edge_index("bottleneck");
    EXPECT_NEAR(joint_entropy(bt, {{}, {e}}), 1.0, entropy_tolerance_bits);
    EXPECT_NEAR(joint_entropy(bt, {{0}, {e}}), 2.0, entropy_tolerance_bits);

    NetworkInstance one;
    one.nodes = {"s", "t"};
    one.edges = {{"e", "s", "t", 4}};
    one.sources = {{"s", 4}};
    one.terminals = {"t"};
    one.demands = {{1}};
    NetworkCode oc;
    oc.source_alphabets = {4};
    oc.edge_alphabets["e"] = 4;
    oc.encoders["e"] = {0, 1, 2, 3};
    oc.decoders["t"] = {{0}, {1}, {2}, {3}};
    EXPECT_NEAR(joint_entropy(build_global_table(one, oc), {{0}, {}}), 2.0, entropy_tolerance_bits);
}

TEST(Entropy, SourcesAreUniformAndIndependent) {
    gen::Rng rng(35);
    for (int k = 0; k < 100; ++k) {
        auto b = gen::random_network(rng);
        auto t = build_global_table(b.instance, b.code);
        VariableSet all;
        double expect = 0.0;
        for (std::size_t i = 0; i < b.code.source_alphabets.size(); ++i) {
            all.sources.push_back(i);
            expect += std::log2(static_cast<double>(b.code.source_alphabets[i]));
        }
        EXPECT_NEAR(joint_entropy(t, all), expect, 1e-9);
    }
}

TEST(Entropy, AgreesWithEmpiricalOracle) {
    gen::Rng rng(36);
    for (int k = 0; k < 100; ++k) {
        auto b = gen::random_network(rng);
        auto t = build_global_table(b.instance, b.code);
        VariableSet vs;
        for (std::size_t e = 0; e < t.edge_values.size(); ++e)
            if (gen::coin(rng)) vs.edges.push_back(e);
        if (gen::coin(rng)) vs.sources.push_back(0);
        std::vector<std::vector<Symbol>> keys(t.tuple_count());
        for (std::uint64_t x = 0; x < t.tuple_count(); ++x) {
            for (auto i : vs.sources) keys[x].push_back(t.source_symbol(x, i));
            for (auto e : vs.edges) keys[x].push_back(t.edge_values[e][x]);
        }
        EXPECT_NEAR(joint_entropy(t, vs), oracle::entropy_of(keys), 1e-9);
    }
}

TEST(Target, ErrorMeetsTargetConventions) {
    EXPECT_TRUE(error_meets_target(Rational(0), Rational(0)));
    EXPECT_FALSE(error_meets_target(Rational(1, 100), Rational(0)));
    EXPECT_FALSE(error_meets_target(Rational(1, 2), Rational(1, 2)));
    EXPECT_TRUE(error_meets_target(Rational(1, 3), Rational(1, 2)));
    EXPECT_TRUE(error_meets_target(Rational(1), Rational(1)));
}

TEST(Rational, FormatAndParse) {
    EXPECT_EQ(format_rational(Rational(1, 4)), "1/4");
    EXPECT_EQ(format_rational(Rational(0)), "0/1");
    EXPECT_EQ(parse_rational("2/8"), Rational(1, 4));
    EXPECT_EQ(parse_rational("1"), Rational(1));
    EXPECT_THROW(parse_rational("1/0"), MalformedError);
    EXPECT_THROW(parse_rational("x"), MalformedError);
}
