#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "linforms/topology.hpp"

using namespace linforms;

namespace {

std::vector<Topology> drain(TopologyStream s) {
    std::vector<Topology> out;
    while (auto t = s.next())
        out.push_back(std::move(t->second));
    return out;
}

std::set<std::string> texts(const std::vector<Topology>& ts) {
    std::set<std::string> out;
    for (const auto& t : ts)
        out.insert(t.to_text());
    return out;
}

BigRat eval_rat(const Polynomial& p, const std::vector<BigRat>& pt) {
    BigRat acc = 0;
    for (const auto& [mono, coeff] : p.terms()) {
        BigRat term = BigRat(coeff);
        for (const auto& [v, e] : mono.factors())
            for (unsigned r = 0; r < e; ++r)
                term *= pt[v];
        acc += term;
    }
    return acc;
}

BigRat rand_rat(std::mt19937_64& rng) {
    long p = 0;
    while (p == 0)
        p = static_cast<long>(rng() % 11) - 5;
    return make_rat(BigInt(p), BigInt(1 + static_cast<long>(rng() % 5)));
}

}  // namespace

TEST_CASE("text encoding round trip") {
    Topology t;
    t.n = 2;
    t.m = 2;
    t.steps = {{OperandRef::x(1), OperandRef::x(2)},
               {OperandRef::u(1), OperandRef::x(2)}};
    t.outputs = {OperandRef::u(2), OperandRef::u(1)};
    CHECK(t.to_text() == "u1<-(x1,x2);u2<-(u1,x2)|out:u2,u1");

    Topology back = Topology::parse_text(t.to_text(), 2);
    CHECK(back.to_text() == t.to_text());
    CHECK(back.m == 2);
    CHECK(back.step_count() == 2);

    Topology stepless = Topology::parse_text("|out:x1", 2);
    CHECK(stepless.step_count() == 0);
    CHECK(stepless.outputs == std::vector<OperandRef>{OperandRef::x(1)});

    CHECK_THROWS(Topology::parse_text("u1<-(x1,x2)", 2));
    CHECK_THROWS(Topology::parse_text("u2<-(x1,x2)|out:u1", 2));
    CHECK_THROWS(Topology::parse_text("u1<-(x1,x3)|out:u1", 2));
    CHECK_THROWS(Topology::parse_text("u1<-(x1,u1)|out:u1", 2));
    CHECK_THROWS(Topology::parse_text("|out:", 2));
}

TEST_CASE("raw enumeration counts") {
    CHECK(TopologyStream::raw_count(2, 1, 0) == 2);
    CHECK(TopologyStream::raw_count(2, 1, 1) == 12);
    CHECK(TopologyStream::raw_count(2, 2, 1) == 36);
    CHECK(TopologyStream::raw_count(2, 2, 2) == 576);

    CHECK(drain(TopologyStream(2, 1, 0, false)).size() == 2);
    CHECK(drain(TopologyStream(2, 1, 1, false)).size() == 12);
    CHECK(drain(TopologyStream(2, 2, 1, false)).size() == 36);

    auto all = drain(TopologyStream(2, 1, 1, false));
    CHECK(texts(all).size() == all.size());
    for (const auto& t : all)
        CHECK_NOTHROW(validate(t));
}

TEST_CASE("canonical mode prunes dead steps and reordered duplicates") {
    auto c10 = drain(TopologyStream(2, 1, 0));
    CHECK(c10.size() == 2);

    // With one step and one output, the step must feed the output.
    auto c11 = drain(TopologyStream(2, 1, 1));
    CHECK(c11.size() == 4);
    for (const auto& t : c11)
        CHECK(t.outputs[0] == OperandRef::u(1));

    auto c21 = drain(TopologyStream(2, 2, 1));
    CHECK(c21.size() == 20);

    // With a single output, two live steps must chain through u1.
    auto c12 = drain(TopologyStream(2, 1, 2));
    for (const auto& t : c12) {
        CHECK(t.outputs[0] == OperandRef::u(2));
        bool uses_u1 = t.steps[1].first == OperandRef::u(1) ||
                       t.steps[1].second == OperandRef::u(1);
        CHECK(uses_u1);
    }

    // Two independent steps both feeding outputs: only one ordering survives.
    auto c22 = texts(drain(TopologyStream(2, 2, 2)));
    CHECK(c22.count("u1<-(x1,x1);u2<-(x2,x2)|out:u1,u2") == 1);
    CHECK(c22.count("u1<-(x2,x2);u2<-(x1,x1)|out:u2,u1") == 0);

    // Canonical output is a subset of the raw stream.
    auto c12t = texts(c12);
    auto raw12 = texts(drain(TopologyStream(2, 1, 2, false)));
    for (const auto& s : c12t)
        CHECK(raw12.count(s) == 1);
    CHECK(c12t.size() < raw12.size());
}

TEST_CASE("seek partitions the stream deterministically") {
    std::uint64_t total = TopologyStream::raw_count(2, 2, 2);
    auto whole = drain(TopologyStream(2, 2, 2));

    TopologyStream first(2, 2, 2), second(2, 2, 2);
    second.seek(total / 2);
    std::vector<Topology> merged;
    while (auto t = first.next()) {
        if (t->first >= total / 2)
            break;
        merged.push_back(std::move(t->second));
    }
    while (auto t = second.next())
        merged.push_back(std::move(t->second));

    REQUIRE(merged.size() == whole.size());
    for (size_t i = 0; i < whole.size(); ++i)
        CHECK(merged[i].to_text() == whole[i].to_text());
}

TEST_CASE("count_parameters") {
    Topology t = Topology::parse_text("u1<-(x1,x2);u2<-(u1,x2);u3<-(u2,u1)|out:u3,u2", 2);
    CHECK(count_parameters(t) == 5);
    CHECK(count_parameters(Topology::parse_text("u1<-(x1,x2)|out:u1,x2", 2)) == 3);
    CHECK(count_parameters(Topology::parse_text("|out:x1", 2)) == 1);
}

TEST_CASE("parametrize, frozen entries") {
    {
        Topology t = Topology::parse_text("u1<-(x1,x2)|out:u1", 2);
        ParametrizedMatrix pm = parametrize(t);
        REQUIRE(pm.m == 1);
        REQUIRE(pm.n == 2);
        // arity 2: Y1 is x1, X1 is x2 in polynomial-variable terms
        CHECK(pm.rows[0][0].to_text() == "1*x1^1");
        CHECK(pm.rows[0][1].to_text() == "1*x1^1 x2^1");
    }
    {
        Topology t = Topology::parse_text("u1<-(x1,x2);u2<-(u1,x2)|out:u2", 2);
        ParametrizedMatrix pm = parametrize(t);
        // arity 3: Y1, X1, X2; entry (1,2) = Y1*X1 + Y1*X2
        CHECK(pm.rows[0][1].to_text() == "1*x1^1 x2^1 + 1*x1^1 x3^1");
        CHECK(pm.rows[0][0].to_text() == "1*x1^1");
    }
    {
        Topology t = Topology::parse_text("|out:x1", 2);
        ParametrizedMatrix pm = parametrize(t);
        CHECK(pm.rows[0][0].to_text() == "1*x1^1");
        CHECK(pm.rows[0][1].is_zero());
    }
}

TEST_CASE("parametrize agrees with concrete evaluation") {
    std::mt19937_64 rng(90125);
    int done = 0;
    while (done < 200) {
        unsigned n = 1 + static_cast<unsigned>(rng() % 3);
        unsigned m = 1 + static_cast<unsigned>(rng() % 2);
        unsigned C = static_cast<unsigned>(rng() % 4);
        std::uint64_t total = TopologyStream::raw_count(n, m, C);
        TopologyStream s(n, m, C, false);
        s.seek(rng() % total);
        auto got = s.next();
        if (!got)
            continue;
        Topology& t = got->second;
        ++done;

        std::vector<BigRat> point;  // Y_1..Y_m then X_1..X_C
        for (unsigned i = 0; i < m + C; ++i)
            point.push_back(rand_rat(rng));

        LinearAlgorithm alg;
        alg.n = n;
        for (unsigned i = 0; i < C; ++i)
            alg.steps.push_back(
                {BigRat(1), t.steps[i].first, point[m + i], t.steps[i].second});
        OutputSpec out;
        for (unsigned s2 = 0; s2 < m; ++s2)
            out.push_back({t.outputs[s2], point[s2]});

        auto concrete = eval_forms(alg, out);
        ParametrizedMatrix pm = parametrize(t);
        for (unsigned s2 = 0; s2 < m; ++s2)
            for (unsigned v = 0; v < n; ++v)
                CHECK(eval_rat(pm.rows[s2][v], point) == concrete[s2][v]);
    }
}

TEST_CASE("entry polynomials: height one, degree bounds, Y usage") {
    struct Cell {
        unsigned n, m, C;
    };
    for (Cell cell : {Cell{2, 1, 2}, Cell{2, 2, 2}, Cell{3, 2, 1}}) {
        TopologyStream s(cell.n, cell.m, cell.C);
        while (auto got = s.next()) {
            const Topology& t = got->second;
            ParametrizedMatrix pm = parametrize(t);
            for (unsigned r = 0; r < pm.m; ++r)
                for (unsigned v = 0; v < pm.n; ++v) {
                    const Polynomial& p = pm.rows[r][v];
                    CHECK(p.height() <= 1);
                    CHECK(p.degree() <= static_cast<int>(cell.C) + 1);
                    for (const auto& [mono, coeff] : p.terms()) {
                        CHECK(mono.exponent(r) == 1);
                        for (unsigned o = 0; o < pm.m; ++o)
                            if (o != r)
                                CHECK(mono.exponent(o) == 0);
                    }
                }
            // In the regime C < m(n-1), degrees stay within mn.
            if (cell.C < cell.m * (cell.n - 1))
                for (unsigned r = 0; r < pm.m; ++r)
                    for (unsigned v = 0; v < pm.n; ++v)
                        CHECK(pm.rows[r][v].degree() <=
                              static_cast<int>(cell.m * cell.n));
        }
    }
}

TEST_CASE("entry degree reaches step count plus one on k-chains") {
    Topology t = Topology::parse_text("u1<-(x1,x2);u2<-(x1,u1)|out:u2", 2);
    ParametrizedMatrix pm = parametrize(t);
    CHECK(pm.rows[0][1].degree() == 3);
    CHECK(pm.rows[0][1].to_text() == "1*x1^1 x2^1 x3^1");
}
