#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "linforms/powerexpr.hpp"

using namespace linforms;

namespace {

PowerExpr pe(long v) { return PowerExpr::integer(v); }

bool lt(const PowerExpr& a, const PowerExpr& b) {
    return PowerExpr::cmp(a, b) == std::strong_ordering::less;
}
bool eq(const PowerExpr& a, const PowerExpr& b) {
    return PowerExpr::cmp(a, b) == std::strong_ordering::equal;
}
bool gt(const PowerExpr& a, const PowerExpr& b) {
    return PowerExpr::cmp(a, b) == std::strong_ordering::greater;
}

/// Random expression over small leaves, guaranteed expandable within the
/// oracle cap so cmp can be checked against exact integer comparison.
PowerExpr random_expr(std::mt19937_64& rng, int depth) {
    if (depth == 0 || rng() % 3 == 0)
        return PowerExpr::integer(1 + static_cast<long>(rng() % 9));
    switch (rng() % 3) {
        case 0: {
            std::vector<PowerExpr> kids;
            size_t n = 2 + rng() % 2;
            for (size_t i = 0; i < n; ++i)
                kids.push_back(random_expr(rng, depth - 1));
            return PowerExpr::mul(std::move(kids));
        }
        case 1: {
            std::vector<PowerExpr> kids;
            size_t n = 2 + rng() % 2;
            for (size_t i = 0; i < n; ++i)
                kids.push_back(random_expr(rng, depth - 1));
            return PowerExpr::add(std::move(kids));
        }
        default:
            return PowerExpr::pow(random_expr(rng, depth - 1),
                                  PowerExpr::integer(1 + static_cast<long>(rng() % 5)));
    }
}

}  // namespace

TEST_CASE("constructors and accessors") {
    PowerExpr a = pe(7);
    CHECK(a.kind() == PowerExpr::Kind::Int);
    CHECK(a.int_value() == 7);
    CHECK_THROWS(PowerExpr::integer(0));
    CHECK_THROWS(PowerExpr::integer(-3));

    PowerExpr p = PowerExpr::pow(pe(2), pe(10));
    CHECK(p.kind() == PowerExpr::Kind::Pow);
    CHECK(p.base().int_value() == 2);
    CHECK(p.exponent().int_value() == 10);

    PowerExpr m = PowerExpr::mul({pe(2), pe(3), pe(5)});
    CHECK(m.kind() == PowerExpr::Kind::Mul);
    CHECK(m.children().size() == 3);

    CHECK(PowerExpr::mul({pe(42)}).kind() == PowerExpr::Kind::Int);
    CHECK(PowerExpr::add({pe(42)}).kind() == PowerExpr::Kind::Int);
    CHECK_THROWS(pe(5).base());
    CHECK_THROWS(PowerExpr::mul({}));
}

TEST_CASE("normalized collapses power towers and trivial wrappers") {
    PowerExpr tower = PowerExpr::pow(PowerExpr::pow(pe(2), pe(3)), pe(5));
    PowerExpr want = PowerExpr::pow(pe(2), PowerExpr::mul({pe(3), pe(5)}));
    CHECK(tower.normalized().structurally_equal(want));

    PowerExpr triple =
        PowerExpr::pow(PowerExpr::pow(PowerExpr::pow(pe(7), pe(2)), pe(3)), pe(4));
    PowerExpr tn = triple.normalized();
    CHECK(tn.kind() == PowerExpr::Kind::Pow);
    CHECK(tn.base().int_value() == 7);

    CHECK(PowerExpr::pow(pe(9), pe(1)).normalized().structurally_equal(pe(9)));
    CHECK(PowerExpr::pow(pe(1), pe(5)).normalized().structurally_equal(pe(1)));

    PowerExpr nested_mul = PowerExpr::mul({pe(2), PowerExpr::mul({pe(3), pe(4)}), pe(1)});
    PowerExpr nm = nested_mul.normalized();
    CHECK(nm.kind() == PowerExpr::Kind::Mul);
    CHECK(nm.children().size() == 3);
    for (const PowerExpr& c : nm.children())
        CHECK(c.kind() == PowerExpr::Kind::Int);

    CHECK(PowerExpr::mul({pe(1), pe(1)}).normalized().structurally_equal(pe(1)));

    std::mt19937_64 rng(40317);
    for (int i = 0; i < 200; ++i) {
        PowerExpr e = random_expr(rng, 3);
        PowerExpr n1 = e.normalized();
        CHECK(n1.structurally_equal(n1.normalized()));
        auto v0 = e.to_bigint(100000);
        auto v1 = n1.to_bigint(100000);
        REQUIRE(v0.has_value());
        REQUIRE(v1.has_value());
        CHECK(*v0 == *v1);
    }
}

TEST_CASE("expansion, frozen values") {
    CHECK(*pe(7).to_bigint(10) == 7);
    CHECK(*PowerExpr::mul({pe(2), PowerExpr::pow(pe(3), pe(4))}).to_bigint(10) == 162);
    CHECK(*PowerExpr::pow(pe(2), pe(10)).to_bigint(4) == 1024);
    CHECK(*PowerExpr::pow(pe(2), PowerExpr::pow(pe(2), pe(5))).to_bigint(10) ==
          parse_bigint("4294967296"));
    CHECK(*PowerExpr::add({pe(1), PowerExpr::pow(pe(2), pe(10))}).to_bigint(5) == 1025);
    CHECK(*PowerExpr::pow(pe(3), pe(27)).to_bigint(13) == parse_bigint("7625597484987"));
}

TEST_CASE("expansion overflow signal is exact at the digit cap") {
    CHECK_FALSE(PowerExpr::pow(pe(2), pe(10)).to_bigint(3).has_value());
    CHECK(*PowerExpr::pow(pe(10), pe(6)).to_bigint(7) == parse_bigint("1000000"));
    CHECK_FALSE(PowerExpr::pow(pe(10), pe(6)).to_bigint(6).has_value());
    CHECK(*pe(999).to_bigint(3) == 999);
    CHECK_FALSE(pe(1000).to_bigint(3).has_value());

    CHECK_FALSE(PowerExpr::pow(pe(10), pe(100000)).to_bigint(10000).has_value());
    // Base 1 short-circuits even under an astronomical exponent.
    PowerExpr huge_exp = PowerExpr::pow(pe(10), PowerExpr::pow(pe(10), pe(18)));
    CHECK(*PowerExpr::pow(pe(1), huge_exp).to_bigint(5) == 1);

    CHECK_THROWS(pe(5).to_bigint(0));
}

TEST_CASE("render") {
    CHECK(pe(12).render() == "12");
    CHECK(PowerExpr::mul({pe(2), PowerExpr::pow(pe(3), pe(4))}).render() == "2 * 3^4");
    CHECK(PowerExpr::pow(PowerExpr::mul({pe(2), pe(4)}), pe(29)).render() == "(2 * 4)^29");
    CHECK(PowerExpr::add({pe(1), PowerExpr::pow(pe(2), pe(3))}).render() == "1 + 2^3");
    CHECK(PowerExpr::pow(pe(2), PowerExpr::add({pe(1), pe(4)})).render() == "2^(1 + 4)");
}

TEST_CASE("comparison on expandable values matches integer comparison") {
    CHECK(gt(PowerExpr::pow(pe(3), pe(27)), PowerExpr::pow(pe(2), pe(32))));
    CHECK(lt(PowerExpr::pow(pe(2), pe(32)), PowerExpr::pow(pe(3), pe(27))));
    CHECK(eq(PowerExpr::mul({pe(2), pe(81)}), pe(162)));

    std::mt19937_64 rng(660301);
    for (int i = 0; i < 300; ++i) {
        PowerExpr a = random_expr(rng, 3);
        PowerExpr b = random_expr(rng, 3);
        auto va = a.to_bigint(100000);
        auto vb = b.to_bigint(100000);
        REQUIRE(va.has_value());
        REQUIRE(vb.has_value());
        int want = cmp(*va, *vb);
        auto got = PowerExpr::cmp(a, b);
        if (want < 0)
            CHECK(got == std::strong_ordering::less);
        else if (want > 0)
            CHECK(got == std::strong_ordering::greater);
        else
            CHECK(got == std::strong_ordering::equal);
    }
}

TEST_CASE("equality through canonical prime powers, far beyond expansion") {
    // 8^(4^29) = 2^(3*4^29)
    PowerExpr lhs = PowerExpr::pow(pe(8), PowerExpr::pow(pe(4), pe(29)));
    PowerExpr rhs =
        PowerExpr::pow(pe(2), PowerExpr::mul({pe(3), PowerExpr::pow(pe(4), pe(29))}));
    CHECK(eq(lhs, rhs));

    // 2 * 4^E = 2^(2E+1) with E = 10^20
    PowerExpr e20 = PowerExpr::pow(pe(10), pe(20));
    PowerExpr a = PowerExpr::mul({pe(2), PowerExpr::pow(pe(4), e20)});
    PowerExpr b = PowerExpr::pow(
        pe(2), PowerExpr::add({PowerExpr::mul({pe(2), e20}), pe(1)}));
    CHECK(eq(a, b));

    // 12^E = 2^(2E) * 3^E
    PowerExpr e30 = PowerExpr::pow(pe(10), pe(30));
    PowerExpr c = PowerExpr::pow(pe(12), e30);
    PowerExpr d = PowerExpr::mul({PowerExpr::pow(pe(2), PowerExpr::mul({pe(2), e30})),
                                  PowerExpr::pow(pe(3), e30)});
    CHECK(eq(c, d));

    // X + X = 2X at a scale where the sum cannot be expanded
    PowerExpr x = PowerExpr::pow(pe(2), e30);
    CHECK(eq(PowerExpr::add({x, x}), PowerExpr::mul({pe(2), x})));
    CHECK(eq(PowerExpr::add({x, x}),
             PowerExpr::pow(pe(2), PowerExpr::add({e30, pe(1)}))));
}

TEST_CASE("strict comparison at astronomical scale") {
    PowerExpr e50 = PowerExpr::pow(pe(10), pe(50));
    CHECK(lt(PowerExpr::pow(pe(2), e50), PowerExpr::pow(pe(3), e50)));
    CHECK(gt(PowerExpr::pow(pe(2), PowerExpr::pow(pe(10), pe(51))),
             PowerExpr::pow(pe(3), e50)));

    // Same base, exponents differing by one: resolved via exponent expansion.
    PowerExpr e400 = PowerExpr::pow(pe(10), pe(400));
    CHECK(lt(PowerExpr::pow(pe(2), e400),
             PowerExpr::pow(pe(2), PowerExpr::add({e400, pe(1)}))));

    // Towers: 4^(4^256) vs 5^(4^256)
    PowerExpr t = PowerExpr::pow(pe(4), PowerExpr::pow(pe(4), pe(4)));
    CHECK(lt(PowerExpr::pow(pe(4), t), PowerExpr::pow(pe(5), t)));

    // 8^(2*8^64) < 16^(2*8^64)
    PowerExpr w = PowerExpr::mul({pe(2), PowerExpr::pow(pe(8), pe(64))});
    CHECK(lt(PowerExpr::pow(pe(8), w), PowerExpr::pow(pe(16), w)));

    // 2^X + 1 sits strictly between 2^X and 2*2^X
    PowerExpr big = PowerExpr::pow(pe(2), PowerExpr::pow(pe(10), pe(30)));
    PowerExpr mid = PowerExpr::add({big, pe(1)});
    CHECK(gt(mid, big));
    CHECK(lt(mid, PowerExpr::mul({pe(2), big})));
}

TEST_CASE("unfactorable leaves still compare by value") {
    // Product of two primes far beyond the factoring budget; exponents big
    // enough that the powers cannot be expanded either.
    BigInt p = parse_bigint("1000000000000000000000000000057");
    BigInt q = parse_bigint("10000000000000000000000000000000000000121");
    PowerExpr c = PowerExpr::integer(p * q);
    CHECK(eq(PowerExpr::pow(c, pe(1000)), PowerExpr::pow(c, pe(1000))));
    CHECK(lt(PowerExpr::pow(c, pe(1000)), PowerExpr::pow(c, pe(1001))));
    CHECK(eq(PowerExpr::mul({PowerExpr::pow(c, pe(999)), c}),
             PowerExpr::pow(c, pe(1000))));
}
