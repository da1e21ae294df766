#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "linforms/annihilator.hpp"
#include "linforms/topology.hpp"

using namespace linforms;

namespace {

Polynomial var_poly(unsigned arity, unsigned var) { return Polynomial::variable(arity, var); }

std::vector<BigInt> degs(std::initializer_list<long> xs) {
    std::vector<BigInt> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

Polynomial random_poly(std::mt19937_64& rng, unsigned arity, unsigned max_deg) {
    std::uniform_int_distribution<int> coeff(-2, 2);
    Polynomial p(arity);
    std::vector<unsigned> exps(arity, 0);
    // walk all exponent vectors with total degree <= max_deg
    while (true) {
        unsigned total = 0;
        for (unsigned e : exps) total += e;
        if (total <= max_deg) {
            BigInt c(coeff(rng));
            if (c != 0) {
                std::vector<Monomial::Factor> fs;
                for (unsigned v = 0; v < arity; ++v)
                    if (exps[v] > 0) fs.push_back({v, exps[v]});
                p.add_term(Monomial(fs), c);
            }
        }
        unsigned i = 0;
        while (i < arity && exps[i] == max_deg) exps[i++] = 0;
        if (i == arity) break;
        ++exps[i];
    }
    if (p.is_zero()) p = Polynomial::constant(arity, 1);
    return p;
}

const std::vector<Polynomial>& two_by_two_map() {
    static const std::vector<Polynomial> map = [] {
        Topology t = Topology::parse_text("u1<-(x1,x2)|out:u1,u1", 2);
        ParametrizedMatrix pm = parametrize(t);
        std::vector<Polynomial> flat;
        for (const auto& row : pm.rows)
            for (const auto& entry : row) flat.push_back(entry);
        return flat;
    }();
    return map;
}

}  // namespace

TEST_CASE("perron bound on frozen degree lists") {
    CHECK(perron_degree_bound(degs({1, 2})) == 2);
    CHECK(perron_degree_bound(degs({2, 2, 2})) == 4);
    CHECK(perron_degree_bound(degs({3, 4, 5})) == 20);
    CHECK(perron_degree_bound(degs({7})) == 1);
    for (long n = 2; n <= 6; ++n) {
        std::vector<BigInt> all_n(static_cast<std::size_t>(n), BigInt(n));
        CHECK(perron_degree_bound(all_n) == bigint_pow(BigInt(n), static_cast<unsigned long>(n - 1)));
    }
    CHECK_THROWS_AS(perron_degree_bound({}), std::invalid_argument);
    CHECK_THROWS_AS(perron_degree_bound(degs({2, 0})), std::invalid_argument);
    CHECK_THROWS_AS(perron_degree_bound(degs({-1})), std::invalid_argument);
}

TEST_CASE("height bound frozen values") {
    CHECK(height_bound(1, 1, 1, 1).to_bigint(50) == 3);
    // binom(3,2) = 3, so 1 + (3 * 2)^2
    CHECK(height_bound(1, 2, 1, 1).to_bigint(50) == 37);
    // binom(4,2) = 6, base 6 * 2^4 * 3^2 = 864
    CHECK(height_bound(2, 2, 2, 3).to_bigint(50) == 1 + bigint_pow(864, 5));
    CHECK_THROWS_AS(height_bound(0, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(height_bound(1, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("height bound is monotone in height and degree inputs") {
    PowerExpr a = height_bound(2, 3, 2, 5);
    PowerExpr b = height_bound(2, 3, 2, 6);
    CHECK(PowerExpr::cmp(a, b) < 0);
    PowerExpr c = height_bound(3, 3, 2, 5);
    CHECK(PowerExpr::cmp(a, c) < 0);
    PowerExpr d = height_bound(2, 3, 3, 5);
    CHECK(PowerExpr::cmp(a, d) < 0);
}

TEST_CASE("height bound against the square matrix regime") {
    // n polynomials of degree n and height 1, annihilator degree n^(n-1):
    // small cases stay below n^(2*n^(n^2)), the first case does not.
    auto raw = [](long n) {
        BigInt deg_p = bigint_pow(BigInt(n), static_cast<unsigned long>(n - 1));
        return height_bound(deg_p, BigInt(n), BigInt(n), 1);
    };
    auto limit = [](long n) {
        BigInt inner = bigint_pow(BigInt(n), static_cast<unsigned long>(n * n));
        return PowerExpr::pow(
            PowerExpr::integer(BigInt(n)),
            PowerExpr::mul({PowerExpr::integer(2), PowerExpr::integer(inner)}));
    };
    CHECK(raw(2).to_bigint(50) == BigInt("8153726977"));
    CHECK(limit(2).to_bigint(50) == BigInt("4294967296"));
    CHECK(PowerExpr::cmp(raw(2), limit(2)) > 0);
    CHECK(PowerExpr::cmp(raw(3), limit(3)) < 0);
    CHECK(PowerExpr::cmp(raw(4), limit(4)) < 0);
}

TEST_CASE("bound report for a concrete map") {
    std::vector<Polynomial> map = {var_poly(1, 0), var_poly(1, 0) * var_poly(1, 0)};
    BoundReport r = bound_report(map);
    CHECK(r.perron_degree == 2);
    CHECK(r.d_max == 2);
    CHECK(r.h_max == 1);
    CHECK(r.height_bound.to_bigint(50) == BigInt("8153726977"));
}

TEST_CASE("annihilator of x and x^2") {
    std::vector<Polynomial> map = {var_poly(1, 0), var_poly(1, 0) * var_poly(1, 0)};
    auto res = find_annihilator(map, 4);
    REQUIRE(res.has_value());
    CHECK(res->degree_used == 2);
    CHECK(res->perron_bound == 2);
    Polynomial expected = var_poly(2, 0) * var_poly(2, 0) - var_poly(2, 1);
    CHECK(res->annihilator == expected);
    CHECK(res->annihilator.to_text() == "1*x1^2 + -1*x2^1");
    CHECK(res->annihilator.compose(map).is_zero());

    CHECK_FALSE(find_annihilator(map, 1).has_value());
}

TEST_CASE("annihilator of the one-step square matrix is the determinant") {
    const std::vector<Polynomial>& map = two_by_two_map();
    REQUIRE(map.size() == 4);
    auto res = find_annihilator(map, 3);
    REQUIRE(res.has_value());
    CHECK(res->degree_used == 2);
    CHECK(res->annihilator.to_text() == "1*x1^1 x4^1 + -1*x2^1 x3^1");
    CHECK(res->annihilator.compose(map).is_zero());
}

TEST_CASE("independent variables admit no relation") {
    std::vector<Polynomial> map = {var_poly(2, 0), var_poly(2, 1)};
    CHECK_FALSE(find_annihilator(map, 4).has_value());
}

TEST_CASE("zero and constant entries give linear relations") {
    std::vector<Polynomial> with_zero = {var_poly(1, 0), Polynomial::zero(1)};
    auto res = find_annihilator(with_zero, 2);
    REQUIRE(res.has_value());
    CHECK(res->degree_used == 1);
    CHECK(res->annihilator.to_text() == "1*x2^1");

    std::vector<Polynomial> with_const = {Polynomial::constant(1, 5), var_poly(1, 0)};
    auto res2 = find_annihilator(with_const, 2);
    REQUIRE(res2.has_value());
    CHECK(res2->degree_used == 1);
    CHECK(res2->annihilator.to_text() == "1*x1^1 + -5");
}

TEST_CASE("kernel vectors are enumerated deterministically") {
    std::vector<Polynomial> map = {var_poly(1, 0), var_poly(1, 0), var_poly(1, 0)};
    std::vector<AnnihilatorResult> all = find_annihilators(map, 2, 3);
    REQUIRE(all.size() == 2);
    CHECK(all[0].annihilator.to_text() == "1*x1^1 + -1*x2^1");
    CHECK(all[1].annihilator.to_text() == "1*x1^1 + -1*x3^1");
    CHECK(all[0].degree_used == 1);
    CHECK(all[1].degree_used == 1);

    std::vector<Polynomial> pair_map = {var_poly(1, 0), var_poly(1, 0), var_poly(1, 0) * var_poly(1, 0)};
    std::vector<AnnihilatorResult> firsts = find_annihilators(pair_map, 3, 3);
    REQUIRE(firsts.size() == 1);
    CHECK(firsts[0].annihilator.to_text() == "1*x1^1 + -1*x2^1");
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(find_annihilators({}, 2, 1), std::invalid_argument);
    std::vector<Polynomial> mixed = {var_poly(1, 0), var_poly(2, 0)};
    CHECK_THROWS_AS(find_annihilators(mixed, 2, 1), std::invalid_argument);
    std::vector<Polynomial> ok = {var_poly(1, 0)};
    CHECK_THROWS_AS(find_annihilators(ok, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(find_annihilators(ok, 1, 0), std::invalid_argument);
}

TEST_CASE("random maps in fewer variables always have a relation within the perron cap") {
    std::mt19937_64 rng(52280301);
    for (int round = 0; round < 30; ++round) {
        std::vector<Polynomial> map;
        for (int k = 0; k < 3; ++k) map.push_back(random_poly(rng, 2, 2));
        BigInt perron = bound_report(map).perron_degree;
        auto res = find_annihilator(map, static_cast<unsigned>(to_ulong(perron)));
        REQUIRE(res.has_value());
        CHECK(BigInt(res->degree_used) <= perron);
        CHECK(res->annihilator.degree() == static_cast<int>(res->degree_used));
        CHECK(res->annihilator.content() == 1);
        CHECK(res->annihilator.leading_term().second > 0);
        CHECK(res->annihilator.compose(map).is_zero());

        auto again = find_annihilator(map, static_cast<unsigned>(to_ulong(perron)));
        REQUIRE(again.has_value());
        CHECK(again->annihilator == res->annihilator);
    }
}

TEST_CASE("matrix spec basics") {
    MatrixSpec spec = MatrixSpec::from_ints({{1, 2}, {3, 4}});
    CHECK(spec.m == 2);
    CHECK(spec.n == 2);
    CHECK(spec.all_explicit());
    std::vector<BigInt> flat = spec.flatten_explicit();
    REQUIRE(flat.size() == 4);
    CHECK(flat[0] == 1);
    CHECK(flat[1] == 2);
    CHECK(flat[2] == 3);
    CHECK(flat[3] == 4);
    CHECK_THROWS_AS(MatrixSpec::from_ints({{1, 2}, {3}}), std::invalid_argument);

    MatrixSpec sym;
    sym.m = 1;
    sym.n = 1;
    sym.entries = {{MatrixSpec::Entry(PowerExpr::integer(2))}};
    CHECK_FALSE(sym.all_explicit());
    CHECK_THROWS_AS(sym.flatten_explicit(), SymbolicEntriesError);
}

TEST_CASE("determinant evaluation on frozen matrices") {
    auto res = find_annihilator(two_by_two_map(), 2);
    REQUIRE(res.has_value());
    CHECK(evaluate_annihilator(*res, MatrixSpec::from_ints({{1, 1}, {1, 2}})) == 1);
    CHECK(evaluate_annihilator(*res, MatrixSpec::from_ints({{1, 1}, {2, 2}})) == 0);

    MatrixSpec sym;
    sym.m = 2;
    sym.n = 2;
    sym.entries = {{BigInt(1), BigInt(1)},
                   {BigInt(1), MatrixSpec::Entry(PowerExpr::integer(2))}};
    CHECK_THROWS_AS(evaluate_annihilator(*res, sym), SymbolicEntriesError);
    CHECK_THROWS_AS(evaluate_annihilator(*res, MatrixSpec::from_ints({{1, 2, 3}})),
                    std::invalid_argument);
}

TEST_CASE("determinant evaluation agrees with direct arithmetic") {
    auto res = find_annihilator(two_by_two_map(), 2);
    REQUIRE(res.has_value());
    std::mt19937_64 rng(91724001);
    std::uniform_int_distribution<long> entry(-50, 50);
    for (int round = 0; round < 100; ++round) {
        BigInt a(entry(rng)), b(entry(rng)), c(entry(rng)), d(entry(rng));
        BigInt got = evaluate_annihilator(*res, MatrixSpec::from_ints({{a, b}, {c, d}}));
        CHECK(got == a * d - b * c);
    }
    BigInt huge = bigint_pow(10, 50) + 7;
    CHECK(evaluate_annihilator(*res, MatrixSpec::from_ints({{huge, huge}, {huge, huge}})) == 0);
    CHECK(evaluate_annihilator(*res, MatrixSpec::from_ints({{huge, 0}, {0, huge}})) == huge * huge);
}
