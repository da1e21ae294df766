#ifndef LINFORMS_POLYNOMIAL_HPP
#define LINFORMS_POLYNOMIAL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linforms/bigint.hpp"

namespace linforms {

/// Sparse exponent vector: (variable index, exponent) pairs, sorted by
/// variable index, exponents strictly positive. The empty monomial is 1.
class Monomial {
public:
    using Factor = std::pair<unsigned, unsigned>;  // (var, exp)

    Monomial() = default;
    explicit Monomial(std::vector<Factor> factors);

    static Monomial variable(unsigned var, unsigned exp = 1);

    unsigned exponent(unsigned var) const;
    unsigned total_degree() const { return degree_; }
    bool is_constant() const { return factors_.empty(); }
    const std::vector<Factor>& factors() const { return factors_; }
    unsigned max_var() const;  // largest variable index used; throws if constant

    Monomial operator*(const Monomial& other) const;
    bool operator==(const Monomial& other) const { return factors_ == other.factors_; }

    /// Graded lexicographic: total degree first, then lex with x1 > x2 > ...
    static int cmp_grlex(const Monomial& a, const Monomial& b);

private:
    std::vector<Factor> factors_;
    unsigned degree_ = 0;
};

struct MonomialGrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::cmp_grlex(a, b) < 0;
    }
};

/// Multivariate polynomial with exact integer coefficients over a fixed
/// number of variables. Terms are stored sparsely in graded-lex order;
/// zero coefficients are never stored, so the zero polynomial has an
/// empty term list. No operation rounds.
class Polynomial {
public:
    using TermMap = std::map<Monomial, BigInt, MonomialGrlexLess>;

    explicit Polynomial(unsigned arity) : arity_(arity) {}
    Polynomial(unsigned arity, TermMap terms);

    static Polynomial zero(unsigned arity) { return Polynomial(arity); }
    static Polynomial constant(unsigned arity, const BigInt& c);
    static Polynomial variable(unsigned arity, unsigned var);

    unsigned arity() const { return arity_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    /// Max total degree; -1 for the zero polynomial.
    int degree() const;
    /// Naive height: largest absolute coefficient. 0 for the zero polynomial.
    BigInt height() const;
    /// gcd of all coefficients (non-negative); 0 for the zero polynomial.
    BigInt content() const;

    BigInt coefficient(const Monomial& m) const;
    /// Graded-lex leading term; throws on the zero polynomial.
    std::pair<Monomial, BigInt> leading_term() const;

    bool is_univariate() const;  // uses at most one variable (any arity)

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    bool operator==(const Polynomial& other) const;

    Polynomial scaled(const BigInt& c) const;
    Polynomial pow(unsigned exp) const;
    /// Exact division by a common integer factor; throws if not exact.
    Polynomial divided_by(const BigInt& c) const;

    void add_term(const Monomial& m, const BigInt& c);

    /// Full evaluation; point.size() must equal arity.
    BigInt eval(const std::vector<BigInt>& point) const;
    /// Same value as eval(point) mod modulus; modulus >= 2.
    BigInt eval_mod(const std::vector<BigInt>& point, const BigInt& modulus) const;
    /// Binds variables x1..xk to prefix values; returns a polynomial in the
    /// remaining arity()-k variables, reindexed to start at x1.
    Polynomial eval_prefix(const std::vector<BigInt>& prefix) const;
    /// Substitutes args[i] for variable i; all args share one arity.
    Polynomial compose(const std::vector<Polynomial>& args) const;

    /// Canonical text: terms in descending graded-lex order, exact decimal
    /// coefficients, e.g. "2*x1^2 x3^1 + -1*x2^1 + 5". Zero prints "0".
    std::string to_text() const;
    static Polynomial parse_text(const std::string& text, unsigned arity);

private:
    void check_same_arity(const Polynomial& other) const;

    unsigned arity_;
    TermMap terms_;
};

/// H(f) + 1 for a nonzero polynomial in one variable. Every complex root of
/// f has absolute value strictly below the returned bound.
BigInt cauchy_root_bound(const Polynomial& f);

}  // namespace linforms

#endif
