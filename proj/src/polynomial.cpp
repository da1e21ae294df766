#include "linforms/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace linforms {

Monomial::Monomial(std::vector<Factor> factors) : factors_(std::move(factors)) {
    std::sort(factors_.begin(), factors_.end());
    std::vector<Factor> merged;
    for (const auto& [var, exp] : factors_) {
        if (exp == 0) continue;
        if (!merged.empty() && merged.back().first == var)
            merged.back().second += exp;
        else
            merged.emplace_back(var, exp);
    }
    factors_ = std::move(merged);
    degree_ = 0;
    for (const auto& [var, exp] : factors_) degree_ += exp;
}

Monomial Monomial::variable(unsigned var, unsigned exp) {
    return Monomial({{var, exp}});
}

unsigned Monomial::exponent(unsigned var) const {
    for (const auto& [v, e] : factors_)
        if (v == var) return e;
    return 0;
}

unsigned Monomial::max_var() const {
    if (factors_.empty()) throw std::logic_error("max_var of constant monomial");
    return factors_.back().first;
}

Monomial Monomial::operator*(const Monomial& other) const {
    std::vector<Factor> all = factors_;
    all.insert(all.end(), other.factors_.begin(), other.factors_.end());
    return Monomial(std::move(all));
}

int Monomial::cmp_grlex(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_ ? -1 : 1;
    // Same total degree: lex with x1 > x2 > ...; sorted sparse walk.
    auto ia = a.factors_.begin(), ib = b.factors_.begin();
    while (ia != a.factors_.end() && ib != b.factors_.end()) {
        if (ia->first != ib->first) {
            // The one holding the smaller variable index has positive
            // exponent where the other has zero: it is lex-greater.
            return ia->first < ib->first ? 1 : -1;
        }
        if (ia->second != ib->second) return ia->second > ib->second ? 1 : -1;
        ++ia, ++ib;
    }
    if (ia != a.factors_.end()) return 1;
    if (ib != b.factors_.end()) return -1;
    return 0;
}

Polynomial::Polynomial(unsigned arity, TermMap terms) : arity_(arity), terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0)
            it = terms_.erase(it);
        else {
            if (!it->first.is_constant() && it->first.max_var() >= arity_)
                throw std::invalid_argument("Polynomial: monomial variable beyond arity");
            ++it;
        }
    }
}

Polynomial Polynomial::constant(unsigned arity, const BigInt& c) {
    Polynomial p(arity);
    p.add_term(Monomial(), c);
    return p;
}

Polynomial Polynomial::variable(unsigned arity, unsigned var) {
    if (var >= arity) throw std::invalid_argument("Polynomial::variable: index beyond arity");
    Polynomial p(arity);
    p.add_term(Monomial::variable(var), 1);
    return p;
}

int Polynomial::degree() const {
    if (terms_.empty()) return -1;
    return static_cast<int>(terms_.rbegin()->first.total_degree());
}

BigInt Polynomial::height() const {
    BigInt h = 0;
    for (const auto& [m, c] : terms_) {
        BigInt a = bigint_abs(c);
        if (a > h) h = a;
    }
    return h;
}

BigInt Polynomial::content() const {
    BigInt g = 0;
    for (const auto& [m, c] : terms_) g = bigint_gcd(g, c);
    return g;
}

BigInt Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? BigInt(0) : it->second;
}

std::pair<Monomial, BigInt> Polynomial::leading_term() const {
    if (terms_.empty()) throw std::logic_error("leading_term of zero polynomial");
    auto it = terms_.rbegin();
    return {it->first, it->second};
}

bool Polynomial::is_univariate() const {
    int var = -1;
    for (const auto& [m, c] : terms_) {
        for (const auto& [v, e] : m.factors()) {
            if (var == -1) var = static_cast<int>(v);
            else if (var != static_cast<int>(v)) return false;
        }
    }
    return true;
}

void Polynomial::check_same_arity(const Polynomial& other) const {
    if (arity_ != other.arity_)
        throw std::invalid_argument("polynomial arity mismatch");
}

Polynomial Polynomial::operator-() const {
    Polynomial r(arity_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    check_same_arity(other);
    Polynomial r = *this;
    for (const auto& [m, c] : other.terms_) r.add_term(m, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    check_same_arity(other);
    Polynomial r = *this;
    for (const auto& [m, c] : other.terms_) r.add_term(m, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    check_same_arity(other);
    Polynomial r(arity_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : other.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

bool Polynomial::operator==(const Polynomial& other) const {
    return arity_ == other.arity_ && terms_ == other.terms_;
}

Polynomial Polynomial::scaled(const BigInt& c) const {
    Polynomial r(arity_);
    if (c == 0) return r;
    for (const auto& [m, coef] : terms_) r.terms_.emplace(m, coef * c);
    return r;
}

Polynomial Polynomial::pow(unsigned exp) const {
    Polynomial r = Polynomial::constant(arity_, 1);
    Polynomial base = *this;
    while (exp > 0) {
        if (exp & 1u) r = r * base;
        exp >>= 1u;
        if (exp > 0) base = base * base;
    }
    return r;
}

Polynomial Polynomial::divided_by(const BigInt& c) const {
    if (c == 0) throw std::invalid_argument("divided_by zero");
    Polynomial r(arity_);
    for (const auto& [m, coef] : terms_) {
        BigInt q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), coef.get_mpz_t(), c.get_mpz_t());
        if (rem != 0) throw std::invalid_argument("divided_by: non-exact division");
        r.terms_.emplace(m, q);
    }
    return r;
}

void Polynomial::add_term(const Monomial& m, const BigInt& c) {
    if (c == 0) return;
    if (!m.is_constant() && m.max_var() >= arity_)
        throw std::invalid_argument("add_term: monomial variable beyond arity");
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

namespace {

// Powers of each point coordinate, grown on demand.
class PowerCache {
public:
    explicit PowerCache(const std::vector<BigInt>& point) : point_(point) {
        cache_.resize(point.size());
    }
    const BigInt& get(unsigned var, unsigned exp) {
        auto& row = cache_[var];
        if (row.empty()) row.push_back(1);
        while (row.size() <= exp) row.push_back(row.back() * point_[var]);
        return row[exp];
    }

private:
    const std::vector<BigInt>& point_;
    std::vector<std::vector<BigInt>> cache_;
};

}  // namespace

BigInt Polynomial::eval(const std::vector<BigInt>& point) const {
    if (point.size() != arity_)
        throw std::invalid_argument("eval: point length does not match arity");
    PowerCache powers(point);
    BigInt sum = 0;
    for (const auto& [m, c] : terms_) {
        BigInt t = c;
        for (const auto& [v, e] : m.factors()) t *= powers.get(v, e);
        sum += t;
    }
    return sum;
}

BigInt Polynomial::eval_mod(const std::vector<BigInt>& point, const BigInt& modulus) const {
    if (modulus < 2) throw std::invalid_argument("eval_mod: modulus must be >= 2");
    if (point.size() != arity_)
        throw std::invalid_argument("eval_mod: point length does not match arity");
    std::vector<BigInt> reduced;
    reduced.reserve(point.size());
    for (const auto& v : point) reduced.push_back(bigint_mod(v, modulus));
    PowerCache powers(reduced);
    BigInt sum = 0;
    for (const auto& [m, c] : terms_) {
        BigInt t = bigint_mod(c, modulus);
        for (const auto& [v, e] : m.factors()) t = bigint_mod(t * powers.get(v, e), modulus);
        sum = bigint_mod(sum + t, modulus);
    }
    return sum;
}

Polynomial Polynomial::eval_prefix(const std::vector<BigInt>& prefix) const {
    const unsigned k = static_cast<unsigned>(prefix.size());
    if (k > arity_) throw std::invalid_argument("eval_prefix: prefix longer than arity");
    PowerCache powers(prefix);
    Polynomial r(arity_ - k);
    for (const auto& [m, c] : terms_) {
        BigInt coef = c;
        std::vector<Monomial::Factor> rest;
        for (const auto& [v, e] : m.factors()) {
            if (v < k)
                coef *= powers.get(v, e);
            else
                rest.emplace_back(v - k, e);
        }
        r.add_term(Monomial(std::move(rest)), coef);
    }
    return r;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& args) const {
    if (args.size() != arity_)
        throw std::invalid_argument("compose: argument count does not match arity");
    unsigned target_arity = args.empty() ? 0 : args[0].arity();
    for (const auto& a : args)
        if (a.arity() != target_arity)
            throw std::invalid_argument("compose: arguments of mixed arity");

    std::vector<std::vector<Polynomial>> powers(args.size());
    auto arg_power = [&](unsigned var, unsigned exp) -> const Polynomial& {
        auto& row = powers[var];
        if (row.empty()) row.push_back(Polynomial::constant(target_arity, 1));
        while (row.size() <= exp) row.push_back(row.back() * args[var]);
        return row[exp];
    };

    Polynomial r(target_arity);
    for (const auto& [m, c] : terms_) {
        Polynomial t = Polynomial::constant(target_arity, c);
        for (const auto& [v, e] : m.factors()) t = t * arg_power(v, e);
        r = r + t;
    }
    return r;
}

std::string Polynomial::to_text() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) out << " + ";
        first = false;
        out << it->second.get_str();
        if (!it->first.is_constant()) {
            out << "*";
            bool first_factor = true;
            for (const auto& [v, e] : it->first.factors()) {
                if (!first_factor) out << " ";
                first_factor = false;
                out << "x" << (v + 1) << "^" << e;
            }
        }
    }
    return out.str();
}

namespace {

void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

unsigned long parse_uint(const std::string& s, std::size_t& i, const char* what) {
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw std::invalid_argument(std::string("polynomial parse: expected ") + what);
    return std::stoul(s.substr(start, i - start));
}

}  // namespace

Polynomial Polynomial::parse_text(const std::string& text, unsigned arity) {
    Polynomial p(arity);
    std::size_t i = 0;
    skip_ws(text, i);
    if (i < text.size() && text.compare(i, 1, "0") == 0 && i + 1 == text.size()) return p;
    bool expect_term = true;
    while (i < text.size()) {
        if (!expect_term) {
            skip_ws(text, i);
            if (i >= text.size()) break;
            if (text[i] != '+') throw std::invalid_argument("polynomial parse: expected '+'");
            ++i;
        }
        expect_term = false;
        skip_ws(text, i);
        std::size_t start = i;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
            throw std::invalid_argument("polynomial parse: expected coefficient");
        BigInt coef = parse_bigint(text.substr(start, i - start));
        std::vector<Monomial::Factor> factors;
        skip_ws(text, i);
        if (i < text.size() && text[i] == '*') {
            ++i;
            while (true) {
                skip_ws(text, i);
                if (i >= text.size() || text[i] != 'x') break;
                ++i;
                unsigned long var = parse_uint(text, i, "variable index");
                if (var == 0 || var > arity)
                    throw std::invalid_argument("polynomial parse: variable index out of range");
                if (i >= text.size() || text[i] != '^')
                    throw std::invalid_argument("polynomial parse: expected '^'");
                ++i;
                unsigned long exp = parse_uint(text, i, "exponent");
                factors.emplace_back(static_cast<unsigned>(var - 1), static_cast<unsigned>(exp));
            }
        }
        p.add_term(Monomial(std::move(factors)), coef);
        skip_ws(text, i);
    }
    return p;
}

BigInt cauchy_root_bound(const Polynomial& f) {
    if (f.is_zero()) throw std::invalid_argument("cauchy_root_bound: zero polynomial");
    if (!f.is_univariate())
        throw std::invalid_argument("cauchy_root_bound: polynomial uses several variables");
    return f.height() + 1;
}

}  // namespace linforms
