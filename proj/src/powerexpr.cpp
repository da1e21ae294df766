#include "linforms/powerexpr.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>

namespace linforms {

struct PowerExpr::Node {
    Kind kind;
    BigInt value;                    // Kind::Int
    std::vector<PowerExpr> kids;     // Mul/Add children, or {base, exp} for Pow
};

struct PowerExprDetail {
    static PowerExpr make(PowerExpr::Node node) {
        return PowerExpr(std::make_shared<const PowerExpr::Node>(std::move(node)));
    }
};

namespace {

PowerExpr wrap(PowerExpr::Node node) { return PowerExprDetail::make(std::move(node)); }

}  // namespace

PowerExpr PowerExpr::integer(BigInt v) {
    if (v < 1)
        throw std::invalid_argument("PowerExpr::integer: value must be >= 1");
    Node n;
    n.kind = Kind::Int;
    n.value = std::move(v);
    return wrap(std::move(n));
}

PowerExpr PowerExpr::mul(std::vector<PowerExpr> children) {
    if (children.empty())
        throw std::invalid_argument("PowerExpr::mul: needs at least one factor");
    if (children.size() == 1)
        return children.front();
    Node n;
    n.kind = Kind::Mul;
    n.kids = std::move(children);
    return wrap(std::move(n));
}

PowerExpr PowerExpr::pow(PowerExpr base, PowerExpr exp) {
    Node n;
    n.kind = Kind::Pow;
    n.kids.push_back(std::move(base));
    n.kids.push_back(std::move(exp));
    return wrap(std::move(n));
}

PowerExpr PowerExpr::add(std::vector<PowerExpr> children) {
    if (children.empty())
        throw std::invalid_argument("PowerExpr::add: needs at least one addend");
    if (children.size() == 1)
        return children.front();
    Node n;
    n.kind = Kind::Add;
    n.kids = std::move(children);
    return wrap(std::move(n));
}

PowerExpr::Kind PowerExpr::kind() const { return node_->kind; }

const BigInt& PowerExpr::int_value() const {
    if (node_->kind != Kind::Int)
        throw std::logic_error("PowerExpr::int_value: not an integer leaf");
    return node_->value;
}

const std::vector<PowerExpr>& PowerExpr::children() const {
    if (node_->kind != Kind::Mul && node_->kind != Kind::Add)
        throw std::logic_error("PowerExpr::children: not a mul/add node");
    return node_->kids;
}

const PowerExpr& PowerExpr::base() const {
    if (node_->kind != Kind::Pow)
        throw std::logic_error("PowerExpr::base: not a pow node");
    return node_->kids[0];
}

const PowerExpr& PowerExpr::exponent() const {
    if (node_->kind != Kind::Pow)
        throw std::logic_error("PowerExpr::exponent: not a pow node");
    return node_->kids[1];
}

bool PowerExpr::structurally_equal(const PowerExpr& other) const {
    const Node& a = *node_;
    const Node& b = *other.node_;
    if (node_ == other.node_)
        return true;
    if (a.kind != b.kind)
        return false;
    if (a.kind == Kind::Int)
        return a.value == b.value;
    if (a.kids.size() != b.kids.size())
        return false;
    for (size_t i = 0; i < a.kids.size(); ++i)
        if (!a.kids[i].structurally_equal(b.kids[i]))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// normalized()

PowerExpr PowerExpr::normalized() const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::Int:
            return *this;
        case Kind::Mul: {
            std::vector<PowerExpr> flat;
            for (const PowerExpr& c : n.kids) {
                PowerExpr nc = c.normalized();
                if (nc.kind() == Kind::Mul) {
                    for (const PowerExpr& g : nc.children())
                        flat.push_back(g);
                } else if (nc.kind() == Kind::Int && nc.int_value() == 1) {
                    continue;
                } else {
                    flat.push_back(std::move(nc));
                }
            }
            if (flat.empty())
                return integer(1);
            return mul(std::move(flat));
        }
        case Kind::Add: {
            std::vector<PowerExpr> flat;
            for (const PowerExpr& c : n.kids) {
                PowerExpr nc = c.normalized();
                if (nc.kind() == Kind::Add) {
                    for (const PowerExpr& g : nc.children())
                        flat.push_back(g);
                } else {
                    flat.push_back(std::move(nc));
                }
            }
            return add(std::move(flat));
        }
        case Kind::Pow: {
            PowerExpr b = n.kids[0].normalized();
            PowerExpr e = n.kids[1].normalized();
            while (b.kind() == Kind::Pow) {
                e = mul({b.exponent(), e}).normalized();
                b = b.base();
            }
            if (b.kind() == Kind::Int && b.int_value() == 1)
                return integer(1);
            if (e.kind() == Kind::Int && e.int_value() == 1)
                return b;
            return pow(std::move(b), std::move(e));
        }
    }
    throw std::logic_error("PowerExpr::normalized: bad node kind");
}

// ---------------------------------------------------------------------------
// render()

namespace {

// Precedence: Add(0) < Mul(1) < Pow(2) < Int(3).
int render_prec(PowerExpr::Kind k) {
    switch (k) {
        case PowerExpr::Kind::Add: return 0;
        case PowerExpr::Kind::Mul: return 1;
        case PowerExpr::Kind::Pow: return 2;
        case PowerExpr::Kind::Int: return 3;
    }
    return 3;
}

void render_rec(const PowerExpr& e, int outer_prec, std::string& out) {
    int p = render_prec(e.kind());
    bool parens = p < outer_prec;
    if (parens)
        out += '(';
    switch (e.kind()) {
        case PowerExpr::Kind::Int:
            out += e.int_value().get_str();
            break;
        case PowerExpr::Kind::Mul: {
            bool first = true;
            for (const PowerExpr& c : e.children()) {
                if (!first)
                    out += " * ";
                first = false;
                render_rec(c, p + 1, out);
            }
            break;
        }
        case PowerExpr::Kind::Add: {
            bool first = true;
            for (const PowerExpr& c : e.children()) {
                if (!first)
                    out += " + ";
                first = false;
                render_rec(c, p + 1, out);
            }
            break;
        }
        case PowerExpr::Kind::Pow:
            render_rec(e.base(), p + 1, out);
            out += '^';
            render_rec(e.exponent(), p + 1, out);
            break;
    }
    if (parens)
        out += ')';
}

}  // namespace

std::string PowerExpr::render() const {
    std::string out;
    render_rec(*this, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Guarded exact expansion.
//
// Expands a subtree to a BigInt iff the value fits within a digit budget.
// The guard works in bits with a 2x slack factor, so a value that truly fits
// is never misreported as overflowing; the exact digit count is checked at
// the end.

namespace {

constexpr double kBitsPerDigit = 3.3219280948873623;

struct ExpandGuard {
    unsigned long max_bits;  // hard ceiling on intermediate sizes
};

bool bits_ok(const BigInt& v, const ExpandGuard& g) {
    return mpz_sizeinbase(v.get_mpz_t(), 2) <= g.max_bits;
}

std::optional<BigInt> expand_rec(const PowerExpr& e, const ExpandGuard& g) {
    switch (e.kind()) {
        case PowerExpr::Kind::Int: {
            const BigInt& v = e.int_value();
            if (!bits_ok(v, g))
                return std::nullopt;
            return v;
        }
        case PowerExpr::Kind::Mul: {
            BigInt acc = 1;
            for (const PowerExpr& c : e.children()) {
                auto cv = expand_rec(c, g);
                if (!cv)
                    return std::nullopt;
                acc *= *cv;
                if (!bits_ok(acc, g))
                    return std::nullopt;
            }
            return acc;
        }
        case PowerExpr::Kind::Add: {
            BigInt acc = 0;
            for (const PowerExpr& c : e.children()) {
                auto cv = expand_rec(c, g);
                if (!cv)
                    return std::nullopt;
                acc += *cv;
                if (!bits_ok(acc, g))
                    return std::nullopt;
            }
            return acc;
        }
        case PowerExpr::Kind::Pow: {
            auto bv = expand_rec(e.base(), g);
            if (!bv)
                return std::nullopt;
            if (*bv == 1)
                return BigInt(1);
            auto ev = expand_rec(e.exponent(), g);
            if (!ev)
                return std::nullopt;
            if (!fits_ulong(*ev))
                return std::nullopt;  // base >= 2, so the result is astronomically large
            unsigned long exp = to_ulong(*ev);
            // bits(b^e) <= e * bits(b); cheap pre-check before computing.
            unsigned long bbits = mpz_sizeinbase(bv->get_mpz_t(), 2);
            if (exp > 0 && bbits > g.max_bits / exp)
                return std::nullopt;
            BigInt r;
            mpz_pow_ui(r.get_mpz_t(), bv->get_mpz_t(), exp);
            if (!bits_ok(r, g))
                return std::nullopt;
            return r;
        }
    }
    throw std::logic_error("PowerExpr expand: bad node kind");
}

/// Exact value if it has at most digit_cap decimal digits, else nullopt.
std::optional<BigInt> expand_within(const PowerExpr& e, unsigned long digit_cap) {
    ExpandGuard g;
    double want = static_cast<double>(digit_cap) * kBitsPerDigit * 2.0 + 64.0;
    g.max_bits = want > 1e15 ? static_cast<unsigned long>(1e15)
                             : static_cast<unsigned long>(want);
    auto v = expand_rec(e, g);
    if (!v)
        return std::nullopt;
    // Guard has 2x slack; confirm the true digit count.
    if (mpz_sizeinbase(v->get_mpz_t(), 10) > digit_cap) {
        // sizeinbase(10) may overestimate by one digit.
        BigInt lim;
        mpz_ui_pow_ui(lim.get_mpz_t(), 10, digit_cap);
        if (*v >= lim)
            return std::nullopt;
    }
    return v;
}

}  // namespace

std::optional<BigInt> PowerExpr::to_bigint(unsigned long digit_cap) const {
    if (digit_cap == 0)
        throw std::invalid_argument("PowerExpr::to_bigint: digit_cap must be positive");
    return expand_within(*this, digit_cap);
}

// ---------------------------------------------------------------------------
// Factoring integer leaves into primes (for the canonical form).

namespace {

struct FactorPart {
    BigInt base;
    unsigned long mult;
    bool prime;  // false = opaque cofactor the budgeted search could not split
};

BigInt pollard_rho(const BigInt& n, unsigned long seed_c, unsigned long budget) {
    // Brent's cycle variant; returns a nontrivial factor or 0 on budget out.
    BigInt x = 2, y = 2, d = 1, diff, c = seed_c;
    unsigned long steps = 0;
    auto step = [&](BigInt& v) {
        v = (v * v + c) % n;
    };
    while (d == 1) {
        if (++steps > budget)
            return BigInt(0);
        step(x);
        step(y);
        step(y);
        diff = x > y ? x - y : y - x;
        if (diff == 0)
            return BigInt(0);
        d = bigint_gcd(diff, n);
    }
    if (d == n)
        return BigInt(0);
    return d;
}

void factor_into(const BigInt& n, std::vector<FactorPart>& out);

void factor_split(const BigInt& n, std::vector<FactorPart>& out) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 32) > 0) {
        out.push_back({n, 1, true});
        return;
    }
    // Perfect powers first: mpz_perfect_power_p plus root extraction.
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long k = 2; k <= mpz_sizeinbase(n.get_mpz_t(), 2); ++k) {
            BigInt root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k)) {
                std::vector<FactorPart> sub;
                factor_into(root, sub);
                for (auto& p : sub) {
                    p.mult *= k;
                    out.push_back(std::move(p));
                }
                return;
            }
        }
    }
    for (unsigned long c = 1; c <= 4; ++c) {
        BigInt d = pollard_rho(n, c, 150000);
        if (d != 0) {
            factor_into(d, out);
            factor_into(n / d, out);
            return;
        }
    }
    out.push_back({n, 1, false});
}

void factor_into(const BigInt& n, std::vector<FactorPart>& out) {
    BigInt rem = n;
    unsigned long m2 = 0;
    while (mpz_even_p(rem.get_mpz_t())) {
        rem /= 2;
        ++m2;
    }
    if (m2 > 0)
        out.push_back({BigInt(2), m2, true});
    for (unsigned long d = 3; d < 100000 && rem > 1; d += 2) {
        if (d * d > rem)
            break;
        if (mpz_divisible_ui_p(rem.get_mpz_t(), d)) {
            unsigned long m = 0;
            while (mpz_divisible_ui_p(rem.get_mpz_t(), d)) {
                mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), d);
                ++m;
            }
            out.push_back({BigInt(static_cast<long>(d)), m, true});
        }
    }
    if (rem > 1)
        factor_split(rem, out);
}

/// n >= 2. Merges repeated bases; sorted by base. Memoized: the budgeted
/// search can be slow on hard leaves, and canonization revisits leaves often.
std::vector<FactorPart> factor_leaf(const BigInt& n) {
    static std::mutex mu;
    static std::map<BigInt, std::vector<FactorPart>> cache;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(n);
        if (it != cache.end())
            return it->second;
    }
    std::vector<FactorPart> raw;
    factor_into(n, raw);
    std::map<BigInt, std::pair<unsigned long, bool>> merged;
    for (const auto& p : raw) {
        auto [it, fresh] = merged.try_emplace(p.base, std::make_pair(0ul, p.prime));
        it->second.first += p.mult;
        it->second.second = it->second.second && p.prime;
    }
    std::vector<FactorPart> out;
    for (const auto& [b, me] : merged)
        out.push_back({b, me.first, me.second});
    std::lock_guard<std::mutex> lk(mu);
    cache.emplace(n, out);
    return out;
}

// ---------------------------------------------------------------------------
// Canonical form.
//
// A value is rewritten as one of
//   Int  v                         (when it fits in kCanonDigits digits, or
//                                   is an oversized opaque leaf)
//   Prod {base_i ^ exp_i}          (distinct bases, prime where factoring
//                                   succeeded, exponents canonical, sorted)
//   Sum  {addend_i}                (sorted, grouped, at least two)
//
// Two values with structurally equal canonical forms are equal. For pure
// prime-power forms the converse holds too (unique factorization), which is
// what makes equality decidable without expansion.

constexpr unsigned long kCanonDigits = 10000;

struct Canon;
using CanonPtr = std::shared_ptr<const Canon>;

struct CanonFactor {
    CanonPtr base;
    CanonPtr exp;
    bool base_prime;
};

struct Canon {
    enum class Kind { Int, Prod, Sum } kind;
    BigInt value;                      // Int
    bool opaque = false;               // Int: oversized unfactored leaf
    std::vector<CanonFactor> factors;  // Prod
    std::vector<CanonPtr> addends;     // Sum
};

int canon_cmp(const Canon& a, const Canon& b);

int canon_kind_rank(Canon::Kind k) {
    switch (k) {
        case Canon::Kind::Int: return 0;
        case Canon::Kind::Prod: return 1;
        case Canon::Kind::Sum: return 2;
    }
    return 3;
}

int canon_cmp(const Canon& a, const Canon& b) {
    int ra = canon_kind_rank(a.kind), rb = canon_kind_rank(b.kind);
    if (ra != rb)
        return ra < rb ? -1 : 1;
    switch (a.kind) {
        case Canon::Kind::Int:
            return cmp(a.value, b.value);
        case Canon::Kind::Prod: {
            size_t n = std::min(a.factors.size(), b.factors.size());
            for (size_t i = 0; i < n; ++i) {
                int c = canon_cmp(*a.factors[i].base, *b.factors[i].base);
                if (c != 0)
                    return c;
                c = canon_cmp(*a.factors[i].exp, *b.factors[i].exp);
                if (c != 0)
                    return c;
            }
            if (a.factors.size() != b.factors.size())
                return a.factors.size() < b.factors.size() ? -1 : 1;
            return 0;
        }
        case Canon::Kind::Sum: {
            size_t n = std::min(a.addends.size(), b.addends.size());
            for (size_t i = 0; i < n; ++i) {
                int c = canon_cmp(*a.addends[i], *b.addends[i]);
                if (c != 0)
                    return c;
            }
            if (a.addends.size() != b.addends.size())
                return a.addends.size() < b.addends.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

bool canon_equal(const CanonPtr& a, const CanonPtr& b) { return canon_cmp(*a, *b) == 0; }

CanonPtr canon_int(BigInt v, bool opaque = false) {
    auto c = std::make_shared<Canon>();
    c->kind = Canon::Kind::Int;
    c->value = std::move(v);
    c->opaque = opaque;
    return c;
}

bool canon_is_int(const CanonPtr& c, long v) {
    return c->kind == Canon::Kind::Int && c->value == v;
}

CanonPtr canonize(const PowerExpr& e);
CanonPtr canon_mul2(const CanonPtr& a, const CanonPtr& b);
CanonPtr canon_add2(const CanonPtr& a, const CanonPtr& b);

struct CanonBaseLess {
    bool operator()(const CanonPtr& a, const CanonPtr& b) const {
        return canon_cmp(*a, *b) < 0;
    }
};

using FactorMap = std::map<CanonPtr, std::pair<CanonPtr, bool>, CanonBaseLess>;

void absorb_factor(FactorMap& fm, CanonPtr base, CanonPtr exp, bool prime) {
    if (canon_is_int(base, 1))
        return;
    auto it = fm.find(base);
    if (it == fm.end()) {
        fm.emplace(std::move(base), std::make_pair(std::move(exp), prime));
    } else {
        it->second.first = canon_add2(it->second.first, exp);
        it->second.second = it->second.second && prime;
    }
}

/// Merges a canonical value into a product accumulator, scaled by outer_exp.
void absorb_value(FactorMap& fm, const CanonPtr& c, const CanonPtr& outer_exp) {
    switch (c->kind) {
        case Canon::Kind::Int: {
            if (c->value == 1)
                return;
            if (c->opaque) {
                absorb_factor(fm, c, outer_exp, false);
                return;
            }
            for (const auto& p : factor_leaf(c->value)) {
                CanonPtr e = canon_is_int(outer_exp, 1)
                                 ? canon_int(BigInt(static_cast<long>(p.mult)))
                                 : canon_mul2(canon_int(BigInt(static_cast<long>(p.mult))),
                                              outer_exp);
                absorb_factor(fm, canon_int(p.base, !p.prime), std::move(e), p.prime);
            }
            return;
        }
        case Canon::Kind::Prod: {
            for (const auto& f : c->factors) {
                CanonPtr e = canon_is_int(outer_exp, 1) ? f.exp
                                                        : canon_mul2(f.exp, outer_exp);
                absorb_factor(fm, f.base, std::move(e), f.base_prime);
            }
            return;
        }
        case Canon::Kind::Sum:
            absorb_factor(fm, c, outer_exp, false);
            return;
    }
}

CanonPtr finish_product(FactorMap&& fm) {
    std::vector<CanonFactor> fs;
    for (auto& [b, ep] : fm) {
        if (canon_is_int(ep.first, 0))
            continue;
        fs.push_back({b, ep.first, ep.second});
    }
    if (fs.empty())
        return canon_int(BigInt(1));
    if (fs.size() == 1 && canon_is_int(fs[0].exp, 1))
        return fs[0].base;
    auto c = std::make_shared<Canon>();
    c->kind = Canon::Kind::Prod;
    c->factors = std::move(fs);
    return c;
}

CanonPtr canon_mul2(const CanonPtr& a, const CanonPtr& b) {
    if (a->kind == Canon::Kind::Int && b->kind == Canon::Kind::Int && !a->opaque &&
        !b->opaque) {
        BigInt v = a->value * b->value;
        if (mpz_sizeinbase(v.get_mpz_t(), 10) <= kCanonDigits)
            return canon_int(std::move(v));
    }
    FactorMap fm;
    CanonPtr one = canon_int(BigInt(1));
    absorb_value(fm, a, one);
    absorb_value(fm, b, one);
    return finish_product(std::move(fm));
}

CanonPtr finish_sum(std::vector<CanonPtr> addends) {
    // Fold plain integers together, group equal addends into k*x, sort.
    BigInt int_total = 0;
    std::vector<CanonPtr> rest;
    for (auto& a : addends) {
        if (a->kind == Canon::Kind::Sum) {
            for (const auto& g : a->addends)
                rest.push_back(g);
        } else if (a->kind == Canon::Kind::Int && !a->opaque) {
            int_total += a->value;
        } else {
            rest.push_back(std::move(a));
        }
    }
    std::sort(rest.begin(), rest.end(),
              [](const CanonPtr& x, const CanonPtr& y) { return canon_cmp(*x, *y) < 0; });
    std::vector<CanonPtr> grouped;
    for (size_t i = 0; i < rest.size();) {
        size_t j = i;
        while (j < rest.size() && canon_equal(rest[i], rest[j]))
            ++j;
        if (j - i == 1)
            grouped.push_back(rest[i]);
        else
            grouped.push_back(
                canon_mul2(canon_int(BigInt(static_cast<long>(j - i))), rest[i]));
        i = j;
    }
    if (int_total > 0)
        grouped.insert(grouped.begin(), canon_int(int_total));
    if (grouped.empty())
        return canon_int(BigInt(0));
    if (grouped.size() == 1)
        return grouped[0];
    std::sort(grouped.begin(), grouped.end(),
              [](const CanonPtr& x, const CanonPtr& y) { return canon_cmp(*x, *y) < 0; });
    auto c = std::make_shared<Canon>();
    c->kind = Canon::Kind::Sum;
    c->addends = std::move(grouped);
    return c;
}

CanonPtr canon_add2(const CanonPtr& a, const CanonPtr& b) {
    if (a->kind == Canon::Kind::Int && b->kind == Canon::Kind::Int && !a->opaque &&
        !b->opaque)
        return canon_int(a->value + b->value);
    return finish_sum({a, b});
}

CanonPtr canonize(const PowerExpr& e) {
    if (auto v = expand_within(e, kCanonDigits))
        return canon_int(std::move(*v));
    switch (e.kind()) {
        case PowerExpr::Kind::Int:
            // Oversized literal; cannot factor it within budget.
            return canon_int(e.int_value(), true);
        case PowerExpr::Kind::Mul: {
            FactorMap fm;
            CanonPtr one = canon_int(BigInt(1));
            for (const PowerExpr& c : e.children())
                absorb_value(fm, canonize(c), one);
            return finish_product(std::move(fm));
        }
        case PowerExpr::Kind::Add: {
            std::vector<CanonPtr> parts;
            for (const PowerExpr& c : e.children())
                parts.push_back(canonize(c));
            return finish_sum(std::move(parts));
        }
        case PowerExpr::Kind::Pow: {
            CanonPtr ec = canonize(e.exponent());
            CanonPtr bc = canonize(e.base());
            if (canon_is_int(ec, 0))
                return canon_int(BigInt(1));
            FactorMap fm;
            absorb_value(fm, bc, ec);
            return finish_product(std::move(fm));
        }
    }
    throw std::logic_error("PowerExpr canonize: bad node kind");
}

// ---------------------------------------------------------------------------
// Structural cancellation.
//
// Interval logs cannot separate pairs like v+1 vs v when v is astronomically
// large. Before falling back to intervals, both sides are reduced by the
// structure they share: common addends are removed (subtracting the same
// value from both sides), and common factors are divided out (all values are
// >= 1, so both transformations preserve the order). This also decides many
// pairs exactly, e.g. 2^(E+1) vs 2^E reduces to 2 vs 1.

std::vector<CanonPtr> as_addends(const CanonPtr& c) {
    if (c->kind == Canon::Kind::Sum)
        return c->addends;
    return {c};
}

CanonPtr rebuild_sum(std::vector<CanonPtr> v) {
    if (v.size() == 1)
        return v[0];
    auto c = std::make_shared<Canon>();
    c->kind = Canon::Kind::Sum;
    c->addends = std::move(v);
    return c;
}

std::vector<CanonFactor> as_factors(const CanonPtr& c) {
    if (c->kind == Canon::Kind::Prod)
        return c->factors;
    return {{c, canon_int(BigInt(1)), false}};
}

CanonPtr rebuild_prod(std::vector<CanonFactor> fs) {
    if (fs.empty())
        return canon_int(BigInt(1));
    if (fs.size() == 1 && canon_is_int(fs[0].exp, 1))
        return fs[0].base;
    auto c = std::make_shared<Canon>();
    c->kind = Canon::Kind::Prod;
    c->factors = std::move(fs);
    return c;
}

/// Decides the comparison structurally where possible; otherwise rewrites
/// a and b into reduced forms for the interval phase.
std::optional<std::strong_ordering> reduce_and_decide(CanonPtr& a, CanonPtr& b) {
    for (int round = 0; round < 100; ++round) {
        if (canon_equal(a, b))
            return std::strong_ordering::equal;
        if (a->kind == Canon::Kind::Int && b->kind == Canon::Kind::Int) {
            int c = cmp(a->value, b->value);
            return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        bool changed = false;
        if (a->kind == Canon::Kind::Sum || b->kind == Canon::Kind::Sum) {
            auto av = as_addends(a), bv = as_addends(b);
            std::vector<CanonPtr> ar, br;
            bool removed = false;
            size_t i = 0, j = 0;
            while (i < av.size() && j < bv.size()) {
                int c = canon_cmp(*av[i], *bv[j]);
                if (c == 0) {
                    removed = true;
                    ++i;
                    ++j;
                } else if (c < 0) {
                    ar.push_back(av[i++]);
                } else {
                    br.push_back(bv[j++]);
                }
            }
            ar.insert(ar.end(), av.begin() + i, av.end());
            br.insert(br.end(), bv.begin() + j, bv.end());
            if (removed) {
                if (ar.empty() && br.empty())
                    return std::strong_ordering::equal;
                if (ar.empty())
                    return std::strong_ordering::less;
                if (br.empty())
                    return std::strong_ordering::greater;
                a = rebuild_sum(std::move(ar));
                b = rebuild_sum(std::move(br));
                changed = true;
            }
        }
        if (!changed &&
            (a->kind == Canon::Kind::Prod || b->kind == Canon::Kind::Prod)) {
            auto af = as_factors(a), bf = as_factors(b);
            std::vector<CanonFactor> ar, br;
            bool removed = false;
            size_t i = 0, j = 0;
            while (i < af.size() && j < bf.size()) {
                int c = canon_cmp(*af[i].base, *bf[j].base);
                if (c < 0) {
                    ar.push_back(af[i++]);
                } else if (c > 0) {
                    br.push_back(bf[j++]);
                } else {
                    const CanonFactor& fa = af[i];
                    const CanonFactor& fb = bf[j];
                    if (canon_equal(fa.exp, fb.exp)) {
                        removed = true;
                    } else if (fa.exp->kind == Canon::Kind::Int &&
                               fb.exp->kind == Canon::Kind::Int) {
                        removed = true;
                        int ec = cmp(fa.exp->value, fb.exp->value);
                        if (ec > 0)
                            ar.push_back({fa.base,
                                          canon_int(fa.exp->value - fb.exp->value),
                                          fa.base_prime});
                        else
                            br.push_back({fb.base,
                                          canon_int(fb.exp->value - fa.exp->value),
                                          fb.base_prime});
                    } else {
                        ar.push_back(fa);
                        br.push_back(fb);
                    }
                    ++i;
                    ++j;
                }
            }
            ar.insert(ar.end(), af.begin() + i, af.end());
            br.insert(br.end(), bf.begin() + j, bf.end());
            if (removed) {
                a = rebuild_prod(std::move(ar));
                b = rebuild_prod(std::move(br));
                changed = true;
            }
        }
        if (!changed)
            break;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Interval arithmetic on logarithms.
//
// For canonical forms that are not structurally equal, strict order is
// decided by enclosing ln(value) of each side in an interval and doubling
// the working precision until the intervals separate. The exponent range is
// widened to MPFR's maximum so ln(value) up to ~2^62 is representable,
// which covers towers like N^(2N^(N^2)) for every feasible N.

class MpfrInterval {
public:
    explicit MpfrInterval(mpfr_prec_t prec) {
        mpfr_init2(lo_, prec);
        mpfr_init2(hi_, prec);
    }
    ~MpfrInterval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }
    MpfrInterval(const MpfrInterval&) = delete;
    MpfrInterval& operator=(const MpfrInterval&) = delete;
    MpfrInterval(MpfrInterval&&) = delete;

    mpfr_t lo_, hi_;
};

void ln_interval(const Canon& c, mpfr_prec_t prec, MpfrInterval& out);

/// out := interval for the value itself (not its log). Requires the value
/// to be representable; huge results saturate toward +inf on the hi side.
void value_interval(const Canon& c, mpfr_prec_t prec, MpfrInterval& out) {
    if (c.kind == Canon::Kind::Int) {
        mpfr_set_z(out.lo_, c.value.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(out.hi_, c.value.get_mpz_t(), MPFR_RNDU);
        return;
    }
    MpfrInterval ln(prec);
    ln_interval(c, prec, ln);
    mpfr_exp(out.lo_, ln.lo_, MPFR_RNDD);
    mpfr_exp(out.hi_, ln.hi_, MPFR_RNDU);
}

void ln_interval(const Canon& c, mpfr_prec_t prec, MpfrInterval& out) {
    switch (c.kind) {
        case Canon::Kind::Int: {
            MpfrInterval v(prec);
            mpfr_set_z(v.lo_, c.value.get_mpz_t(), MPFR_RNDD);
            mpfr_set_z(v.hi_, c.value.get_mpz_t(), MPFR_RNDU);
            mpfr_log(out.lo_, v.lo_, MPFR_RNDD);
            mpfr_log(out.hi_, v.hi_, MPFR_RNDU);
            return;
        }
        case Canon::Kind::Prod: {
            mpfr_set_zero(out.lo_, 1);
            mpfr_set_zero(out.hi_, 1);
            MpfrInterval lnb(prec), ev(prec), term(prec);
            for (const auto& f : c.factors) {
                ln_interval(*f.base, prec, lnb);
                value_interval(*f.exp, prec, ev);
                // All quantities are >= 0 (values >= 1, exponents >= 1).
                mpfr_mul(term.lo_, ev.lo_, lnb.lo_, MPFR_RNDD);
                mpfr_mul(term.hi_, ev.hi_, lnb.hi_, MPFR_RNDU);
                mpfr_add(out.lo_, out.lo_, term.lo_, MPFR_RNDD);
                mpfr_add(out.hi_, out.hi_, term.hi_, MPFR_RNDU);
            }
            return;
        }
        case Canon::Kind::Sum: {
            // ln(sum v_i) = M + ln(sum exp(ln v_i - M)), M = max ln v_i.
            size_t n = c.addends.size();
            std::vector<std::unique_ptr<MpfrInterval>> ls;
            ls.reserve(n);
            for (const auto& a : c.addends) {
                ls.push_back(std::make_unique<MpfrInterval>(prec));
                ln_interval(*a, prec, *ls.back());
            }
            mpfr_t mlo, mhi;
            mpfr_init2(mlo, prec);
            mpfr_init2(mhi, prec);
            mpfr_set(mlo, ls[0]->lo_, MPFR_RNDD);
            mpfr_set(mhi, ls[0]->hi_, MPFR_RNDU);
            for (size_t i = 1; i < n; ++i) {
                if (mpfr_cmp(ls[i]->lo_, mlo) > 0)
                    mpfr_set(mlo, ls[i]->lo_, MPFR_RNDD);
                if (mpfr_cmp(ls[i]->hi_, mhi) > 0)
                    mpfr_set(mhi, ls[i]->hi_, MPFR_RNDU);
            }
            mpfr_t slo, shi, t;
            mpfr_init2(slo, prec);
            mpfr_init2(shi, prec);
            mpfr_init2(t, prec);
            mpfr_set_zero(slo, 1);
            mpfr_set_zero(shi, 1);
            for (size_t i = 0; i < n; ++i) {
                mpfr_sub(t, ls[i]->lo_, mlo, MPFR_RNDD);
                mpfr_exp(t, t, MPFR_RNDD);
                mpfr_add(slo, slo, t, MPFR_RNDD);
                mpfr_sub(t, ls[i]->hi_, mhi, MPFR_RNDU);
                mpfr_exp(t, t, MPFR_RNDU);
                mpfr_add(shi, shi, t, MPFR_RNDU);
            }
            mpfr_log(slo, slo, MPFR_RNDD);
            mpfr_log(shi, shi, MPFR_RNDU);
            mpfr_add(out.lo_, mlo, slo, MPFR_RNDD);
            mpfr_add(out.hi_, mhi, shi, MPFR_RNDU);
            mpfr_clears(mlo, mhi, slo, shi, t, (mpfr_ptr) 0);
            return;
        }
    }
    throw std::logic_error("PowerExpr ln_interval: bad canon kind");
}

}  // namespace

std::strong_ordering PowerExpr::cmp(const PowerExpr& a, const PowerExpr& b) {
    CanonPtr ca = canonize(a);
    CanonPtr cb = canonize(b);
    if (auto decided = reduce_and_decide(ca, cb))
        return *decided;
    mpfr_exp_t saved_emax = mpfr_get_emax();
    mpfr_exp_t saved_emin = mpfr_get_emin();
    mpfr_set_emax(mpfr_get_emax_max());
    mpfr_set_emin(mpfr_get_emin_min());
    std::strong_ordering result = std::strong_ordering::equal;
    bool decided = false;
    for (mpfr_prec_t prec = 128; prec <= (1 << 21); prec *= 2) {
        MpfrInterval ia(prec), ib(prec);
        ln_interval(*ca, prec, ia);
        ln_interval(*cb, prec, ib);
        if (mpfr_cmp(ia.hi_, ib.lo_) < 0) {
            result = std::strong_ordering::less;
            decided = true;
            break;
        }
        if (mpfr_cmp(ia.lo_, ib.hi_) > 0) {
            result = std::strong_ordering::greater;
            decided = true;
            break;
        }
    }
    mpfr_set_emax(saved_emax);
    mpfr_set_emin(saved_emin);
    if (!decided)
        throw std::runtime_error(
            "PowerExpr::cmp: values not separated at precision ceiling (equal values "
            "outside the canonical prime-power domain?)");
    return result;
}

}  // namespace linforms
