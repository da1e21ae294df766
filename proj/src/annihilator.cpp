#include "linforms/annihilator.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>

namespace linforms {

namespace {

// First five primes above 2^60. The leading one screens linear systems for
// nontrivial kernels; all five screen annihilator values before exact
// evaluation.
constexpr std::uint64_t kScreenPrime = 1152921504606847009ULL;
constexpr std::uint64_t kEvalPrimes[5] = {1152921504606847009ULL, 1152921504606847067ULL,
                                          1152921504606847081ULL, 1152921504606847123ULL,
                                          1152921504606847127ULL};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, p);
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a >= b ? a - b : a + p - b;
}

std::uint64_t residue_of(const BigInt& v, std::uint64_t p) {
    BigInt r = bigint_mod(v, BigInt(static_cast<unsigned long>(p)));
    return r.get_ui();
}

void enumerate_rec(unsigned nvars, unsigned var, unsigned remaining,
                   std::vector<Monomial::Factor>& acc, std::vector<Monomial>& out) {
    if (var == nvars) {
        out.emplace_back(acc);
        return;
    }
    enumerate_rec(nvars, var + 1, remaining, acc, out);
    for (unsigned e = 1; e <= remaining; ++e) {
        acc.push_back({var, e});
        enumerate_rec(nvars, var + 1, remaining - e, acc, out);
        acc.pop_back();
    }
}

/// All monomials in nvars variables of total degree <= deg, ascending grlex.
std::vector<Monomial> monomials_up_to(unsigned nvars, unsigned deg) {
    std::vector<Monomial> out;
    std::vector<Monomial::Factor> acc;
    enumerate_rec(nvars, 0, deg, acc, out);
    std::sort(out.begin(), out.end(), MonomialGrlexLess{});
    return out;
}

using CompositionTable = std::map<Monomial, Polynomial, MonomialGrlexLess>;

/// P_1^e1 * ... * P_N^eN for the exponent vector mu, memoized across degrees.
const Polynomial& compose_monomial(const Monomial& mu, const std::vector<Polynomial>& map,
                                   unsigned arity, CompositionTable& memo) {
    auto it = memo.find(mu);
    if (it != memo.end()) return it->second;
    Polynomial value(arity);
    if (mu.is_constant()) {
        value = Polynomial::constant(arity, 1);
    } else {
        std::vector<Monomial::Factor> fs = mu.factors();
        unsigned var = fs.front().first;
        if (fs.front().second == 1)
            fs.erase(fs.begin());
        else
            fs.front().second -= 1;
        const Polynomial& parent = compose_monomial(Monomial(std::move(fs)), map, arity, memo);
        value = parent * map[var];
    }
    return memo.emplace(mu, std::move(value)).first->second;
}

/// Row echelon form over F_p, rows normalized to unit lead. Tracks rank and
/// reports whether a row was pivotal (raised the rank).
class ModElim {
public:
    explicit ModElim(unsigned ncols) : ncols_(ncols) {}

    unsigned rank() const { return static_cast<unsigned>(rows_.size()); }

    bool add_row(std::vector<std::uint64_t> v) {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            std::uint64_t f = v[pivots_[i]];
            if (f == 0) continue;
            for (unsigned c = 0; c < ncols_; ++c)
                v[c] = submod(v[c], mulmod(f, rows_[i][c], kScreenPrime), kScreenPrime);
        }
        unsigned lead = ncols_;
        for (unsigned c = 0; c < ncols_; ++c)
            if (v[c] != 0) {
                lead = c;
                break;
            }
        if (lead == ncols_) return false;
        std::uint64_t inv = invmod(v[lead], kScreenPrime);
        for (unsigned c = 0; c < ncols_; ++c) v[c] = mulmod(v[c], inv, kScreenPrime);
        rows_.push_back(std::move(v));
        pivots_.push_back(lead);
        return true;
    }

private:
    unsigned ncols_;
    std::vector<std::vector<std::uint64_t>> rows_;
    std::vector<unsigned> pivots_;
};

void strip_content(std::vector<BigInt>& v) {
    BigInt g = 0;
    for (const BigInt& x : v) {
        if (x == 0) continue;
        g = g == 0 ? bigint_abs(x) : bigint_gcd(g, x);
        if (g == 1) return;
    }
    if (g > 1)
        for (BigInt& x : v) x /= g;
}

/// Reduced row echelon form with integer rows: content 1, positive pivot
/// entries, every pivot column zero in all other rows. Canonical up to the
/// per-row scale, which is all kernel extraction needs.
class ExactElim {
public:
    explicit ExactElim(unsigned ncols) : ncols_(ncols), is_pivot_(ncols, false) {}

    unsigned rank() const { return static_cast<unsigned>(rows_.size()); }
    bool column_is_pivot(unsigned c) const { return is_pivot_[c]; }

    void add_row(std::vector<BigInt> v) {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const BigInt& f = v[pivots_[i]];
            if (f == 0) continue;
            const BigInt lead = rows_[i][pivots_[i]];
            const BigInt scale = f;
            for (unsigned c = 0; c < ncols_; ++c) v[c] = v[c] * lead - rows_[i][c] * scale;
            strip_content(v);
        }
        unsigned lead_col = ncols_;
        for (unsigned c = 0; c < ncols_; ++c)
            if (v[c] != 0) {
                lead_col = c;
                break;
            }
        if (lead_col == ncols_) return;
        strip_content(v);
        if (v[lead_col] < 0)
            for (BigInt& x : v) x = -x;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i][lead_col] == 0) continue;
            const BigInt scale = rows_[i][lead_col];
            const BigInt lead = v[lead_col];
            for (unsigned c = 0; c < ncols_; ++c)
                rows_[i][c] = rows_[i][c] * lead - v[c] * scale;
            strip_content(rows_[i]);
        }
        std::size_t pos = 0;
        while (pos < pivots_.size() && pivots_[pos] < lead_col) ++pos;
        rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
        pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), lead_col);
        is_pivot_[lead_col] = true;
    }

    /// Kernel vector with free_col set to 1, cleared to integers, content 1.
    std::vector<BigInt> kernel_vector(unsigned free_col) const {
        std::vector<BigRat> x(ncols_, BigRat(0));
        x[free_col] = 1;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            x[pivots_[i]] = BigRat(-rows_[i][free_col]) / BigRat(rows_[i][pivots_[i]]);
        BigInt den = 1;
        for (const BigRat& q : x) den = bigint_lcm(den, BigInt(q.get_den()));
        std::vector<BigInt> out(ncols_);
        for (unsigned c = 0; c < ncols_; ++c) {
            BigRat scaled = x[c] * BigRat(den);
            out[c] = BigInt(scaled.get_num());
        }
        strip_content(out);
        return out;
    }

private:
    unsigned ncols_;
    std::vector<std::vector<BigInt>> rows_;
    std::vector<unsigned> pivots_;
    std::vector<bool> is_pivot_;
};

BigInt perron_from_map(const std::vector<Polynomial>& map) {
    std::vector<BigInt> degrees;
    degrees.reserve(map.size());
    for (const Polynomial& p : map) degrees.emplace_back(std::max(p.degree(), 1));
    return perron_degree_bound(degrees);
}

}  // namespace

BigInt perron_degree_bound(const std::vector<BigInt>& degrees) {
    if (degrees.empty()) throw std::invalid_argument("perron_degree_bound: empty degree list");
    BigInt prod = 1;
    BigInt least = degrees.front();
    for (const BigInt& d : degrees) {
        if (d < 1) throw std::invalid_argument("perron_degree_bound: degrees must be positive");
        prod *= d;
        if (d < least) least = d;
    }
    return prod / least;
}

PowerExpr height_bound(const BigInt& deg_p, const BigInt& n_polys, const BigInt& d_max,
                       const BigInt& h_max) {
    if (deg_p < 1 || n_polys < 1 || d_max < 1 || h_max < 1)
        throw std::invalid_argument("height_bound: all arguments must be >= 1");
    BigInt b = binomial(deg_p + n_polys, to_ulong(n_polys));
    PowerExpr base =
        PowerExpr::mul({PowerExpr::integer(b),
                        PowerExpr::pow(PowerExpr::integer(n_polys), PowerExpr::integer(d_max * deg_p)),
                        PowerExpr::pow(PowerExpr::integer(h_max), PowerExpr::integer(deg_p))});
    return PowerExpr::add(
        {PowerExpr::integer(1), PowerExpr::pow(base, PowerExpr::integer(b - 1))});
}

BoundReport bound_report(const std::vector<Polynomial>& map) {
    if (map.empty()) throw std::invalid_argument("bound_report: empty map");
    BigInt d_max = 1;
    BigInt h_max = 1;
    for (const Polynomial& p : map) {
        BigInt d(std::max(p.degree(), 1));
        if (d > d_max) d_max = d;
        BigInt h = p.height();
        if (h > h_max) h_max = h;
    }
    BigInt perron = perron_from_map(map);
    PowerExpr bound = height_bound(perron, BigInt(static_cast<unsigned long>(map.size())), d_max, h_max);
    return BoundReport{perron, bound, d_max, h_max};
}

std::vector<AnnihilatorResult> find_annihilators(const std::vector<Polynomial>& map,
                                                 unsigned degree_cap, unsigned max_results) {
    if (map.empty()) throw std::invalid_argument("find_annihilators: empty map");
    if (degree_cap < 1) throw std::invalid_argument("find_annihilators: degree_cap must be >= 1");
    if (max_results < 1) throw std::invalid_argument("find_annihilators: max_results must be >= 1");
    const unsigned n_polys = static_cast<unsigned>(map.size());
    const unsigned arity = map.front().arity();
    for (const Polynomial& p : map)
        if (p.arity() != arity) throw std::invalid_argument("find_annihilators: mixed arity map");

    const BigInt perron = perron_from_map(map);
    CompositionTable memo;

    for (unsigned deg = 1; deg <= degree_cap; ++deg) {
        std::vector<Monomial> ascending = monomials_up_to(n_polys, deg);
        const unsigned ncols = static_cast<unsigned>(ascending.size());
        std::vector<const Polynomial*> composed(ncols);
        for (unsigned i = 0; i < ncols; ++i)
            composed[i] = &compose_monomial(ascending[i], map, arity, memo);

        // Column c is the candidate monomial of rank c in descending grlex.
        auto column_of = [&](unsigned asc_index) { return ncols - 1 - asc_index; };

        using RowMap = std::map<Monomial, std::vector<std::pair<unsigned, BigInt>>, MonomialGrlexLess>;
        RowMap rows;
        for (unsigned i = 0; i < ncols; ++i)
            for (const auto& [mono, coeff] : composed[i]->terms())
                rows[mono].emplace_back(column_of(i), coeff);

        ModElim screen(ncols);
        std::vector<const RowMap::value_type*> pivotal;
        for (const auto& entry : rows) {
            std::vector<std::uint64_t> v(ncols, 0);
            for (const auto& [col, coeff] : entry.second) v[col] = residue_of(coeff, kScreenPrime);
            if (screen.add_row(std::move(v))) pivotal.push_back(&entry);
            if (screen.rank() == ncols) break;
        }
        if (screen.rank() == ncols) continue;

        // The modular pivotal rows almost surely span the full integer row
        // space; the cheap subset elimination is validated by the composition
        // check below, with the full elimination as fallback.
        auto eliminate = [&](bool all_rows) {
            ExactElim elim(ncols);
            auto feed = [&](const RowMap::value_type& entry) {
                std::vector<BigInt> v(ncols, BigInt(0));
                for (const auto& [col, coeff] : entry.second) v[col] = coeff;
                elim.add_row(std::move(v));
            };
            if (all_rows) {
                for (const auto& entry : rows) {
                    feed(entry);
                    if (elim.rank() == ncols) break;
                }
            } else {
                for (const auto* entry : pivotal) feed(*entry);
            }
            return elim;
        };
        auto extract = [&](const ExactElim& elim, bool strict,
                           std::vector<AnnihilatorResult>& results) {
            results.clear();
            for (unsigned col = 0; col < ncols && results.size() < max_results; ++col) {
                if (elim.column_is_pivot(col)) continue;
                std::vector<BigInt> coeffs = elim.kernel_vector(col);
                Polynomial q(n_polys);
                for (unsigned c = 0; c < ncols; ++c)
                    if (coeffs[c] != 0) q.add_term(ascending[ncols - 1 - c], coeffs[c]);
                if (q.is_zero()) throw std::logic_error("find_annihilators: empty kernel vector");
                if (q.leading_term().second < 0) q = -q;
                if (!q.compose(map).is_zero()) {
                    if (strict)
                        throw std::logic_error(
                            "find_annihilators: kernel vector fails composition check");
                    return false;
                }
                results.push_back(AnnihilatorResult{std::move(q), deg, perron});
            }
            return true;
        };

        std::vector<AnnihilatorResult> results;
        if (!extract(eliminate(false), false, results)) {
            ExactElim full = eliminate(true);
            if (full.rank() == ncols) continue;
            extract(full, true, results);
        }
        if (!results.empty()) return results;
        throw std::logic_error("find_annihilators: rank deficit without free column");
    }
    return {};
}

std::optional<AnnihilatorResult> find_annihilator(const std::vector<Polynomial>& map,
                                                  unsigned degree_cap) {
    std::vector<AnnihilatorResult> all = find_annihilators(map, degree_cap, 1);
    if (all.empty()) return std::nullopt;
    return std::move(all.front());
}

BigInt evaluate_annihilator(const AnnihilatorResult& res, const MatrixSpec& matrix) {
    std::vector<BigInt> point = matrix.flatten_explicit();
    if (point.size() != res.annihilator.arity())
        throw std::invalid_argument("evaluate_annihilator: matrix shape does not match arity");
    std::vector<BigInt> residues;
    residues.reserve(5);
    for (std::uint64_t p : kEvalPrimes)
        residues.push_back(res.annihilator.eval_mod(point, BigInt(static_cast<unsigned long>(p))));
    BigInt value = res.annihilator.eval(point);
    for (std::size_t i = 0; i < 5; ++i) {
        BigInt p(static_cast<unsigned long>(kEvalPrimes[i]));
        if (bigint_mod(value, p) != residues[i])
            throw std::logic_error("evaluate_annihilator: residue cross-check failed");
    }
    return value;
}

}  // namespace linforms
