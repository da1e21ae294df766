#ifndef LINFORMS_ANNIHILATOR_HPP
#define LINFORMS_ANNIHILATOR_HPP

#include <optional>
#include <vector>

#include "linforms/bigint.hpp"
#include "linforms/matrix.hpp"
#include "linforms/polynomial.hpp"
#include "linforms/powerexpr.hpp"

namespace linforms {

/// A polynomial relation Q with Q(P_1, ..., P_N) = 0 for a given list of
/// polynomials P_1, ..., P_N, together with the search metadata.
struct AnnihilatorResult {
    Polynomial annihilator;  ///< arity N, integer coefficients, content 1
    unsigned degree_used = 0;
    BigInt perron_bound;
};

/// Size and height bounds for annihilators of a polynomial list.
struct BoundReport {
    BigInt perron_degree;
    PowerExpr height_bound;
    BigInt d_max;
    BigInt h_max;
};

/// Exact value of (d_1 * ... * d_N) / min(d_i). Requires a nonempty list of
/// positive degrees.
BigInt perron_degree_bound(const std::vector<BigInt>& degrees);

/// Height bound for an annihilator of degree deg_p of N polynomials with
/// max degree d_max and max height h_max, kept symbolic:
///   1 + (binom(deg_p + N, N) * N^(d_max*deg_p) * h_max^deg_p)^(binom(deg_p + N, N) - 1)
PowerExpr height_bound(const BigInt& deg_p, const BigInt& n_polys, const BigInt& d_max,
                       const BigInt& h_max);

/// Perron degree and height bounds instantiated for a concrete list, using
/// max(1, deg P_k) as the degree of each entry.
BoundReport bound_report(const std::vector<Polynomial>& map);

/// Searches degrees 1..degree_cap for polynomials Q with Q(P_1,...,P_N) = 0,
/// returning up to max_results kernel vectors found at the lowest degree that
/// has any. Results are deterministic: candidate monomials are ordered by
/// graded lex, kernel vectors are taken per free column in that order, each
/// vector has content 1 and a positive leading coefficient. Every returned
/// polynomial is re-verified by symbolic composition.
std::vector<AnnihilatorResult> find_annihilators(const std::vector<Polynomial>& map,
                                                 unsigned degree_cap, unsigned max_results);

/// First result of find_annihilators, or nullopt when no relation of degree
/// <= degree_cap exists.
std::optional<AnnihilatorResult> find_annihilator(const std::vector<Polynomial>& map,
                                                  unsigned degree_cap);

/// Exact value of the annihilator at the row-major entry list of an explicit
/// matrix. Residues modulo fixed primes are computed first; the exact value
/// is checked against them. Throws SymbolicEntriesError for symbolic entries.
BigInt evaluate_annihilator(const AnnihilatorResult& res, const MatrixSpec& matrix);

}  // namespace linforms

#endif
