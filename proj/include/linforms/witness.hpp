#ifndef LINFORMS_WITNESS_HPP
#define LINFORMS_WITNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "linforms/bigint.hpp"
#include "linforms/polynomial.hpp"
#include "linforms/powerexpr.hpp"

namespace linforms {

/// Admissible range for one sequence entry: value > low (or >= low when
/// inclusive_low is set), and value <= high when a high bound exists.
struct WitnessWindow {
    PowerExpr low;
    std::optional<PowerExpr> high;
    bool inclusive_low = false;
};

/// Integer sequence growing fast enough that no polynomial of degree <= d
/// and height <= H vanishes at it. Explicit mode stores the values;
/// symbolic mode stores per-entry windows too large to expand, with the
/// growth parameters kept symbolic as well.
struct WitnessSequence {
    long d = 0;
    BigInt H;
    std::vector<BigInt> values;

    std::vector<WitnessWindow> windows;
    std::optional<PowerExpr> sym_d;
    std::optional<PowerExpr> sym_H;

    bool symbolic() const { return !windows.empty(); }
    std::size_t length() const { return symbolic() ? windows.size() : values.size(); }

    /// Throws std::invalid_argument naming the first violated growth
    /// condition (explicit mode) or empty/inverted window (symbolic mode).
    void validate() const;
    bool admissible() const;
};

/// Smallest admissible sequence for the parameters: a_1 = H+1 and
/// a_l = 2H * a_{l-1}^d, with d raised to 3 when smaller. Expansion is
/// guarded by digit_cap decimal digits and throws std::overflow_error
/// beyond it.
WitnessSequence build_sequence(long d, const BigInt& H, unsigned length,
                               unsigned digit_cap = 1000000);

/// P(a_1, ..., a_N) for p nonzero with deg p <= d and H(p) <= H. For an
/// admissible sequence a zero value is impossible and aborts via
/// std::logic_error; inadmissible sequences simply return the value.
BigInt check_nonvanish(const Polynomial& p, const WitnessSequence& seq);

/// The symbolic entry windows of the target-matrix theorem for an m x n
/// shape, one window per entry a_1..a_mn.
WitnessSequence theorem1_windows(unsigned m, unsigned n);

/// One verified inequality of the window analysis.
struct ChainCheck {
    std::string name;
    bool holds = false;
};

struct ChainReport {
    unsigned N = 0;
    std::vector<ChainCheck> checks;
    bool all_hold() const;
};

/// Symbolic verification, with d = N^(N-1) and H = N^(2N^(N^2)), that the
/// windowed sequences satisfy the growth hypotheses: the section windows
/// ((2H)^(l*d^l), (2H)^(l*d^l+1)] chain correctly, they sit inside the
/// theorem windows for l < N, and the theorem's floor for a_N dominates
/// both the section floor and the final chain step.
ChainReport verify_concluding_chain(unsigned N, unsigned cap = 8);

}  // namespace linforms

#endif
