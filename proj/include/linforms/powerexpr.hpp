#ifndef LINFORMS_POWEREXPR_HPP
#define LINFORMS_POWEREXPR_HPP

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linforms/bigint.hpp"

namespace linforms {

/// An exact positive integer given by its arithmetic structure instead of
/// its digits: nested products, powers and sums over integer leaves. Values
/// like (2N)^(2N^(2N^2-N+1)) have far too many digits to expand, but their
/// structure supports exact comparison (see cmp) and guarded expansion.
///
/// Immutable; copies share nodes.
class PowerExpr {
public:
    enum class Kind { Int, Mul, Pow, Add };

    /// Leaf; v >= 1 (every node denotes a positive integer).
    static PowerExpr integer(BigInt v);
    static PowerExpr integer(long v) { return integer(BigInt(v)); }
    static PowerExpr mul(std::vector<PowerExpr> children);
    static PowerExpr pow(PowerExpr base, PowerExpr exp);
    /// Sum node. Not part of the minimal mul/pow grammar; exists because
    /// annihilator height bounds have the shape 1 + (...)^(...).
    static PowerExpr add(std::vector<PowerExpr> children);

    Kind kind() const;
    const BigInt& int_value() const;                 // Kind::Int
    const std::vector<PowerExpr>& children() const;  // Kind::Mul / Kind::Add
    const PowerExpr& base() const;                   // Kind::Pow
    const PowerExpr& exponent() const;               // Kind::Pow

    /// Structural cleanup: collapses (b^e1)^e2 -> b^(e1*e2), flattens
    /// nested muls/adds, removes unit factors, unwraps trivial wrappers.
    PowerExpr normalized() const;

    /// Exact expansion when the value has at most digit_cap decimal digits;
    /// nullopt is the overflow signal (never a truncated value).
    std::optional<BigInt> to_bigint(unsigned long digit_cap) const;

    /// Exact ordering of the denoted integers. Equality is detected by
    /// canonical rewriting to a common prime-power form; strict order by
    /// interval arithmetic on logarithms with adaptive precision doubling.
    /// Total on products/powers of factorable leaves; throws on values it
    /// cannot separate at the precision ceiling.
    static std::strong_ordering cmp(const PowerExpr& a, const PowerExpr& b);

    bool structurally_equal(const PowerExpr& other) const;

    /// Compact text like "(2 * 4^16)^29", for transcripts and logs.
    std::string render() const;

    struct Node;  // implementation detail, defined in powerexpr.cpp

private:
    explicit PowerExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;

    friend struct PowerExprDetail;
};

}  // namespace linforms

#endif
