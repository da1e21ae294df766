#ifndef LINFORMS_MATRIX_HPP
#define LINFORMS_MATRIX_HPP

#include <stdexcept>
#include <variant>
#include <vector>

#include "linforms/bigint.hpp"
#include "linforms/powerexpr.hpp"

namespace linforms {

/// Raised where an operation needs explicit integer entries but the matrix
/// holds symbolic ones.
struct SymbolicEntriesError : std::runtime_error {
    SymbolicEntriesError()
        : std::runtime_error("matrix has symbolic entries; explicit integers required") {}
};

/// Target matrix: m rows of n entries, each an explicit integer or a
/// symbolic power expression. Flattening is row-major.
struct MatrixSpec {
    unsigned m = 0;
    unsigned n = 0;
    using Entry = std::variant<BigInt, PowerExpr>;
    std::vector<std::vector<Entry>> entries;

    static MatrixSpec from_ints(std::vector<std::vector<BigInt>> rows);

    bool all_explicit() const;

    /// Row-major entry list; throws SymbolicEntriesError on PowerExpr entries.
    std::vector<BigInt> flatten_explicit() const;

    const Entry& at(unsigned row, unsigned col) const { return entries[row][col]; }
};

}  // namespace linforms

#endif
