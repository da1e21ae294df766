#include "linforms/matrix.hpp"

namespace linforms {

MatrixSpec MatrixSpec::from_ints(std::vector<std::vector<BigInt>> rows) {
    MatrixSpec spec;
    spec.m = static_cast<unsigned>(rows.size());
    spec.n = rows.empty() ? 0 : static_cast<unsigned>(rows.front().size());
    for (auto& row : rows) {
        if (row.size() != spec.n) throw std::invalid_argument("ragged matrix rows");
        std::vector<Entry> out;
        out.reserve(row.size());
        for (auto& v : row) out.emplace_back(std::move(v));
        spec.entries.push_back(std::move(out));
    }
    return spec;
}

bool MatrixSpec::all_explicit() const {
    for (const auto& row : entries)
        for (const auto& e : row)
            if (!std::holds_alternative<BigInt>(e)) return false;
    return true;
}

std::vector<BigInt> MatrixSpec::flatten_explicit() const {
    std::vector<BigInt> flat;
    flat.reserve(static_cast<std::size_t>(m) * n);
    for (const auto& row : entries)
        for (const auto& e : row) {
            if (!std::holds_alternative<BigInt>(e)) throw SymbolicEntriesError();
            flat.push_back(std::get<BigInt>(e));
        }
    return flat;
}

}  // namespace linforms
