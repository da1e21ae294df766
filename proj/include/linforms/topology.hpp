#ifndef LINFORMS_TOPOLOGY_HPP
#define LINFORMS_TOPOLOGY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linforms/polynomial.hpp"
#include "linforms/slp.hpp"

namespace linforms {

/// Coefficient-free skeleton of a normalized algorithm: step i combines
/// operand j (implicit weight 1) with operand k (symbolic weight X_i);
/// output s rescales its node by the symbolic Y_s.
struct Topology {
    unsigned n = 0;
    unsigned m = 0;
    std::vector<std::pair<OperandRef, OperandRef>> steps;  // (j, k)
    std::vector<OperandRef> outputs;

    unsigned step_count() const { return static_cast<unsigned>(steps.size()); }

    /// "u1<-(x1,x2);u2<-(u1,x2)|out:u2,u1"
    std::string to_text() const;
    static Topology parse_text(const std::string& text, unsigned n);
};

void validate(const Topology& t);

/// C + m: one symbolic step coefficient plus one output scale each.
unsigned count_parameters(const Topology& t);

/// The m x n matrix of entry polynomials over (Y_1..Y_m, X_1..X_C):
/// polynomial variable s-1 is Y_s, variable m+i-1 is X_i. Entry (s,t) is
/// Y_s times the sum, over all paths from x_t to the output node of row s,
/// of the product of X_i over the k-edges the path takes.
struct ParametrizedMatrix {
    unsigned m = 0;
    unsigned n = 0;
    std::vector<std::vector<Polynomial>> rows;
};

ParametrizedMatrix parametrize(const Topology& t);

/// Streams every topology with exactly C steps and every assignment of m
/// outputs, in a fixed mixed-radix order (step operands first, outputs
/// last, rightmost digit fastest). In canonical mode, topologies with dead
/// steps (not feeding any output) are skipped, and of all step reorderings
/// that are again valid, only the one with the lexicographically smallest
/// text encoding is kept.
class TopologyStream {
public:
    TopologyStream(unsigned n, unsigned m, unsigned C, bool canonical = true);

    /// Next surviving topology with its raw enumeration index.
    std::optional<std::pair<std::uint64_t, Topology>> next();

    /// Size of the raw index space; throws on overflow past 2^63.
    static std::uint64_t raw_count(unsigned n, unsigned m, unsigned C);

    /// Repositions so the following next() starts at this raw index.
    void seek(std::uint64_t raw) { pos_ = raw; }

    Topology decode(std::uint64_t raw) const;
    bool keeps(const Topology& t) const;

private:
    unsigned n_, m_, C_;
    bool canonical_;
    std::uint64_t pos_ = 0;
    std::uint64_t total_;
};

}  // namespace linforms

#endif
