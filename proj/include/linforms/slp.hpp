#ifndef LINFORMS_SLP_HPP
#define LINFORMS_SLP_HPP

#include <array>
#include <string>
#include <vector>

#include "linforms/bigint.hpp"

namespace linforms {

/// Reference to a node of a linear algorithm: either an input x_t or the
/// result u_i of an earlier step. Indices are 1-based, matching the usual
/// notation x1, x2, ... / u1, u2, ...
struct OperandRef {
    enum class Kind { Indeterminate, Variable };
    Kind kind;
    unsigned index;

    static OperandRef x(unsigned t) { return {Kind::Indeterminate, t}; }
    static OperandRef u(unsigned i) { return {Kind::Variable, i}; }
    bool is_input() const { return kind == Kind::Indeterminate; }

    bool operator==(const OperandRef&) const = default;

    std::string to_text() const;                     // "x3" or "u2"
    static OperandRef parse_text(const std::string& s);
};

/// One step u_i <- alpha*(j) + beta*(k). Both coefficients must be nonzero.
struct Step {
    BigRat alpha;
    OperandRef j;
    BigRat beta;
    OperandRef k;
};

/// Straight-line program computing linear forms in x_1..x_n by two-term
/// rational combinations. The number of steps is the addition count.
struct LinearAlgorithm {
    unsigned n = 0;
    std::vector<Step> steps;

    /// True iff every step has alpha = 1.
    bool is_normalized() const;
};

/// Output s is gamma_s times the linear form at node_s (gamma_s != 0).
struct Output {
    OperandRef node;
    BigRat gamma;
};

using OutputSpec = std::vector<Output>;

/// Throws std::invalid_argument on dangling operand references, zero
/// coefficients, or out-of-range indices.
void validate(const LinearAlgorithm& alg, const OutputSpec& out);

/// The m x n coefficient matrix of the computed forms: row s holds the
/// coefficients of output s over x_1..x_n.
std::vector<std::vector<BigRat>> eval_forms(const LinearAlgorithm& alg,
                                            const OutputSpec& out);

/// Rewrites the algorithm so every alpha equals 1, preserving the step
/// count and the computed matrix exactly. Step scales are propagated
/// forward and folded into the betas and the output gammas. Idempotent.
std::pair<LinearAlgorithm, OutputSpec> normalize(const LinearAlgorithm& alg,
                                                 const OutputSpec& out);

/// The labelled DAG of an algorithm: one vertex per input and per step,
/// each step vertex with exactly two incoming labelled edges (labels
/// alpha_i and beta_i). Parallel edges occur when a step's operands
/// coincide.
struct AlgorithmGraph {
    struct Edge {
        OperandRef from;
        BigRat label;
    };
    unsigned n = 0;
    std::vector<std::array<Edge, 2>> in_edges;  // indexed by step, u_{i+1}

    unsigned vertex_count() const {
        return n + static_cast<unsigned>(in_edges.size());
    }
};

AlgorithmGraph graph_of(const LinearAlgorithm& alg);

/// Coefficient vector of the form at a node: entry t is the sum of path
/// weights over all edge paths from x_t to the node, where a path's weight
/// is the product of its edge labels and the empty path has weight 1.
/// Computed by forward propagation; equals the eval_forms row semantics.
std::vector<BigRat> path_weight_forms(const AlgorithmGraph& g, OperandRef node);

/// Step count of a normalized algorithm, i.e. the number of proper (beta)
/// coefficients counted one per step. Throws on non-normalized input.
unsigned proper_label_count(const LinearAlgorithm& alg);

}  // namespace linforms

#endif
