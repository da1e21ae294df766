#include "linforms/slp.hpp"

#include <stdexcept>

namespace linforms {

std::string OperandRef::to_text() const {
    return (kind == Kind::Indeterminate ? "x" : "u") + std::to_string(index);
}

OperandRef OperandRef::parse_text(const std::string& s) {
    if (s.size() < 2 || (s[0] != 'x' && s[0] != 'u'))
        throw std::invalid_argument("operand parse: expected x<i> or u<i>, got '" + s +
                                    "'");
    for (size_t i = 1; i < s.size(); ++i)
        if (!isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("operand parse: bad index in '" + s + "'");
    unsigned long idx = std::stoul(s.substr(1));
    if (idx == 0)
        throw std::invalid_argument("operand parse: indices are 1-based: '" + s + "'");
    return {s[0] == 'x' ? Kind::Indeterminate : Kind::Variable,
            static_cast<unsigned>(idx)};
}

bool LinearAlgorithm::is_normalized() const {
    for (const Step& s : steps)
        if (s.alpha != 1)
            return false;
    return true;
}

namespace {

void check_ref(const OperandRef& r, unsigned n, unsigned steps_before,
               const char* where) {
    if (r.kind == OperandRef::Kind::Indeterminate) {
        if (r.index < 1 || r.index > n)
            throw std::invalid_argument(std::string(where) + ": input x" +
                                        std::to_string(r.index) + " out of range");
    } else {
        if (r.index < 1 || r.index > steps_before)
            throw std::invalid_argument(std::string(where) + ": u" +
                                        std::to_string(r.index) +
                                        " is not an earlier step");
    }
}

}  // namespace

void validate(const LinearAlgorithm& alg, const OutputSpec& out) {
    for (size_t i = 0; i < alg.steps.size(); ++i) {
        const Step& s = alg.steps[i];
        if (s.alpha == 0 || s.beta == 0)
            throw std::invalid_argument("step " + std::to_string(i + 1) +
                                        ": zero coefficient");
        check_ref(s.j, alg.n, static_cast<unsigned>(i), "step operand j");
        check_ref(s.k, alg.n, static_cast<unsigned>(i), "step operand k");
    }
    for (size_t s = 0; s < out.size(); ++s) {
        if (out[s].gamma == 0)
            throw std::invalid_argument("output " + std::to_string(s + 1) +
                                        ": zero gamma");
        check_ref(out[s].node, alg.n, static_cast<unsigned>(alg.steps.size()),
                  "output node");
    }
}

namespace {

/// Coefficient rows for every node: inputs are unit vectors, steps combine
/// their operands.
std::vector<std::vector<BigRat>> node_forms(const LinearAlgorithm& alg) {
    std::vector<std::vector<BigRat>> forms(alg.steps.size());
    auto form_of = [&](const OperandRef& r) -> std::vector<BigRat> {
        if (r.kind == OperandRef::Kind::Indeterminate) {
            std::vector<BigRat> v(alg.n);
            v[r.index - 1] = 1;
            return v;
        }
        return forms[r.index - 1];
    };
    for (size_t i = 0; i < alg.steps.size(); ++i) {
        const Step& s = alg.steps[i];
        std::vector<BigRat> ja = form_of(s.j);
        std::vector<BigRat> ka = form_of(s.k);
        std::vector<BigRat> row(alg.n);
        for (unsigned t = 0; t < alg.n; ++t)
            row[t] = s.alpha * ja[t] + s.beta * ka[t];
        forms[i] = std::move(row);
    }
    return forms;
}

}  // namespace

std::vector<std::vector<BigRat>> eval_forms(const LinearAlgorithm& alg,
                                            const OutputSpec& out) {
    validate(alg, out);
    auto forms = node_forms(alg);
    std::vector<std::vector<BigRat>> rows;
    rows.reserve(out.size());
    for (const Output& o : out) {
        std::vector<BigRat> row(alg.n);
        if (o.node.kind == OperandRef::Kind::Indeterminate) {
            row[o.node.index - 1] = o.gamma;
        } else {
            const auto& f = forms[o.node.index - 1];
            for (unsigned t = 0; t < alg.n; ++t)
                row[t] = o.gamma * f[t];
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::pair<LinearAlgorithm, OutputSpec> normalize(const LinearAlgorithm& alg,
                                                 const OutputSpec& out) {
    validate(alg, out);
    // scale[i] = factor by which step i's form shrinks in the rewrite;
    // inputs keep scale 1.
    std::vector<BigRat> scale(alg.steps.size());
    auto scale_of = [&](const OperandRef& r) -> BigRat {
        return r.kind == OperandRef::Kind::Indeterminate ? BigRat(1)
                                                         : scale[r.index - 1];
    };
    LinearAlgorithm res;
    res.n = alg.n;
    res.steps.reserve(alg.steps.size());
    for (size_t i = 0; i < alg.steps.size(); ++i) {
        const Step& s = alg.steps[i];
        BigRat si = s.alpha * scale_of(s.j);
        scale[i] = si;
        res.steps.push_back({BigRat(1), s.j, s.beta * scale_of(s.k) / si, s.k});
    }
    OutputSpec new_out;
    new_out.reserve(out.size());
    for (const Output& o : out)
        new_out.push_back({o.node, o.gamma * scale_of(o.node)});
    return {std::move(res), std::move(new_out)};
}

AlgorithmGraph graph_of(const LinearAlgorithm& alg) {
    AlgorithmGraph g;
    g.n = alg.n;
    g.in_edges.reserve(alg.steps.size());
    for (const Step& s : alg.steps)
        g.in_edges.push_back({AlgorithmGraph::Edge{s.j, s.alpha},
                              AlgorithmGraph::Edge{s.k, s.beta}});
    return g;
}

std::vector<BigRat> path_weight_forms(const AlgorithmGraph& g, OperandRef node) {
    if (node.kind == OperandRef::Kind::Indeterminate) {
        if (node.index < 1 || node.index > g.n)
            throw std::invalid_argument("path_weight_forms: unknown vertex " +
                                        node.to_text());
        std::vector<BigRat> v(g.n);
        v[node.index - 1] = 1;
        return v;
    }
    if (node.index < 1 || node.index > g.in_edges.size())
        throw std::invalid_argument("path_weight_forms: unknown vertex " +
                                    node.to_text());
    std::vector<std::vector<BigRat>> acc(node.index);
    for (unsigned i = 0; i < node.index; ++i) {
        std::vector<BigRat> row(g.n);
        for (const auto& e : g.in_edges[i]) {
            if (e.from.kind == OperandRef::Kind::Indeterminate) {
                row[e.from.index - 1] += e.label;
            } else {
                const auto& src = acc[e.from.index - 1];
                for (unsigned t = 0; t < g.n; ++t)
                    row[t] += e.label * src[t];
            }
        }
        acc[i] = std::move(row);
    }
    return acc[node.index - 1];
}

unsigned proper_label_count(const LinearAlgorithm& alg) {
    if (!alg.is_normalized())
        throw std::invalid_argument(
            "proper_label_count: algorithm is not normalized");
    return static_cast<unsigned>(alg.steps.size());
}

}  // namespace linforms
