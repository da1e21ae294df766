#include "linforms/topology.hpp"

#include <algorithm>
#include <stdexcept>

namespace linforms {

std::string Topology::to_text() const {
    std::string out;
    for (size_t i = 0; i < steps.size(); ++i) {
        if (i > 0)
            out += ';';
        out += "u" + std::to_string(i + 1) + "<-(" + steps[i].first.to_text() + "," +
               steps[i].second.to_text() + ")";
    }
    out += "|out:";
    for (size_t s = 0; s < outputs.size(); ++s) {
        if (s > 0)
            out += ',';
        out += outputs[s].to_text();
    }
    return out;
}

Topology Topology::parse_text(const std::string& text, unsigned n) {
    Topology t;
    t.n = n;
    size_t bar = text.find('|');
    if (bar == std::string::npos || text.compare(bar, 5, "|out:") != 0)
        throw std::invalid_argument("topology parse: missing |out: section");
    std::string steps_part = text.substr(0, bar);
    std::string out_part = text.substr(bar + 5);

    size_t pos = 0;
    while (pos < steps_part.size()) {
        size_t end = steps_part.find(';', pos);
        if (end == std::string::npos)
            end = steps_part.size();
        std::string one = steps_part.substr(pos, end - pos);
        size_t arrow = one.find("<-(");
        size_t comma = one.find(',', arrow);
        if (arrow == std::string::npos || comma == std::string::npos ||
            one.back() != ')')
            throw std::invalid_argument("topology parse: bad step '" + one + "'");
        std::string head = one.substr(0, arrow);
        if (head != "u" + std::to_string(t.steps.size() + 1))
            throw std::invalid_argument("topology parse: steps must be u1, u2, ... in "
                                        "order, got '" +
                                        head + "'");
        OperandRef j = OperandRef::parse_text(one.substr(arrow + 3, comma - arrow - 3));
        OperandRef k =
            OperandRef::parse_text(one.substr(comma + 1, one.size() - comma - 2));
        t.steps.push_back({j, k});
        pos = end + (end < steps_part.size() ? 1 : 0);
    }

    pos = 0;
    while (pos < out_part.size()) {
        size_t end = out_part.find(',', pos);
        if (end == std::string::npos)
            end = out_part.size();
        t.outputs.push_back(OperandRef::parse_text(out_part.substr(pos, end - pos)));
        pos = end + (end < out_part.size() ? 1 : 0);
    }
    if (t.outputs.empty())
        throw std::invalid_argument("topology parse: no outputs");
    t.m = static_cast<unsigned>(t.outputs.size());
    validate(t);
    return t;
}

namespace {

void check_topo_ref(const OperandRef& r, unsigned n, unsigned steps_before,
                    const char* where) {
    if (r.kind == OperandRef::Kind::Indeterminate) {
        if (r.index < 1 || r.index > n)
            throw std::invalid_argument(std::string(where) + ": input x" +
                                        std::to_string(r.index) + " out of range");
    } else if (r.index < 1 || r.index > steps_before) {
        throw std::invalid_argument(std::string(where) + ": u" +
                                    std::to_string(r.index) +
                                    " is not an earlier step");
    }
}

}  // namespace

void validate(const Topology& t) {
    if (t.m != t.outputs.size())
        throw std::invalid_argument("topology: m does not match outputs length");
    if (t.m == 0)
        throw std::invalid_argument("topology: no outputs");
    for (size_t i = 0; i < t.steps.size(); ++i) {
        check_topo_ref(t.steps[i].first, t.n, static_cast<unsigned>(i), "step operand j");
        check_topo_ref(t.steps[i].second, t.n, static_cast<unsigned>(i),
                       "step operand k");
    }
    for (const OperandRef& o : t.outputs)
        check_topo_ref(o, t.n, t.step_count(), "output node");
}

unsigned count_parameters(const Topology& t) {
    validate(t);
    return t.step_count() + t.m;
}

ParametrizedMatrix parametrize(const Topology& t) {
    validate(t);
    unsigned C = t.step_count();
    unsigned arity = t.m + C;

    // forms[i][v]: coefficient polynomial (in the X variables) of x_{v+1}
    // at step node u_{i+1}.
    std::vector<std::vector<Polynomial>> forms;
    forms.reserve(C);
    auto form_of = [&](const OperandRef& r) {
        if (r.kind == OperandRef::Kind::Indeterminate) {
            std::vector<Polynomial> v(t.n, Polynomial::zero(arity));
            v[r.index - 1] = Polynomial::constant(arity, 1);
            return v;
        }
        return forms[r.index - 1];
    };
    for (unsigned i = 0; i < C; ++i) {
        Polynomial xi = Polynomial::variable(arity, t.m + i);
        std::vector<Polynomial> jf = form_of(t.steps[i].first);
        std::vector<Polynomial> kf = form_of(t.steps[i].second);
        std::vector<Polynomial> row;
        row.reserve(t.n);
        for (unsigned v = 0; v < t.n; ++v)
            row.push_back(jf[v] + xi * kf[v]);
        forms.push_back(std::move(row));
    }

    ParametrizedMatrix pm;
    pm.m = t.m;
    pm.n = t.n;
    for (unsigned s = 0; s < t.m; ++s) {
        Polynomial ys = Polynomial::variable(arity, s);
        std::vector<Polynomial> nf = form_of(t.outputs[s]);
        std::vector<Polynomial> row;
        row.reserve(t.n);
        for (unsigned v = 0; v < t.n; ++v)
            row.push_back(ys * nf[v]);
        pm.rows.push_back(std::move(row));
    }
    return pm;
}

// ---------------------------------------------------------------------------
// Enumeration.

TopologyStream::TopologyStream(unsigned n, unsigned m, unsigned C, bool canonical)
    : n_(n), m_(m), C_(C), canonical_(canonical), total_(raw_count(n, m, C)) {
    if (n < 1 || m < 1)
        throw std::invalid_argument("TopologyStream: n and m must be positive");
}

std::uint64_t TopologyStream::raw_count(unsigned n, unsigned m, unsigned C) {
    constexpr std::uint64_t limit = 1ull << 63;
    std::uint64_t total = 1;
    auto mul = [&](std::uint64_t r) {
        if (r != 0 && total > limit / r)
            throw std::overflow_error("TopologyStream: raw index space too large");
        total *= r;
    };
    for (unsigned i = 0; i < C; ++i) {
        std::uint64_t pool = n + i;
        mul(pool);
        mul(pool);
    }
    for (unsigned s = 0; s < m; ++s)
        mul(n + C);
    return total;
}

namespace {

OperandRef ref_from_digit(unsigned n, std::uint64_t digit) {
    if (digit < n)
        return OperandRef::x(static_cast<unsigned>(digit) + 1);
    return OperandRef::u(static_cast<unsigned>(digit - n) + 1);
}

}  // namespace

Topology TopologyStream::decode(std::uint64_t raw) const {
    // Digits least-significant first: outputs (last output fastest), then
    // steps from the last to the first, k before j.
    Topology t;
    t.n = n_;
    t.m = m_;
    t.outputs.resize(m_);
    t.steps.resize(C_);
    for (unsigned s = m_; s-- > 0;) {
        std::uint64_t pool = n_ + C_;
        t.outputs[s] = ref_from_digit(n_, raw % pool);
        raw /= pool;
    }
    for (unsigned i = C_; i-- > 0;) {
        std::uint64_t pool = n_ + i;
        OperandRef k = ref_from_digit(n_, raw % pool);
        raw /= pool;
        OperandRef j = ref_from_digit(n_, raw % pool);
        raw /= pool;
        t.steps[i] = {j, k};
    }
    return t;
}

namespace {

/// True iff every step feeds some output through the operand graph.
bool all_steps_live(const Topology& t) {
    unsigned C = t.step_count();
    std::vector<char> live(C, 0);
    std::vector<unsigned> work;
    auto mark = [&](const OperandRef& r) {
        if (r.kind == OperandRef::Kind::Variable && !live[r.index - 1]) {
            live[r.index - 1] = 1;
            work.push_back(r.index - 1);
        }
    };
    for (const OperandRef& o : t.outputs)
        mark(o);
    while (!work.empty()) {
        unsigned i = work.back();
        work.pop_back();
        mark(t.steps[i].first);
        mark(t.steps[i].second);
    }
    return std::all_of(live.begin(), live.end(), [](char c) { return c != 0; });
}

/// Applies a step reordering: perm[old] = new position (0-based).
Topology relabel(const Topology& t, const std::vector<unsigned>& perm) {
    auto map_ref = [&](const OperandRef& r) {
        if (r.kind == OperandRef::Kind::Variable)
            return OperandRef::u(perm[r.index - 1] + 1);
        return r;
    };
    Topology out;
    out.n = t.n;
    out.m = t.m;
    out.steps.resize(t.steps.size());
    for (size_t i = 0; i < t.steps.size(); ++i)
        out.steps[perm[i]] = {map_ref(t.steps[i].first), map_ref(t.steps[i].second)};
    for (const OperandRef& o : t.outputs)
        out.outputs.push_back(map_ref(o));
    return out;
}

/// Walks every valid step reordering (linear extension of the dependency
/// order); returns false as soon as one yields a smaller text encoding.
bool is_minimal_ordering(const Topology& t, const std::string& self_text) {
    unsigned C = t.step_count();
    std::vector<std::vector<unsigned>> deps(C);
    for (unsigned i = 0; i < C; ++i) {
        if (t.steps[i].first.kind == OperandRef::Kind::Variable)
            deps[i].push_back(t.steps[i].first.index - 1);
        if (t.steps[i].second.kind == OperandRef::Kind::Variable)
            deps[i].push_back(t.steps[i].second.index - 1);
    }
    std::vector<unsigned> perm(C, 0);
    std::vector<char> placed(C, 0);
    bool minimal = true;
    auto rec = [&](auto&& self, unsigned pos) -> void {
        if (!minimal)
            return;
        if (pos == C) {
            if (relabel(t, perm).to_text() < self_text)
                minimal = false;
            return;
        }
        for (unsigned old = 0; old < C && minimal; ++old) {
            if (placed[old])
                continue;
            bool ready = true;
            for (unsigned d : deps[old])
                if (!placed[d]) {
                    ready = false;
                    break;
                }
            if (!ready)
                continue;
            placed[old] = 1;
            perm[old] = pos;
            self(self, pos + 1);
            placed[old] = 0;
        }
    };
    rec(rec, 0);
    return minimal;
}

}  // namespace

bool TopologyStream::keeps(const Topology& t) const {
    if (!canonical_)
        return true;
    if (!all_steps_live(t))
        return false;
    return is_minimal_ordering(t, t.to_text());
}

std::optional<std::pair<std::uint64_t, Topology>> TopologyStream::next() {
    while (pos_ < total_) {
        std::uint64_t idx = pos_++;
        Topology t = decode(idx);
        if (keeps(t))
            return std::make_pair(idx, std::move(t));
    }
    return std::nullopt;
}

}  // namespace linforms
