#include "linforms/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>

#include "linforms/annihilator.hpp"
#include "linforms/topology.hpp"

namespace linforms {

namespace {

constexpr const char* kStructuralNote =
    "window membership and the growth chain verified; the claimed complexity "
    "m*(n-1) is conditional on the windowed-matrix theorem";

void validate_shape(const MatrixSpec& mat) {
    if (mat.m == 0 || mat.n == 0)
        throw std::invalid_argument("matrix dimensions must be positive");
    if (mat.entries.size() != mat.m)
        throw std::invalid_argument("matrix row count does not match m");
    for (const auto& row : mat.entries)
        if (row.size() != mat.n) throw std::invalid_argument("matrix row length does not match n");
}

/// Raw indices of the canonical topologies for a shape, computed once.
const std::vector<std::uint64_t>& canonical_indices(unsigned n, unsigned m, unsigned C) {
    static std::mutex mu;
    static std::map<std::tuple<unsigned, unsigned, unsigned>, std::vector<std::uint64_t>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(n, m, C);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::uint64_t> idx;
    TopologyStream stream(n, m, C, true);
    while (auto item = stream.next()) idx.push_back(item->first);
    return cache.emplace(key, std::move(idx)).first->second;
}

std::vector<Polynomial> flatten_map(const ParametrizedMatrix& pm) {
    std::vector<Polynomial> map;
    map.reserve(static_cast<std::size_t>(pm.m) * pm.n);
    for (const auto& row : pm.rows)
        for (const Polynomial& p : row) map.push_back(p);
    return map;
}

/// Relations depend on the topology alone, not the target matrix, so they
/// are shared across certification runs.
std::vector<AnnihilatorResult> topology_annihilators(const Topology& top, unsigned degree_cap) {
    static std::mutex mu;
    static std::map<std::tuple<unsigned, std::string, unsigned>, std::vector<AnnihilatorResult>>
        cache;
    const auto key = std::make_tuple(top.n, top.to_text(), degree_cap);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::vector<AnnihilatorResult> found =
        find_annihilators(flatten_map(parametrize(top)), degree_cap, 3);
    std::lock_guard<std::mutex> lock(mu);
    return cache.try_emplace(key, std::move(found)).first->second;
}

TopologyRecord examine_topology(const Topology& top, const MatrixSpec& mat, unsigned degree_cap) {
    TopologyRecord rec;
    rec.topology = top.to_text();
    std::vector<AnnihilatorResult> found = topology_annihilators(top, degree_cap);
    if (found.empty()) {
        rec.reason = "cap_exhausted";
        return rec;
    }
    for (const AnnihilatorResult& r : found) {
        BigInt value = evaluate_annihilator(r, mat);
        if (value != 0) {
            rec.annihilator = r.annihilator.to_text();
            rec.value = value;
            return rec;
        }
    }
    rec.reason = "annihilator_vanished";
    return rec;
}

void examine_level(const MatrixSpec& mat, unsigned C, unsigned degree_cap, unsigned threads,
                   std::vector<TopologyRecord>& out) {
    const std::vector<std::uint64_t>& idx = canonical_indices(mat.n, mat.m, C);
    if (idx.empty()) return;
    std::vector<TopologyRecord> slots(idx.size());
    unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, idx.size()));

    std::atomic<std::size_t> cursor{0};
    std::mutex failure_mu;
    std::exception_ptr failure;
    auto work = [&] {
        TopologyStream stream(mat.n, mat.m, C, true);
        try {
            for (;;) {
                std::size_t i = cursor.fetch_add(1);
                if (i >= idx.size()) break;
                slots[i] = examine_topology(stream.decode(idx[i]), mat, degree_cap);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
            cursor.store(idx.size());
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    for (TopologyRecord& r : slots) out.push_back(std::move(r));
}

// ---- coefficient solving for synthesis ----

/// Residual of one entry equation under a partial assignment: a rational
/// combination of monomials in the still-unassigned parameters.
using ResidualKey = std::vector<Monomial::Factor>;

std::map<ResidualKey, BigRat> residual_of(const Polynomial& p,
                                          const std::vector<std::optional<BigRat>>& vals) {
    std::map<ResidualKey, BigRat> out;
    for (const auto& [mono, coeff] : p.terms()) {
        BigRat c(coeff);
        ResidualKey rest;
        for (const auto& [var, exp] : mono.factors()) {
            if (vals[var]) {
                for (unsigned e = 0; e < exp; ++e) c *= *vals[var];
            } else {
                rest.emplace_back(var, exp);
            }
        }
        if (c == 0) continue;
        auto [it, inserted] = out.try_emplace(rest, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) out.erase(it);
        }
    }
    return out;
}

struct CoeffSolver {
    const std::vector<std::pair<Polynomial, BigRat>>& eqs;
    unsigned nunknowns;
    long bound;
    std::vector<std::optional<BigRat>> solution;

    /// Assigns every unknown forced by a one-variable linear residual.
    /// Returns false on a contradiction or a forced zero value.
    bool propagate(std::vector<std::optional<BigRat>>& vals) const {
        bool progress = true;
        while (progress) {
            progress = false;
            for (const auto& [poly, rhs] : eqs) {
                auto res = residual_of(poly, vals);
                BigRat constant(0);
                auto cit = res.find(ResidualKey{});
                if (cit != res.end()) {
                    constant = cit->second;
                    res.erase(cit);
                }
                if (res.empty()) {
                    if (constant != rhs) return false;
                    continue;
                }
                if (res.size() == 1) {
                    const auto& [key, coeff] = *res.begin();
                    if (key.size() == 1 && key.front().second == 1) {
                        BigRat v = (rhs - constant) / coeff;
                        if (v == 0) return false;
                        vals[key.front().first] = v;
                        progress = true;
                    }
                }
            }
        }
        return true;
    }

    /// Lowest-indexed unassigned parameter of the residual with the fewest
    /// unassigned parameters; nunknowns when every residual is settled.
    unsigned pick_branch_var(const std::vector<std::optional<BigRat>>& vals) const {
        unsigned best_var = nunknowns;
        std::size_t best_width = 0;
        for (const auto& [poly, rhs] : eqs) {
            auto res = residual_of(poly, vals);
            res.erase(ResidualKey{});
            if (res.empty()) continue;
            std::vector<unsigned> vars;
            for (const auto& [key, coeff] : res)
                for (const auto& [var, exp] : key)
                    if (std::find(vars.begin(), vars.end(), var) == vars.end())
                        vars.push_back(var);
            if (best_var == nunknowns || vars.size() < best_width) {
                best_width = vars.size();
                best_var = *std::min_element(vars.begin(), vars.end());
            }
        }
        return best_var;
    }

    bool search(std::vector<std::optional<BigRat>> vals) {
        if (!propagate(vals)) return false;
        unsigned var = pick_branch_var(vals);
        if (var == nunknowns) {
            for (auto& v : vals)
                if (!v) v = BigRat(1);
            for (const auto& [poly, rhs] : eqs) {
                auto res = residual_of(poly, vals);
                BigRat constant(0);
                auto cit = res.find(ResidualKey{});
                if (cit != res.end()) constant = cit->second;
                if (res.size() > (cit != res.end() ? 1u : 0u)) return false;
                if (constant != rhs) return false;
            }
            solution = std::move(vals);
            return true;
        }
        for (long den = 1; den <= bound; ++den) {
            for (long num = 1; num <= bound; ++num) {
                if (bigint_gcd(BigInt(num), BigInt(den)) != 1) continue;
                for (int sign : {+1, -1}) {
                    auto next = vals;
                    next[var] = make_rat(BigInt(sign * num), BigInt(den));
                    if (search(std::move(next))) return true;
                }
            }
        }
        return false;
    }
};

std::optional<SynthesizedAlgorithm> try_topology(const Topology& top, const MatrixSpec& mat,
                                                 const std::vector<BigInt>& flat, long bound) {
    ParametrizedMatrix pm = parametrize(top);
    const unsigned nunknowns = count_parameters(top);
    std::vector<std::pair<Polynomial, BigRat>> eqs;
    eqs.reserve(static_cast<std::size_t>(mat.m) * mat.n);
    for (unsigned s = 0; s < mat.m; ++s)
        for (unsigned t = 0; t < mat.n; ++t) {
            const BigInt& target = flat[static_cast<std::size_t>(s) * mat.n + t];
            if (pm.rows[s][t].is_zero()) {
                if (target != 0) return std::nullopt;
                continue;
            }
            eqs.emplace_back(pm.rows[s][t], BigRat(target));
        }

    CoeffSolver solver{eqs, nunknowns, bound, {}};
    if (!solver.search(std::vector<std::optional<BigRat>>(nunknowns))) return std::nullopt;

    LinearAlgorithm alg;
    alg.n = mat.n;
    for (unsigned i = 0; i < top.step_count(); ++i)
        alg.steps.push_back(
            Step{BigRat(1), top.steps[i].first, *solver.solution[mat.m + i], top.steps[i].second});
    OutputSpec out;
    for (unsigned s = 0; s < mat.m; ++s)
        out.push_back(Output{top.outputs[s], *solver.solution[s]});
    validate(alg, out);
    auto forms = eval_forms(alg, out);
    for (unsigned s = 0; s < mat.m; ++s)
        for (unsigned t = 0; t < mat.n; ++t)
            if (forms[s][t] != BigRat(flat[static_cast<std::size_t>(s) * mat.n + t]))
                throw std::logic_error("synthesize_upper_bound: solved coefficients fail re-evaluation");
    return SynthesizedAlgorithm{std::move(alg), std::move(out), top.to_text()};
}

std::string render_comparison(const PowerExpr& entry, const char* rel, const PowerExpr& bound) {
    return entry.render() + " " + rel + " " + bound.render();
}

std::vector<PowerExpr> symbolic_entries(const MatrixSpec& mat) {
    std::vector<PowerExpr> entries;
    entries.reserve(static_cast<std::size_t>(mat.m) * mat.n);
    for (const auto& row : mat.entries)
        for (const auto& cell : row) {
            if (const BigInt* v = std::get_if<BigInt>(&cell))
                entries.push_back(PowerExpr::integer(*v));
            else
                entries.push_back(std::get<PowerExpr>(cell));
        }
    return entries;
}

bool recheck_structural(const Certificate& cert) {
    if (cert.kind != CertificateKind::Structural) return false;
    Certificate fresh = certify_structural(cert.matrix);
    if (fresh.kind != CertificateKind::Structural) return false;
    if (!cert.sym_d || !cert.sym_H) return false;
    if (!cert.sym_d->structurally_equal(*fresh.sym_d)) return false;
    if (!cert.sym_H->structurally_equal(*fresh.sym_H)) return false;
    if (cert.window_checks.size() != fresh.window_checks.size()) return false;
    for (std::size_t i = 0; i < fresh.window_checks.size(); ++i) {
        const WindowCheck& a = cert.window_checks[i];
        const WindowCheck& b = fresh.window_checks[i];
        if (a.entry != b.entry || a.bound != b.bound || a.comparison != b.comparison ||
            a.holds != b.holds || !a.holds)
            return false;
    }
    if (cert.chain_checks.size() != fresh.chain_checks.size()) return false;
    for (std::size_t i = 0; i < fresh.chain_checks.size(); ++i) {
        if (cert.chain_checks[i].name != fresh.chain_checks[i].name ||
            cert.chain_checks[i].holds != fresh.chain_checks[i].holds ||
            !cert.chain_checks[i].holds)
            return false;
    }
    return cert.note == fresh.note && cert.refusal.empty() && !cert.records.size();
}

bool recheck_lower(const Certificate& cert) {
    validate_shape(cert.matrix);
    std::vector<BigInt> flat = cert.matrix.flatten_explicit();
    const unsigned N = cert.matrix.m * cert.matrix.n;
    const unsigned trivial = cert.matrix.m * (cert.matrix.n - 1);
    if (cert.target > trivial) return false;
    if (cert.budget != (cert.target > 0 ? cert.target - 1 : 0)) return false;

    std::size_t pos = 0;
    bool survivors = false;
    for (unsigned C = 0; C < cert.target; ++C) {
        TopologyStream stream(cert.matrix.n, cert.matrix.m, C, true);
        for (std::uint64_t raw : canonical_indices(cert.matrix.n, cert.matrix.m, C)) {
            if (pos >= cert.records.size()) return false;
            const TopologyRecord& rec = cert.records[pos++];
            Topology top = stream.decode(raw);
            if (rec.topology != top.to_text()) return false;
            if (rec.excluded()) {
                if (rec.value == 0) return false;
                Polynomial q = Polynomial::parse_text(rec.annihilator, N);
                if (q.is_zero()) return false;
                if (!q.compose(flatten_map(parametrize(top))).is_zero()) return false;
                if (q.eval(flat) != rec.value) return false;
            } else {
                survivors = true;
                if (!rec.annihilator.empty() || rec.value != 0) return false;
                if (rec.reason != "annihilator_vanished" && rec.reason != "cap_exhausted")
                    return false;
                std::vector<AnnihilatorResult> found = topology_annihilators(top, cert.degree_cap);
                if (rec.reason == "cap_exhausted") {
                    if (!found.empty()) return false;
                } else {
                    if (found.empty()) return false;
                    for (const AnnihilatorResult& r : found)
                        if (evaluate_annihilator(r, cert.matrix) != 0) return false;
                }
            }
        }
    }
    if (pos != cert.records.size()) return false;
    if ((cert.kind == CertificateKind::Exhaustive) == survivors) return false;
    return cert.window_checks.empty() && cert.chain_checks.empty() && cert.refusal.empty();
}

}  // namespace

const char* certificate_kind_name(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::Exhaustive: return "exhaustive";
        case CertificateKind::Structural: return "structural";
        case CertificateKind::Inconclusive: return "inconclusive";
    }
    throw std::logic_error("certificate_kind_name: bad kind");
}

Certificate certify_lower_bound(const MatrixSpec& mat, unsigned target, unsigned degree_cap,
                                unsigned threads) {
    validate_shape(mat);
    (void)mat.flatten_explicit();
    const unsigned trivial = mat.m * (mat.n - 1);
    if (target > trivial)
        throw std::invalid_argument("certify_lower_bound: target exceeds m*(n-1)");
    if (target > 0 && degree_cap == 0)
        throw std::invalid_argument("certify_lower_bound: degree_cap must be positive");

    Certificate cert;
    cert.matrix = mat;
    cert.target = target;
    cert.budget = target > 0 ? target - 1 : 0;
    cert.degree_cap = degree_cap;
    for (unsigned C = 0; C < target; ++C)
        examine_level(mat, C, degree_cap, threads, cert.records);
    const bool survivors = std::any_of(cert.records.begin(), cert.records.end(),
                                       [](const TopologyRecord& r) { return !r.excluded(); });
    cert.kind = survivors ? CertificateKind::Inconclusive : CertificateKind::Exhaustive;
    return cert;
}

std::optional<SynthesizedAlgorithm> synthesize_upper_bound(const MatrixSpec& mat, unsigned budget,
                                                           const BigInt& coeff_bound) {
    validate_shape(mat);
    std::vector<BigInt> flat = mat.flatten_explicit();
    if (coeff_bound < 1)
        throw std::invalid_argument("synthesize_upper_bound: coeff_bound must be positive");
    if (!fits_ulong(coeff_bound) || to_ulong(coeff_bound) > 1000000)
        throw std::invalid_argument("synthesize_upper_bound: coeff_bound too large");
    const long bound = static_cast<long>(to_ulong(coeff_bound));

    for (unsigned C = 0; C <= budget; ++C) {
        TopologyStream stream(mat.n, mat.m, C, true);
        for (std::uint64_t raw : canonical_indices(mat.n, mat.m, C)) {
            if (auto got = try_topology(stream.decode(raw), mat, flat, bound)) return got;
        }
    }
    return std::nullopt;
}

MatrixSpec canonical_structural_matrix(unsigned m, unsigned n) {
    WitnessSequence win = theorem1_windows(m, n);
    const unsigned N = m * n;
    const BigInt bigN(N);
    const BigInt d = bigint_pow(bigN, N - 1);

    std::vector<PowerExpr> flat;
    flat.reserve(N);
    flat.push_back(win.windows.front().high.value());
    const PowerExpr twoH = flat.front();
    for (unsigned l = 2; l + 1 <= N; ++l) {
        BigInt e = BigInt(l) * bigint_pow(d, l) + 1;
        flat.push_back(PowerExpr::pow(twoH, PowerExpr::integer(e)));
    }
    flat.push_back(win.windows.back().low);

    MatrixSpec mat;
    mat.m = m;
    mat.n = n;
    for (unsigned s = 0; s < m; ++s) {
        std::vector<MatrixSpec::Entry> row;
        for (unsigned t = 0; t < n; ++t)
            row.push_back(flat[static_cast<std::size_t>(s) * n + t]);
        mat.entries.push_back(std::move(row));
    }
    return mat;
}

Certificate certify_structural(const MatrixSpec& mat) {
    validate_shape(mat);
    WitnessSequence win = theorem1_windows(mat.m, mat.n);
    const unsigned N = mat.m * mat.n;

    Certificate cert;
    cert.matrix = mat;
    cert.sym_d = win.sym_d;
    cert.sym_H = win.sym_H;

    std::vector<PowerExpr> entries = symbolic_entries(mat);
    bool ok = true;
    auto note_failure = [&](unsigned entry, const char* bound) {
        ok = false;
        if (cert.refusal.empty())
            cert.refusal =
                "entry " + std::to_string(entry) + ": " + bound + " bound violated";
    };
    for (unsigned l = 1; l <= N; ++l) {
        const WitnessWindow& w = win.windows[l - 1];
        const PowerExpr& e = entries[l - 1];
        const auto low_order = PowerExpr::cmp(e, w.low);
        const bool low_holds = w.inclusive_low ? low_order >= 0 : low_order > 0;
        cert.window_checks.push_back(WindowCheck{
            l, "lower", render_comparison(e, w.inclusive_low ? ">=" : ">", w.low), low_holds});
        if (!low_holds) note_failure(l, "lower");
        if (w.high) {
            const bool high_holds = PowerExpr::cmp(e, *w.high) <= 0;
            cert.window_checks.push_back(
                WindowCheck{l, "upper", render_comparison(e, "<=", *w.high), high_holds});
            if (!high_holds) note_failure(l, "upper");
        }
    }

    ChainReport chain = verify_concluding_chain(N, std::max(8u, N));
    cert.chain_checks = chain.checks;
    for (const ChainCheck& c : chain.checks)
        if (!c.holds) {
            ok = false;
            if (cert.refusal.empty()) cert.refusal = "chain check failed: " + c.name;
        }

    if (ok) {
        cert.kind = CertificateKind::Structural;
        cert.note = kStructuralNote;
    }
    return cert;
}

bool recheck_certificate(const Certificate& cert) {
    if (cert.kind == CertificateKind::Structural || !cert.matrix.all_explicit())
        return recheck_structural(cert);
    return recheck_lower(cert);
}

}  // namespace linforms
