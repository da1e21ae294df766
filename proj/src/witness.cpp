#include "linforms/witness.hpp"

#include <stdexcept>

namespace linforms {

namespace {

std::optional<std::string> explicit_violation(const WitnessSequence& seq) {
    if (seq.values.empty()) return "sequence has no values";
    if (seq.d < 3) return "growth exponent d must be at least 3";
    if (seq.H < 1) return "height parameter H must be at least 1";
    if (seq.values.front() <= seq.H) return "a_1 must exceed H";
    for (std::size_t i = 1; i < seq.values.size(); ++i) {
        BigInt required = 2 * seq.H * bigint_pow(seq.values[i - 1], static_cast<unsigned long>(seq.d));
        if (seq.values[i] < required)
            return "a_" + std::to_string(i + 1) + " is below 2H*a_" + std::to_string(i) + "^d";
    }
    return std::nullopt;
}

std::optional<std::string> symbolic_violation(const WitnessSequence& seq) {
    for (std::size_t i = 0; i < seq.windows.size(); ++i) {
        const WitnessWindow& w = seq.windows[i];
        if (w.high && PowerExpr::cmp(w.low, *w.high) >= 0)
            return "window " + std::to_string(i + 1) + " is empty";
    }
    return std::nullopt;
}

PowerExpr pe_int(const BigInt& v) { return PowerExpr::integer(v); }

/// N^(2N^(N^2)), the height parameter the window analysis instantiates.
PowerExpr window_height(unsigned n) {
    BigInt nn(static_cast<long>(n));
    return PowerExpr::pow(pe_int(nn),
                          PowerExpr::mul({pe_int(2), PowerExpr::pow(pe_int(nn), pe_int(nn * nn))}));
}

}  // namespace

void WitnessSequence::validate() const {
    std::optional<std::string> why =
        symbolic() ? symbolic_violation(*this) : explicit_violation(*this);
    if (why) throw std::invalid_argument("witness sequence invalid: " + *why);
}

bool WitnessSequence::admissible() const {
    return !(symbolic() ? symbolic_violation(*this) : explicit_violation(*this));
}

WitnessSequence build_sequence(long d, const BigInt& H, unsigned length, unsigned digit_cap) {
    if (H < 1) throw std::invalid_argument("build_sequence: H must be at least 1");
    if (length < 1) throw std::invalid_argument("build_sequence: length must be at least 1");
    if (digit_cap < 1) throw std::invalid_argument("build_sequence: digit cap must be positive");
    WitnessSequence seq;
    seq.d = d < 3 ? 3 : d;
    seq.H = H;
    auto expand = [digit_cap](const PowerExpr& e, std::size_t index) {
        std::optional<BigInt> v = e.to_bigint(digit_cap);
        if (!v)
            throw std::overflow_error("build_sequence: digit cap exceeded at entry " +
                                      std::to_string(index));
        return *v;
    };
    seq.values.push_back(expand(pe_int(H + 1), 1));
    for (unsigned i = 2; i <= length; ++i) {
        PowerExpr next = PowerExpr::mul(
            {pe_int(2 * H),
             PowerExpr::pow(pe_int(seq.values.back()), pe_int(BigInt(seq.d)))});
        seq.values.push_back(expand(next, i));
    }
    seq.validate();
    return seq;
}

BigInt check_nonvanish(const Polynomial& p, const WitnessSequence& seq) {
    if (seq.symbolic())
        throw std::invalid_argument("check_nonvanish: sequence must be explicit");
    if (p.is_zero()) throw std::invalid_argument("check_nonvanish: polynomial is zero");
    if (p.arity() != seq.values.size())
        throw std::invalid_argument("check_nonvanish: arity does not match sequence length");
    if (p.degree() > seq.d)
        throw std::invalid_argument("check_nonvanish: degree exceeds sequence parameter d");
    if (p.height() > seq.H)
        throw std::invalid_argument("check_nonvanish: height exceeds sequence parameter H");
    BigInt value = p.eval(seq.values);
    if (value == 0 && seq.admissible())
        throw std::logic_error(
            "check_nonvanish: zero value on an admissible sequence; this falsifies the "
            "non-vanishing guarantee");
    return value;
}

WitnessSequence theorem1_windows(unsigned m, unsigned n) {
    if (m < 1 || n < 1) throw std::invalid_argument("theorem1_windows: m, n must be positive");
    const unsigned N = m * n;
    if (N < 2) throw std::invalid_argument("theorem1_windows: need at least two entries");
    BigInt bN(static_cast<long>(N));
    WitnessSequence seq;
    seq.sym_H = window_height(N);
    seq.sym_d = PowerExpr::pow(pe_int(bN), pe_int(bN - 1));

    PowerExpr low1 = *seq.sym_H;
    seq.windows.push_back(WitnessWindow{low1, PowerExpr::mul({pe_int(2), low1}), false});

    for (unsigned l = 2; l + 1 <= N; ++l) {
        BigInt e = bN * bN + BigInt(l) * bN - BigInt(l);
        PowerExpr exponent =
            PowerExpr::mul({pe_int(BigInt(2L * l)), PowerExpr::pow(pe_int(bN), pe_int(e))});
        seq.windows.push_back(WitnessWindow{PowerExpr::pow(pe_int(bN), exponent),
                                            PowerExpr::pow(pe_int(2 * bN), exponent), false});
    }

    PowerExpr last_low = PowerExpr::pow(
        pe_int(2 * bN),
        PowerExpr::mul({pe_int(2), PowerExpr::pow(pe_int(bN), pe_int(2 * bN * bN - bN + 1))}));
    seq.windows.push_back(WitnessWindow{std::move(last_low), std::nullopt, true});
    return seq;
}

bool ChainReport::all_hold() const {
    for (const ChainCheck& c : checks)
        if (!c.holds) return false;
    return true;
}

ChainReport verify_concluding_chain(unsigned N, unsigned cap) {
    if (N < 2 || N > cap)
        throw std::invalid_argument("verify_concluding_chain: N out of the configured range");
    ChainReport report;
    report.N = N;

    PowerExpr H = window_height(N);
    PowerExpr twoH = PowerExpr::mul({pe_int(2), H});
    BigInt d = bigint_pow(BigInt(static_cast<long>(N)), static_cast<unsigned long>(N - 1));

    // Section windows: (H, 2H] for l=1, ((2H)^(l*d^l), (2H)^(l*d^l+1)] in
    // the middle, [(2H)^(N*d^N), inf) for l=N.
    std::vector<PowerExpr> sec_low, sec_high;
    sec_low.push_back(H);
    sec_high.push_back(twoH);
    for (unsigned l = 2; l <= N; ++l) {
        BigInt e = BigInt(static_cast<long>(l)) * bigint_pow(d, l);
        sec_low.push_back(PowerExpr::pow(twoH, pe_int(e)));
        sec_high.push_back(PowerExpr::pow(twoH, pe_int(e + 1)));
    }

    WitnessSequence thm = theorem1_windows(1, N);
    auto add = [&report](std::string name, bool holds) {
        report.checks.push_back(ChainCheck{std::move(name), holds});
    };

    add("a1 window nonempty: H < 2H", PowerExpr::cmp(H, twoH) < 0);
    for (unsigned l = 2; l + 1 <= N; ++l)
        add("a" + std::to_string(l) + " section window nonempty",
            PowerExpr::cmp(sec_low[l - 1], sec_high[l - 1]) < 0);

    for (unsigned l = 1; l + 1 <= N; ++l) {
        PowerExpr rhs = PowerExpr::mul(
            {twoH, PowerExpr::pow(sec_high[l - 1], pe_int(d))});
        add("chain step " + std::to_string(l) + "->" + std::to_string(l + 1) +
                ": next section low >= 2H*high^d",
            PowerExpr::cmp(sec_low[l], rhs) >= 0);
    }

    for (unsigned l = 1; l + 1 <= N; ++l) {
        bool low_ok = PowerExpr::cmp(thm.windows[l - 1].low, sec_low[l - 1]) <= 0;
        bool high_ok = PowerExpr::cmp(sec_high[l - 1], *thm.windows[l - 1].high) <= 0;
        add("a" + std::to_string(l) + " section window inside theorem window", low_ok && high_ok);
    }

    add("aN theorem floor >= section floor",
        PowerExpr::cmp(thm.windows[N - 1].low, sec_low[N - 1]) >= 0);

    PowerExpr final_rhs = PowerExpr::mul(
        {twoH, PowerExpr::pow(thm.windows[N - 2].high ? *thm.windows[N - 2].high
                                                      : thm.windows[N - 2].low,
                              pe_int(d))});
    add("final step: aN theorem floor >= 2H*(theorem high of a_{N-1})^d",
        PowerExpr::cmp(thm.windows[N - 1].low, final_rhs) >= 0);

    return report;
}

}  // namespace linforms
