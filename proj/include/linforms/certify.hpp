#ifndef LINFORMS_CERTIFY_HPP
#define LINFORMS_CERTIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "linforms/bigint.hpp"
#include "linforms/matrix.hpp"
#include "linforms/powerexpr.hpp"
#include "linforms/slp.hpp"
#include "linforms/witness.hpp"

namespace linforms {

inline constexpr const char* kToolVersion = "linforms 0.1.0";

enum class CertificateKind { Exhaustive, Structural, Inconclusive };

const char* certificate_kind_name(CertificateKind kind);

/// Outcome for one examined topology. An excluded topology carries a
/// relation among its parametrized entries that is nonzero at the target
/// matrix; a survivor carries the reason it could not be excluded.
struct TopologyRecord {
    std::string topology;
    std::string annihilator;  ///< relation text, empty for survivors
    BigInt value = 0;         ///< relation value at the flattened entries
    std::string reason;       ///< "annihilator_vanished" | "cap_exhausted"

    bool excluded() const { return reason.empty(); }
};

/// One bound comparison in a structural certificate's transcript.
struct WindowCheck {
    unsigned entry = 0;      ///< 1-based row-major position
    std::string bound;       ///< "lower" | "upper"
    std::string comparison;  ///< rendered inequality
    bool holds = false;
};

/// Machine-checkable complexity claim. Exhaustive: every topology cheaper
/// than target is excluded by an evaluated relation, so C(matrix) >= target
/// over any field. Structural: the symbolic entries sit inside their
/// windows and the growth chain verifies; the complexity value itself is
/// conditional on the windowed-matrix theorem, as the note states.
/// Inconclusive: some topology survived, or a window check failed; never a
/// false claim.
struct Certificate {
    CertificateKind kind = CertificateKind::Inconclusive;
    MatrixSpec matrix;
    unsigned target = 0;
    unsigned budget = 0;  ///< largest step count examined
    unsigned degree_cap = 0;
    std::vector<TopologyRecord> records;

    std::optional<PowerExpr> sym_d;
    std::optional<PowerExpr> sym_H;
    std::vector<WindowCheck> window_checks;
    std::vector<ChainCheck> chain_checks;
    std::string note;
    std::string refusal;  ///< names the first failing entry and bound

    bool refused() const { return !refusal.empty(); }
};

/// Tries to exclude every topology with fewer than target steps by finding
/// relations (up to three per topology) among its parametrized entries that
/// evaluate to nonzero at the matrix. Requires explicit entries and
/// target <= m*(n-1). threads = 0 means the hardware count; the result is
/// identical for every thread count.
Certificate certify_lower_bound(const MatrixSpec& mat, unsigned target, unsigned degree_cap,
                                unsigned threads = 0);

struct SynthesizedAlgorithm {
    LinearAlgorithm algorithm;
    OutputSpec outputs;
    std::string topology;  ///< the skeleton the coefficients instantiate
};

/// Searches every topology with at most budget steps for rational
/// coefficients reproducing the matrix exactly. Unknowns pinned by a single
/// remaining equation are back-substituted; any left over are scanned over
/// reduced rationals with |numerator| and denominator <= coeff_bound. The
/// returned algorithm is re-verified against the matrix via eval_forms.
/// nullopt is a search failure, not a nonexistence proof.
std::optional<SynthesizedAlgorithm> synthesize_upper_bound(const MatrixSpec& mat, unsigned budget,
                                                           const BigInt& coeff_bound);

/// Checks every entry of a symbolic matrix against its theorem window and
/// verifies the growth chain for N = m*n. On success the certificate is
/// STRUCTURAL and carries the (d, H) pair and the full transcript; on a
/// violation it is refused with the failing entry and bound named.
Certificate certify_structural(const MatrixSpec& mat);

/// The canonical in-window symbolic matrix for an m x n shape: entry 1 at
/// its window top 2H, middle entries at the section points (2H)^(l*d^l + 1),
/// and the last entry exactly at the final window floor.
MatrixSpec canonical_structural_matrix(unsigned m, unsigned n);

/// Re-derives every claim of a certificate from its own content:
/// re-enumerates the topology stream, re-composes and re-evaluates each
/// relation, re-runs the survivor searches, re-compares windows and chain
/// checks. True iff everything verifies. Throws std::invalid_argument on
/// content that cannot be parsed.
bool recheck_certificate(const Certificate& cert);

}  // namespace linforms

#endif
