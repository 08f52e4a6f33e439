#pragma once

#include <variant>

#include "confl/control.hpp"
#include "confl/term.hpp"

namespace confl {

/// Symbol precedence as ranks; equal ranks are incomparable. A total
/// order assigns pairwise-distinct ranks.
struct Precedence {
    std::map<std::string, int> rank;

    bool greater(const std::string& f, const std::string& g) const {
        auto fi = rank.find(f), gi = rank.find(g);
        int fr = fi == rank.end() ? 0 : fi->second;
        int gr = gi == rank.end() ? 0 : gi->second;
        return fr > gr;
    }
};

/// Knuth-Bendix weights. Admissibility: every constant weighs at least
/// w0, and a unary symbol of weight zero must be maximal in the
/// precedence.
struct WeightFn {
    long w0 = 1;
    std::map<std::string, long> weights;

    long weight_of(const std::string& symbol) const {
        auto it = weights.find(symbol);
        return it == weights.end() ? 1 : it->second;
    }
};

/// Linear interpretation over the naturals: symbol f of arity n maps to
/// a0 + a1*x1 + ... + an*xn with a0 >= 0 and ai >= 1 (strict
/// monotonicity).
struct LinearInterp {
    // coefficient vector [a0, a1, ..., an] per symbol
    std::map<std::string, std::vector<long>> coeffs;
};

struct InterpCert {
    LinearInterp interp;
};
struct LpoCert {
    Precedence prec;
};
struct KboCert {
    Precedence prec;
    WeightFn weights;
};
using TerminationCert = std::variant<std::monostate, InterpCert, LpoCert, KboCert>;

enum class TermStatus { Terminating, Unknown };

struct TermResult {
    TermStatus status = TermStatus::Unknown;
    TerminationCert cert;
    std::string describe() const;
};

struct TerminationBudget {
    bool lpo_enabled = true;
    bool kbo_enabled = true;
    bool interp_enabled = true;
    int coeff_bound = 2;
    long weight_bound = 2;
    Duration time_cap = Duration(2000);
};

/// Recursive evaluation a0 + sum(ai * [ti]). Throws on a variable missing
/// from the assignment.
long interp_value(const TermPtr& t, const LinearInterp& interp,
                  const std::map<std::string, long>& assignment);

/// Symbolic strict dominance of every rule's lhs polynomial over its rhs
/// polynomial: all variable coefficients >= pointwise, and either the
/// constant strictly greater, or some variable coefficient strictly
/// greater with the constant >=.
bool interp_orients(const Trs& trs, const LinearInterp& interp);

bool lpo_greater(const TermPtr& s, const TermPtr& t, const Precedence& prec);

/// Standard KBO with the variable-occurrence condition and lexicographic
/// tie-break. Throws std::invalid_argument when the weight function is
/// inadmissible for the symbols of s and t.
bool kbo_greater(const TermPtr& s, const TermPtr& t, const Precedence& prec, const WeightFn& w);

bool weights_admissible(const WeightFn& w, const Precedence& prec,
                        const std::map<std::string, int>& signature);

/// Tries the enabled orders in turn: LPO and KBO over precedence
/// candidates (exhaustive for up to 6 symbols, randomized restarts
/// above), then linear interpretations with coefficients bounded by
/// coeff_bound. Returns the first certificate found, else Unknown.
/// The time cap is a cooperative deadline checked between candidates.
TermResult prove_termination(const Trs& trs, const TerminationBudget& budget = {},
                             const RunControl& ctl = RunControl::unbounded());

/// Replays a certificate: every rule must decrease strictly under the
/// certified order.
bool validate_termination(const Trs& trs, const TermResult& result);

}  // namespace confl
