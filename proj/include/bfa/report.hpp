#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace bfa {

// Relative tolerance for floating-point comparisons in inequality checks.
inline constexpr long double kRelTol = 1e-9L;

// lhs <= rhs up to kRelTol relative slack (exact comparisons pass directly).
inline bool within_relative(long double lhs, long double rhs,
                            long double tol = kRelTol) {
    if (lhs <= rhs) return true;
    long double scale = std::max({1.0L, fabsl(lhs), fabsl(rhs)});
    return lhs - rhs <= tol * scale;
}

// One verified inequality: lhs <= rhs, slack = rhs - lhs. `exact` marks rows
// decided entirely in integer arithmetic (floating values shown for display).
// Three-term right hand sides record the per-term contributions; `witness`
// names the maximizing character when the check tracks one.
struct InequalityReport {
    std::string lemma;   // short id of the inequality being checked
    std::string params;  // rendered parameters, "k=3,d=2"
    long double lhs = 0;
    long double rhs = 0;
    long double slack = 0;
    bool pass = false;
    bool exact = false;
    long double term1 = 0;
    long double term2 = 0;
    long double term3 = 0;
    std::string witness;
};

inline InequalityReport make_report(std::string lemma, std::string params,
                                    long double lhs, long double rhs,
                                    bool exact = false) {
    InequalityReport r;
    r.lemma = std::move(lemma);
    r.params = std::move(params);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.pass = lhs <= rhs;
    r.exact = exact;
    return r;
}

}  // namespace bfa
