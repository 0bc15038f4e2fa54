#pragma once

namespace cohtrans {

/// Numerical tolerances used throughout the library. All comparisons in the
/// math core go through one of these knobs; d stays small (<= ~64), so dense
/// double arithmetic keeps errors far below the defaults.
struct Tolerances {
    double norm = 1e-10;  ///< unit-norm checks (state vectors, trace)
    double amp  = 1e-12;  ///< zero-amplitude rejection threshold
    double maj  = 1e-12;  ///< majorization partial-sum slack and amplitude ties
    double psd  = 1e-9;   ///< positive-semidefiniteness slack
    double prob = 1e-10;  ///< negative-probability clamping threshold
    double res  = 1e-9;   ///< linear-system residual acceptance
    double comp = 1e-10;  ///< Kraus completeness residual
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

}  // namespace cohtrans
