#pragma once

// LOCC adaptation: the same solution data realizes a deterministic
// transformation of a d x d bipartite pure state. One party measures with
// the diagonal POVM M_i = sqrt(p_i) diag(c_ij / psi_j); the outcome decides
// a correcting permutation applied to both parties.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cohtrans/errors.hpp"
#include "cohtrans/kraus.hpp"
#include "cohtrans/solver.hpp"
#include "cohtrans/state.hpp"

namespace cohtrans {

/// Measurement plan for a bipartite transformation: d diagonal measurement
/// operators plus the per-outcome correcting permutations (nullopt is the
/// identity outcome).
struct LoccPlan {
    int dim = 0;
    std::vector<std::vector<double>> measurement;         ///< diagonal of each M_i
    std::vector<std::optional<Transposition>> corrections;
    ProbabilityVector probabilities;
};

/// The diagonal factor of each Kraus operator, with the permutation peeled
/// off into the correction list.
inline LoccPlan build_locc_plan(const PermutationSet& sp,
                                const ProbabilityVector& probabilities,
                                const CoefficientMatrix& cmat,
                                const CoherenceVector& source,
                                const Tolerances& tol = default_tolerances()) {
    const int d = source.dim();
    if (sp.d != d || cmat.d != d)
        throw DimensionMismatch("build_locc_plan: dimension mismatch");
    for (int j = 1; j <= d; ++j)
        if (source.amp(j) <= tol.amp)
            throw ZeroAmplitudeError("build_locc_plan: source amplitude " +
                                     std::to_string(j) + " vanishes");
    LoccPlan plan;
    plan.dim = d;
    plan.probabilities = probabilities;
    for (int i = 0; i < sp.size(); ++i) {
        const double p = probabilities[static_cast<std::size_t>(i)];
        std::vector<double> diag(static_cast<std::size_t>(d), 0.0);
        if (p > 0.0)
            for (int j = 1; j <= d; ++j)
                diag[static_cast<std::size_t>(j - 1)] =
                    std::sqrt(p) * cmat.at(i, j) / source.amp(j);
        plan.measurement.push_back(std::move(diag));
        plan.corrections.push_back(sp.member(i));
    }
    return plan;
}

/// One measurement outcome of the simulated protocol.
struct LoccOutcome {
    double probability = 0.0;
    double overlap = 1.0;  ///< |<Phi|corrected state>|; 1 by convention at p = 0
};

struct LoccReport {
    std::vector<LoccOutcome> outcomes;
    double total_probability = 0.0;
};

/// Full d^2 simulation: prepares |Psi> = sum psi_j |jj>, applies each
/// M_i (x) I, normalizes, applies U_i (x) U_i, and reports the overlap with
/// the target |Phi> = sum phi_j |jj>. Guarded to d <= 16.
inline LoccReport simulate_locc(const LoccPlan& plan, const CoherenceVector& source,
                                const CoherenceVector& target,
                                const Tolerances& tol = default_tolerances()) {
    const int d = source.dim();
    if (d > 16)
        throw DimensionTooLarge("simulate_locc: d = " + std::to_string(d) + " > 16");
    if (plan.dim != d || target.dim() != d)
        throw DimensionMismatch("simulate_locc: dimension mismatch");
    const auto idx = [d](int a, int b) { return a * d + b; };  // 0-based |a>|b>
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(d * d);
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(d * d);
    for (int j = 0; j < d; ++j) {
        psi(idx(j, j)) = source.amps()[static_cast<std::size_t>(j)];
        phi(idx(j, j)) = target.amps()[static_cast<std::size_t>(j)];
    }
    LoccReport report;
    for (std::size_t i = 0; i < plan.measurement.size(); ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(d * d);
        for (int a = 0; a < d; ++a) {
            const double m = plan.measurement[i][static_cast<std::size_t>(a)];
            if (m == 0.0) continue;
            for (int b = 0; b < d; ++b) v(idx(a, b)) = m * psi(idx(a, b));
        }
        LoccOutcome outcome;
        outcome.probability = v.squaredNorm();
        report.total_probability += outcome.probability;
        if (outcome.probability > tol.prob) {
            v /= v.norm();
            Eigen::VectorXd w = Eigen::VectorXd::Zero(d * d);
            const auto& corr = plan.corrections[i];
            for (int a = 0; a < d; ++a) {
                const int ra = corr ? corr->apply(a + 1) - 1 : a;
                for (int b = 0; b < d; ++b) {
                    const int rb = corr ? corr->apply(b + 1) - 1 : b;
                    w(idx(ra, rb)) = v(idx(a, b));
                }
            }
            outcome.overlap = std::abs(w.dot(phi));
        }
        report.outcomes.push_back(outcome);
    }
    return report;
}

}  // namespace cohtrans
