#pragma once

// Protocol II: a d-level transformation decomposed into a cascade of
// d'-level subspace transformations through intermediate states. Each step
// fixes d'-1 further target coefficients and parks the norm surplus in a
// single balance coefficient phi'; the chain preserves majorization at
// every link (mu(current) < mu(eta) < mu(target)).
//
// The default proposal fixes the d'-1 trailing unfixed coefficients with
// the balance placed just before them. When that breaks descending order or
// majorization, a repair search re-distributes the newly fixed coefficients
// between the leading and trailing ends of the unfixed range and scans the
// balance position, accepting the first candidate that keeps the sandwich.
// Repair candidates are ordered leading-heavy first. Correctness rests on
// the sandwich assertion, not on the heuristic.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cohtrans/errors.hpp"
#include "cohtrans/kraus.hpp"
#include "cohtrans/solver.hpp"
#include "cohtrans/state.hpp"
#include "cohtrans/tolerances.hpp"

namespace cohtrans {

/// One link of the chain: the state reached, which levels already carry
/// their target value, and where the balance coefficient sits (0 = none,
/// i.e. the state is the target itself).
struct IntermediateState {
    CoherenceVector state;
    std::vector<int> fixed_levels;
    int balance_level = 0;
    bool repaired = false;  ///< true when the trailing default was rejected
};

/// One executed step of a plan.
struct PlanStep {
    IntermediateState target_state;
    std::vector<int> active_levels;    ///< 1-based levels the step acts on
    double block_norm = 1.0;           ///< sqrt of the active probability mass
    PermutationSet local_sp;           ///< SP of the subspace solve (local labels)
    ProbabilityVector probabilities;   ///< subspace solve probabilities
    IncoherentChannel channel;         ///< embedded full-dimension channel
};

struct TransformPlan {
    int d = 0;
    int d_prime = 5;
    std::vector<PlanStep> steps;
    bool fallback_used = false;  ///< plan degenerated to one Protocol-I step

    int step_count() const { return static_cast<int>(steps.size()); }
};

namespace detail {

inline bool amp_equal(double a, double b, const Tolerances& tol) {
    return std::abs(a - b) <= tol.maj;
}

/// 1-based levels where current still differs from target.
inline std::vector<int> unfixed_levels(const CoherenceVector& current,
                                       const CoherenceVector& target,
                                       const Tolerances& tol) {
    std::vector<int> u;
    for (int j = 1; j <= current.dim(); ++j)
        if (!amp_equal(current.amp(j), target.amp(j), tol)) u.push_back(j);
    return u;
}

inline std::vector<int> equal_levels(const CoherenceVector& a, const CoherenceVector& b,
                                     const Tolerances& tol) {
    std::vector<int> f;
    for (int j = 1; j <= a.dim(); ++j)
        if (amp_equal(a.amp(j), b.amp(j), tol)) f.push_back(j);
    return f;
}

}  // namespace detail

/// Balance coefficient for a contiguous trailing block {first_level..d}:
/// the value phi' that replaces the block's leading source entry when the
/// rest of the block takes its target values, preserving total norm.
inline double balance_coefficient(const CoherenceVector& source,
                                  const CoherenceVector& target, int first_level,
                                  const Tolerances& tol = default_tolerances()) {
    const int d = source.dim();
    if (target.dim() != d)
        throw DimensionMismatch("balance_coefficient: dimension mismatch");
    if (first_level < 1 || first_level > d)
        throw BlockMismatch("balance_coefficient: block start out of range");
    double sq = 0.0;
    for (int j = first_level; j <= d; ++j) sq += source.mu_at(j);
    for (int j = first_level + 1; j <= d; ++j) sq -= target.mu_at(j);
    if (sq < -tol.norm)
        throw NegativeRadicand("balance_coefficient: negative radicand " +
                               std::to_string(sq));
    return std::sqrt(std::max(sq, 0.0));
}

namespace detail {

/// Builds the candidate state that fixes `newly_fixed` to target values and
/// places the balance at `balance_pos`, keeping all other levels at their
/// current values. Returns nullopt when the result is not a valid descending
/// coherence vector or breaks the majorization sandwich.
inline std::optional<IntermediateState> try_candidate(
    const CoherenceVector& current, const CoherenceVector& target,
    const std::vector<int>& newly_fixed, int balance_pos, const Tolerances& tol) {
    double balance_sq = current.mu_at(balance_pos);
    for (int level : newly_fixed)
        balance_sq += current.mu_at(level) - target.mu_at(level);
    if (balance_sq <= tol.amp * tol.amp) return std::nullopt;

    std::vector<double> amps = current.amps();
    for (int level : newly_fixed)
        amps[static_cast<std::size_t>(level - 1)] = target.amp(level);
    amps[static_cast<std::size_t>(balance_pos - 1)] = std::sqrt(balance_sq);
    for (std::size_t i = 1; i < amps.size(); ++i)
        if (amps[i] > amps[i - 1] + tol.maj) return std::nullopt;

    std::optional<CoherenceVector> eta;
    try {
        eta.emplace(std::move(amps), tol);
    } catch (const Error&) {
        return std::nullopt;  // rounding pushed the candidate out of shape
    }
    if (!majorizes(*eta, current, tol).holds) return std::nullopt;
    if (!majorizes(target, *eta, tol).holds) return std::nullopt;
    auto fixed = equal_levels(*eta, target, tol);
    return IntermediateState{std::move(*eta), std::move(fixed), balance_pos, false};
}

}  // namespace detail

/// All acceptable intermediates for one step, in search order: the trailing
/// default first, then the repair candidates. Exposed for diagnostics;
/// propose_intermediate takes the front.
inline std::vector<IntermediateState> enumerate_intermediates(
    const CoherenceVector& current, const CoherenceVector& target, int d_prime,
    const Tolerances& tol = default_tolerances()) {
    const auto unfixed = detail::unfixed_levels(current, target, tol);
    const int m = static_cast<int>(unfixed.size());
    std::vector<IntermediateState> found;
    if (m == 0) return found;
    if (m <= d_prime) {
        found.push_back(IntermediateState{target, detail::equal_levels(target, target, tol), 0});
        return found;
    }
    auto consider = [&](const std::vector<int>& newly_fixed, int balance_pos,
                        bool repaired) {
        if (auto cand = detail::try_candidate(current, target, newly_fixed, balance_pos, tol)) {
            cand->repaired = repaired;
            // distinct candidates can coincide numerically; keep one copy
            for (const auto& f : found)
                if (f.state == cand->state) return;
            found.push_back(std::move(*cand));
        }
    };
    // default: trailing d'-1 coefficients, balance just before them
    {
        std::vector<int> fixed(unfixed.end() - (d_prime - 1), unfixed.end());
        consider(fixed, unfixed[static_cast<std::size_t>(m - d_prime)], false);
    }
    // repair: k trailing + (d'-1-k) leading, leading-heavy first; balance
    // scanned over the remaining unfixed positions
    for (int k = 0; k <= d_prime - 2; ++k) {
        std::vector<int> fixed(unfixed.begin(), unfixed.begin() + (d_prime - 1 - k));
        fixed.insert(fixed.end(), unfixed.end() - k, unfixed.end());
        for (int pos = d_prime - 1 - k; pos < m - k; ++pos)
            consider(fixed, unfixed[static_cast<std::size_t>(pos)], true);
    }
    return found;
}

/// First acceptable intermediate (see enumerate_intermediates for the
/// order). Throws NoIntermediateFound when every candidate is rejected; the
/// caller is expected to fall back to single-step Protocol I.
inline IntermediateState propose_intermediate(const CoherenceVector& current,
                                              const CoherenceVector& target, int d_prime,
                                              const Tolerances& tol = default_tolerances()) {
    if (!majorizes(target, current, tol).holds)
        throw MajorizationError("propose_intermediate: target does not majorize current");
    const auto unfixed = detail::unfixed_levels(current, target, tol);
    if (unfixed.empty())
        throw Error("propose_intermediate: current already equals target");
    const int m = static_cast<int>(unfixed.size());
    if (m <= d_prime)
        return IntermediateState{target, detail::equal_levels(target, target, tol), 0};

    auto try_default = [&]() -> std::optional<IntermediateState> {
        std::vector<int> fixed(unfixed.end() - (d_prime - 1), unfixed.end());
        return detail::try_candidate(current, target, fixed,
                                     unfixed[static_cast<std::size_t>(m - d_prime)], tol);
    };
    if (auto cand = try_default()) return std::move(*cand);
    for (int k = 0; k <= d_prime - 2; ++k) {
        std::vector<int> fixed(unfixed.begin(), unfixed.begin() + (d_prime - 1 - k));
        fixed.insert(fixed.end(), unfixed.end() - k, unfixed.end());
        for (int pos = d_prime - 1 - k; pos < m - k; ++pos) {
            if (auto cand = detail::try_candidate(current, target, fixed,
                                                  unfixed[static_cast<std::size_t>(pos)], tol)) {
                cand->repaired = true;
                return std::move(*cand);
            }
        }
    }
    throw NoIntermediateFound("no valid intermediate between the given states");
}

/// Lifts a subspace channel to the full dimension: each embedded operator
/// acts as sqrt(p_i) times the identity outside the given levels and as the
/// subspace operator inside. Levels are 1-based, strictly increasing, one
/// per subspace dimension (a contiguous block is the common case; any
/// strictly increasing selection embeds the same way).
inline IncoherentChannel embed_subspace_channel(const IncoherentChannel& sub, int dim,
                                                const std::vector<int>& levels) {
    const int b = sub.dim;
    if (static_cast<int>(levels.size()) != b)
        throw BlockMismatch("embed_subspace_channel: level count " +
                            std::to_string(levels.size()) + " != subchannel dim " +
                            std::to_string(b));
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 1 || levels[i] > dim)
            throw BlockMismatch("embed_subspace_channel: level out of range");
        if (i > 0 && levels[i] <= levels[i - 1])
            throw BlockMismatch("embed_subspace_channel: levels must increase");
    }
    IncoherentChannel out;
    out.dim = dim;
    out.probabilities = sub.probabilities;
    out.sp.d = dim;
    for (const auto& t : sub.sp.transpositions)
        out.sp.transpositions.push_back(
            Transposition{levels[static_cast<std::size_t>(t.x - 1)],
                          levels[static_cast<std::size_t>(t.y - 1)]});
    for (std::size_t i = 0; i < sub.kraus.size(); ++i) {
        const double p = sub.probabilities[i];
        const double scale = p > 0.0 ? std::sqrt(p) : 0.0;
        KrausOperator k = KrausOperator::zero(dim);
        for (int j = 0; j < dim; ++j) k.value[static_cast<std::size_t>(j)] = scale;
        for (int j = 0; j < b; ++j) {
            const int col = levels[static_cast<std::size_t>(j)] - 1;
            const int local_row = sub.kraus[i].row[static_cast<std::size_t>(j)];
            k.row[static_cast<std::size_t>(col)] =
                levels[static_cast<std::size_t>(local_row)] - 1;
            k.value[static_cast<std::size_t>(col)] =
                sub.kraus[i].value[static_cast<std::size_t>(j)];
        }
        out.kraus.push_back(std::move(k));
    }
    return out;
}

namespace detail {

/// Restriction of a state to the given levels, renormalized.
inline std::pair<CoherenceVector, double> restrict_state(const CoherenceVector& v,
                                                         const std::vector<int>& levels,
                                                         const Tolerances& tol) {
    double sq = 0.0;
    for (int level : levels) sq += v.mu_at(level);
    const double norm = std::sqrt(sq);
    std::vector<double> amps;
    amps.reserve(levels.size());
    for (int level : levels) amps.push_back(v.amp(level) / norm);
    return {CoherenceVector(std::move(amps), tol), norm};
}

inline PlanStep make_step(const CoherenceVector& current, IntermediateState eta,
                          int dim, const Tolerances& tol) {
    auto active = unfixed_levels(current, eta.state, tol);
    auto [chi, norm_src] = restrict_state(current, active, tol);
    auto [chi_tilde, norm_tgt] = restrict_state(eta.state, active, tol);
    (void)norm_tgt;  // equals norm_src up to rounding: the complement is shared
    auto solution = find_feasible_sp(chi, chi_tilde, tol);
    auto local = build_kraus(solution.sp, solution.probabilities, solution.cmat, chi, tol);
    auto embedded = embed_subspace_channel(local, dim, active);
    return PlanStep{std::move(eta),      std::move(active),
                    norm_src,            std::move(solution.sp),
                    std::move(solution.probabilities), std::move(embedded)};
}

}  // namespace detail

/// Plans the cascade source -> eta_1 -> ... -> target with d'-level subspace
/// solutions. Each non-final step fixes exactly d'-1 further target
/// coefficients; the final step handles the at-most-d' remaining ones. If no
/// valid intermediate exists at some step (or a subspace solve fails), the
/// plan degenerates to a single full-dimension Protocol-I step and says so.
inline TransformPlan plan_sequence(const CoherenceVector& source,
                                   const CoherenceVector& target, int d_prime = 5,
                                   const Tolerances& tol = default_tolerances()) {
    const int d = source.dim();
    if (target.dim() != d)
        throw DimensionMismatch("plan_sequence: dimension mismatch");
    if (d_prime < 2 || d_prime > d)
        throw BlockMismatch("plan_sequence: d' must lie in [2, d]");
    {
        auto rep = majorizes(target, source, tol);
        if (!rep.holds)
            throw MajorizationError("plan_sequence: target does not majorize source (k=" +
                                    std::to_string(*rep.first_violation) + ")");
    }
    TransformPlan plan;
    plan.d = d;
    plan.d_prime = d_prime;
    try {
        CoherenceVector current = source;
        while (true) {
            const auto unfixed = detail::unfixed_levels(current, target, tol);
            if (unfixed.empty()) break;
            IntermediateState eta =
                static_cast<int>(unfixed.size()) <= d_prime
                    ? IntermediateState{target, detail::equal_levels(target, target, tol), 0}
                    : propose_intermediate(current, target, d_prime, tol);
            auto step = detail::make_step(current, std::move(eta), d, tol);
            current = step.target_state.state;
            plan.steps.push_back(std::move(step));
        }
        return plan;
    } catch (const NoIntermediateFound&) {
    } catch (const NoFeasibleSP&) {
    }
    // degenerate plan: one Protocol-I step over the full dimension
    plan.steps.clear();
    plan.fallback_used = true;
    auto solution = find_feasible_sp(source, target, tol);
    auto channel = build_kraus(solution.sp, solution.probabilities, solution.cmat, source, tol);
    std::vector<int> all_levels(static_cast<std::size_t>(d));
    for (int j = 1; j <= d; ++j) all_levels[static_cast<std::size_t>(j - 1)] = j;
    plan.steps.push_back(PlanStep{
        IntermediateState{target, detail::equal_levels(target, target, tol), 0},
        std::move(all_levels), 1.0, std::move(solution.sp),
        std::move(solution.probabilities), std::move(channel)});
    return plan;
}

/// Runs the cascade on a density matrix. An empty plan is the identity.
inline DensityMatrix execute_plan(const TransformPlan& plan, const DensityMatrix& rho) {
    DensityMatrix state = rho;
    for (const auto& step : plan.steps) state = apply_channel(step.channel, state);
    return state;
}

}  // namespace cohtrans
