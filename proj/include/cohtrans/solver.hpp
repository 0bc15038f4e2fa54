#pragma once

// Probability solver for candidate permutation sets. Given an SP and a
// target state, each member contributes one post-measurement row
// (the target amplitudes permuted by the member); the probabilities solve
// sum_i p_i c_ij^2 = psi_j^2. Feasibility means a nonnegative solution with
// small residual.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cohtrans/errors.hpp"
#include "cohtrans/permutation.hpp"
#include "cohtrans/state.hpp"
#include "cohtrans/tolerances.hpp"

namespace cohtrans {

/// Row i holds the coefficients of the i-th post-measurement state: the
/// target amplitudes with the i-th member's swap applied. Every row is a
/// permutation of the target, hence unit-norm.
struct CoefficientMatrix {
    int d = 0;
    std::vector<std::vector<double>> rows;

    double at(int i, int j) const {  // 0-based operator index, 1-based level
        return rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)];
    }
};

/// Measurement probabilities of one SP solution: nonnegative, summing to 1.
struct ProbabilityVector {
    std::vector<double> p;

    int size() const { return static_cast<int>(p.size()); }
    double operator[](std::size_t i) const { return p[i]; }
};

inline CoefficientMatrix coefficient_matrix(const PermutationSet& sp,
                                            const CoherenceVector& target) {
    if (sp.d != target.dim())
        throw DimensionMismatch("coefficient_matrix: SP and target dimensions differ");
    CoefficientMatrix cmat;
    cmat.d = sp.d;
    cmat.rows.reserve(static_cast<std::size_t>(sp.size()));
    cmat.rows.push_back(target.amps());
    for (const auto& t : sp.transpositions) {
        auto row = target.amps();
        std::swap(row[static_cast<std::size_t>(t.x - 1)],
                  row[static_cast<std::size_t>(t.y - 1)]);
        cmat.rows.push_back(std::move(row));
    }
    return cmat;
}

/// Why a candidate SP was rejected.
enum class InfeasibleReason {
    negative_probability,  ///< system solvable but some p_i < -tau_prob
    singular_residual,     ///< rank-deficient/inconsistent beyond tau_res
};

/// Total-function result of solve_probabilities.
struct SolveOutcome {
    std::optional<ProbabilityVector> probabilities;
    InfeasibleReason reason = InfeasibleReason::negative_probability;
    double residual = 0.0;

    bool feasible() const { return probabilities.has_value(); }
};

/// Solves sum_i p_i c_ij^2 = psi_j^2. The system matrix A[j][i] = c_ij^2 is
/// solved by a rank-revealing decomposition; on rank deficiency (ties in
/// target amplitudes make rows coincide) this yields the minimum-norm
/// least-squares solution, accepted iff the residual stays below tau_res.
/// Negative entries within tau_prob are clamped to zero and p renormalized.
inline SolveOutcome solve_probabilities(const CoefficientMatrix& cmat,
                                        const CoherenceVector& source,
                                        const Tolerances& tol = default_tolerances()) {
    if (cmat.d != source.dim())
        throw DimensionMismatch("solve_probabilities: dimension mismatch");
    const int d = cmat.d;
    const int n = static_cast<int>(cmat.rows.size());
    Eigen::MatrixXd A(d, n);
    Eigen::VectorXd b(d);
    for (int j = 1; j <= d; ++j) {
        b(j - 1) = source.mu_at(j);
        for (int i = 0; i < n; ++i) {
            const double c = cmat.at(i, j);
            A(j - 1, i) = c * c;
        }
    }
    Eigen::VectorXd p = A.completeOrthogonalDecomposition().solve(b);
    SolveOutcome out;
    out.residual = (A * p - b).cwiseAbs().maxCoeff();
    if (out.residual > tol.res) {
        out.reason = InfeasibleReason::singular_residual;
        return out;
    }
    if (p.minCoeff() < -tol.prob) {
        out.reason = InfeasibleReason::negative_probability;
        return out;
    }
    ProbabilityVector pv;
    pv.p.resize(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        pv.p[static_cast<std::size_t>(i)] = std::max(p(i), 0.0);
        sum += pv.p[static_cast<std::size_t>(i)];
    }
    for (auto& v : pv.p) v /= sum;
    out.probabilities = std::move(pv);
    return out;
}

/// Structural role of a transposition in its table, selecting which closed
/// form applies.
enum class ClosedFormKind {
    column_unique,   ///< alpha_v / gamma_vm
    row_unique,      ///< beta_k / gamma_hk
    adjacent_alpha,  ///< alpha_u / gamma_u(u+1)
    adjacent_beta,   ///< beta_{u+1} / gamma_u(u+1)
};

/// Partial-sum difference alpha_{x..k} = sum (phi_j^2 - psi_j^2), j in [x,k].
inline double alpha_sum(const CoherenceVector& source, const CoherenceVector& target,
                        int x, int k) {
    double s = 0.0;
    for (int j = x; j <= k; ++j) s += target.mu_at(j) - source.mu_at(j);
    return s;
}

/// Partial-sum difference beta_{l..y} = sum (psi_j^2 - phi_j^2), j in [l,y].
inline double beta_sum(const CoherenceVector& source, const CoherenceVector& target,
                       int l, int y) {
    return -alpha_sum(source, target, l, y);
}

/// Target-amplitude gap gamma_xy = phi_x^2 - phi_y^2, required positive.
inline double gamma_gap(const CoherenceVector& target, int x, int y,
                        const Tolerances& tol = default_tolerances()) {
    const double g = target.mu_at(x) - target.mu_at(y);
    if (g <= tol.amp * tol.amp)
        throw DegenerateGamma("gamma_" + std::to_string(x) + std::to_string(y) +
                              " vanishes (tied target amplitudes)");
    return g;
}

/// Closed-form probability of a structurally distinguished transposition.
inline double closed_form_probability(const Transposition& t, ClosedFormKind kind,
                                      const CoherenceVector& source,
                                      const CoherenceVector& target,
                                      const Tolerances& tol = default_tolerances()) {
    if ((kind == ClosedFormKind::adjacent_alpha || kind == ClosedFormKind::adjacent_beta) &&
        t.y != t.x + 1)
        throw Error("closed_form_probability: adjacent kind needs y = x+1");
    const double gamma = gamma_gap(target, t.x, t.y, tol);
    switch (kind) {
        case ClosedFormKind::column_unique:
            return alpha_sum(source, target, t.x, t.x) / gamma;
        case ClosedFormKind::row_unique:
            return beta_sum(source, target, t.y, t.y) / gamma;
        case ClosedFormKind::adjacent_alpha:
            return alpha_sum(source, target, t.x, t.x) / gamma;
        case ClosedFormKind::adjacent_beta:
            return beta_sum(source, target, t.y, t.y) / gamma;
    }
    return 0.0;  // unreachable
}

/// A fully solved SP for a concrete state pair.
struct SpSolution {
    PermutationSet sp;
    CoefficientMatrix cmat;
    ProbabilityVector probabilities;
};

namespace detail {

inline std::string describe(const PermutationSet& sp) {
    std::ostringstream os;
    os << "{I";
    for (const auto& t : sp.transpositions) os << ", (" << t.x << "," << t.y << ")";
    os << "}";
    return os.str();
}

/// Depth-first search for the lexicographically first feasible SP. It
/// visits candidate sets in SpEnumerator order but discards whole subtrees
/// that provably contain no feasible completion: once a level's candidate
/// entries are exhausted its touch set is final for every completion of
/// the branch, so an untouched level forces psi_j = phi_j, and a level
/// touched by exactly one member pins that member's probability to its
/// closed form. Pins exceeding total probability 1, or disagreeing on one
/// member, kill the branch, as do required levels outnumbering what the
/// remaining slots can cover. Only facts that hold for every completion
/// are used, so the first feasible set found is identical to the unpruned
/// scan's.
class FeasibleSearch {
public:
    FeasibleSearch(const PermutationTable& table, const CoherenceVector& source,
                   const CoherenceVector& target, const Tolerances& tol)
        : table_(table), source_(source), target_(target), tol_(tol) {
        n_ = table_.zeta();
        d_ = table_.d;
        need_ = d_ - 1;
        mandatory_ = mandatory_permutations(table_);
        is_mandatory_.assign(static_cast<std::size_t>(n_), false);
        cross_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), false);
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j)
                cross_[static_cast<std::size_t>(i * n_ + j)] =
                    crossing(entry(i), entry(j));
            for (const auto& m : mandatory_)
                if (entry(i) == m) is_mandatory_[static_cast<std::size_t>(i)] = true;
        }
        last_touch_.assign(static_cast<std::size_t>(d_) + 1, -1);
        for (int i = 0; i < n_; ++i) {
            last_touch_[static_cast<std::size_t>(entry(i).x)] = i;
            last_touch_[static_cast<std::size_t>(entry(i).y)] = i;
        }
        touch_.assign(static_cast<std::size_t>(d_) + 1, 0);
        owner_.assign(static_cast<std::size_t>(d_) + 1, -1);
        final_.assign(static_cast<std::size_t>(d_) + 1, false);
        const auto members = static_cast<std::size_t>(need_ > 0 ? need_ : 1);
        pin_value_.assign(members, 0.0);
        pin_set_.assign(members, false);
        member_gamma_.assign(members, 0.0);
        pin_budget_ = 1.0 + tol.res + d_ * tol.prob;
        // per-level flow requirement: alpha_v on columns, beta_v on rows
        requirement_.assign(static_cast<std::size_t>(d_) + 1, 0.0);
        std::vector<bool> is_column(static_cast<std::size_t>(d_) + 1, false);
        for (int v : table_.columns) is_column[static_cast<std::size_t>(v)] = true;
        for (int v = 1; v <= d_; ++v) {
            const double alpha = target.mu_at(v) - source.mu_at(v);
            requirement_[static_cast<std::size_t>(v)] =
                is_column[static_cast<std::size_t>(v)] ? alpha : -alpha;
        }
        uncovered_required_ = 0;
        required_.assign(static_cast<std::size_t>(d_) + 1, false);
        for (int v = 1; v <= d_; ++v)
            if (requirement_[static_cast<std::size_t>(v)] > tol.res) {
                required_[static_cast<std::size_t>(v)] = true;
                ++uncovered_required_;
            }
    }

    /// Runs the search. Returns the solution or nullopt; failure details
    /// accumulate in the attempt log.
    std::optional<SpSolution> run(std::ostringstream& attempts, long& pruned,
                                  long& flow_rejected, bool& any_candidate) {
        found_.reset();
        attempts_ = &attempts;
        pruned_ = 0;
        flow_rejected_ = 0;
        any_candidate_ = false;
        dfs(0);
        pruned = pruned_;
        flow_rejected = flow_rejected_;
        any_candidate = any_candidate_;
        return std::move(found_);
    }

private:
    struct PinUndo {
        int member;
        double value;
    };

    struct Frame {
        std::vector<int> levels;
        std::vector<PinUndo> pins;
    };

    const Transposition& entry(int i) const {
        return table_.entries[static_cast<std::size_t>(i)];
    }

    bool fits(int i) const {
        for (int j : chosen_idx_)
            if (cross_[static_cast<std::size_t>(i * n_ + j)]) return false;
        return true;
    }

    // Pins member m to its forced probability. Returns false when the pin
    // proves the branch infeasible; the pin is recorded either way so the
    // caller's frame can undo it.
    bool pin_member(int m, double value, Frame& frame) {
        const auto u = static_cast<std::size_t>(m);
        pin_set_[u] = true;
        pin_value_[u] = value;
        pin_sum_ += value;
        frame.pins.push_back(PinUndo{m, value});
        return pin_sum_ <= pin_budget_;
    }

    void unpin_member(int m, double value) {
        pin_set_[static_cast<std::size_t>(m)] = false;
        pin_sum_ -= value;
    }

    // Finalizes every level whose candidate entries are exhausted before
    // index i. Returns false when the branch is provably infeasible;
    // the caller must always unwind the frame afterwards.
    bool finalize_up_to(int i, Frame& frame) {
        bool alive = true;
        for (int v = 1; v <= d_; ++v) {
            const auto u = static_cast<std::size_t>(v);
            if (final_[u] || last_touch_[u] >= i) continue;
            final_[u] = true;
            frame.levels.push_back(v);
            const double diff = source_.mu_at(v) - target_.mu_at(v);
            if (touch_[u] == 0) {
                if (std::abs(diff) > tol_.res) alive = false;
                continue;
            }
            if (touch_[u] != 1) continue;
            const int m = owner_[u];
            const auto& t = chosen_[static_cast<std::size_t>(m)];
            const double gamma = member_gamma_[static_cast<std::size_t>(m)];
            if (gamma <= tol_.amp) continue;
            const double value = (v == t.x ? -diff : diff) / gamma;
            if (value < -tol_.prob) {
                alive = false;
                continue;
            }
            if (!pin_set_[static_cast<std::size_t>(m)]) {
                if (!pin_member(m, value, frame)) alive = false;
            } else if (std::abs(pin_value_[static_cast<std::size_t>(m)] - value) > tol_.res) {
                alive = false;
            }
        }
        return alive;
    }

    void unwind(const Frame& frame) {
        for (auto it = frame.pins.rbegin(); it != frame.pins.rend(); ++it)
            unpin_member(it->member, it->value);
        for (int v : frame.levels) final_[static_cast<std::size_t>(v)] = false;
    }

    void apply(int i) {
        const auto& t = entry(i);
        const int m = static_cast<int>(chosen_.size());
        chosen_.push_back(t);
        chosen_idx_.push_back(i);
        const double gamma = std::max(target_.mu_at(t.x) - target_.mu_at(t.y), 0.0);
        member_gamma_[static_cast<std::size_t>(m)] = gamma;
        for (int v : {t.x, t.y}) {
            const auto u = static_cast<std::size_t>(v);
            if (touch_[u] == 0 && required_[u]) --uncovered_required_;
            ++touch_[u];
            owner_[u] = m;
        }
    }

    void undo(int i) {
        // the member being removed is never pinned here: pins are unwound
        // by the frames of deeper nodes before control returns
        const auto& t = entry(i);
        for (int v : {t.x, t.y}) {
            const auto u = static_cast<std::size_t>(v);
            --touch_[u];
            if (touch_[u] == 0 && required_[u]) ++uncovered_required_;
        }
        chosen_.pop_back();
        chosen_idx_.pop_back();
        // owner entries are only read at touch count 1; restore by rescan
        for (int v : {t.x, t.y}) {
            const auto u = static_cast<std::size_t>(v);
            if (touch_[u] == 1) {
                for (std::size_t m = 0; m < chosen_.size(); ++m)
                    if (chosen_[m].x == v || chosen_[m].y == v)
                        owner_[u] = static_cast<int>(m);
            }
        }
    }

    // Fast feasibility verdict for a complete candidate. A pairwise
    // non-crossing set is a forest over the levels (a bipartite cycle would
    // force a crossing), and every level equation reads
    //   sum over incident arcs of p * gamma = alpha_v (column) or beta_v (row),
    // so the unique solution falls out of leaf elimination in O(d). Only
    // used when every gamma is non-degenerate, where it coincides with the
    // least-squares solution.
    bool tree_feasible() {
        auto R = requirement_;
        std::vector<int> deg(static_cast<std::size_t>(d_) + 1, 0);
        // arcs per node, at most two passes over chosen_
        std::vector<int> head(static_cast<std::size_t>(d_) + 1, -1);
        std::vector<int> next_arc(chosen_.size() * 2, -1);
        auto link = [&](int v, int arc_slot) {
            next_arc[static_cast<std::size_t>(arc_slot)] = head[static_cast<std::size_t>(v)];
            head[static_cast<std::size_t>(v)] = arc_slot;
            ++deg[static_cast<std::size_t>(v)];
        };
        for (std::size_t m = 0; m < chosen_.size(); ++m) {
            link(chosen_[m].x, static_cast<int>(2 * m));
            link(chosen_[m].y, static_cast<int>(2 * m + 1));
        }
        std::vector<bool> done(chosen_.size(), false);
        std::vector<int> leaves;
        for (int v = 1; v <= d_; ++v) {
            if (deg[static_cast<std::size_t>(v)] == 1) leaves.push_back(v);
            if (deg[static_cast<std::size_t>(v)] == 0 &&
                std::abs(R[static_cast<std::size_t>(v)]) > tol_.res)
                return false;
        }
        const double floor = -(tol_.prob + tol_.res);
        double total = 0.0;
        while (!leaves.empty()) {
            const int v = leaves.back();
            leaves.pop_back();
            if (deg[static_cast<std::size_t>(v)] != 1) continue;
            int slot = head[static_cast<std::size_t>(v)];
            while (done[static_cast<std::size_t>(slot / 2)])
                slot = next_arc[static_cast<std::size_t>(slot)];
            const auto m = static_cast<std::size_t>(slot / 2);
            const double w = R[static_cast<std::size_t>(v)];
            const double p = w / member_gamma_[m];
            if (p < floor) return false;
            total += p;
            done[m] = true;
            const int other = slot % 2 == 0 ? chosen_[m].y : chosen_[m].x;
            const auto o = static_cast<std::size_t>(other);
            R[o] -= w;
            R[static_cast<std::size_t>(v)] = 0.0;
            if (--deg[o] == 1)
                leaves.push_back(other);
            else if (deg[o] == 0 && std::abs(R[o]) > tol_.res)
                return false;
            deg[static_cast<std::size_t>(v)] = 0;
        }
        return total <= 1.0 + tol_.prob * d_ + tol_.res;
    }

    bool try_solve() {
        any_candidate_ = true;
        // near-degenerate gaps amplify flow rounding; leave the verdict to
        // the least-squares solve there
        constexpr double kFlowGammaFloor = 1e-6;
        bool degenerate = false;
        for (std::size_t m = 0; m < chosen_.size(); ++m)
            if (member_gamma_[m] <= kFlowGammaFloor) degenerate = true;
        if (!degenerate && !tree_feasible()) {
            ++flow_rejected_;
            return false;
        }
        PermutationSet sp = detail::make_sp(table_, mandatory_, chosen_);
        auto cmat = coefficient_matrix(sp, target_);
        auto outcome = solve_probabilities(cmat, source_, tol_);
        if (outcome.feasible()) {
            found_ = SpSolution{std::move(sp), std::move(cmat),
                                std::move(*outcome.probabilities)};
            return true;
        }
        *attempts_ << "  " << describe(sp) << ": "
                   << (outcome.reason == InfeasibleReason::negative_probability
                           ? "negative probability"
                           : "residual " + std::to_string(outcome.residual))
                   << "\n";
        return false;
    }

    bool dfs(int i) {
        if (static_cast<int>(chosen_.size()) == need_) return try_solve();
        const int slots = need_ - static_cast<int>(chosen_.size());
        if (i >= n_ || n_ - i < slots) return false;
        // every further choice covers at most two required levels
        if (uncovered_required_ > 2 * slots) return false;
        Frame frame;
        const bool alive = finalize_up_to(i, frame);
        bool found = false;
        if (alive) {
            if (fits(i)) {
                apply(i);
                found = dfs(i + 1);
                undo(i);
            }
            if (!found && !is_mandatory_[static_cast<std::size_t>(i)])
                found = dfs(i + 1);
        } else {
            ++pruned_;
        }
        unwind(frame);
        return found;
    }

    PermutationTable table_;
    CoherenceVector source_;
    CoherenceVector target_;
    Tolerances tol_;
    int n_ = 0, d_ = 0, need_ = 0;
    std::vector<Transposition> mandatory_;
    std::vector<bool> is_mandatory_;
    std::vector<bool> cross_;
    std::vector<int> last_touch_;
    std::vector<int> touch_;
    std::vector<int> owner_;
    std::vector<bool> final_;
    std::vector<Transposition> chosen_;
    std::vector<int> chosen_idx_;
    std::vector<double> pin_value_;
    std::vector<bool> pin_set_;
    std::vector<double> member_gamma_;
    std::vector<double> requirement_;
    std::vector<bool> required_;
    int uncovered_required_ = 0;
    double pin_sum_ = 0.0;
    double pin_budget_ = 1.0;
    std::optional<SpSolution> found_;
    std::ostringstream* attempts_ = nullptr;
    long pruned_ = 0;
    long flow_rejected_ = 0;
    bool any_candidate_ = false;
};

}  // namespace detail

/// First feasible SP in enumeration order, with its coefficient matrix and
/// probabilities. Deterministic: boundary subcases where several SPs are
/// feasible always pick the lexicographically first. Throws NoFeasibleSP
/// with the full attempt log otherwise -- that either means a tolerance
/// failure or a counterexample to the completeness of rules (i)-(v), and
/// both deserve loud reporting.
inline SpSolution find_feasible_sp(const CoherenceVector& source,
                                   const CoherenceVector& target,
                                   const Tolerances& tol = default_tolerances()) {
    const auto pattern = sign_pattern(source, target, tol);
    const auto table = build_table(pattern);
    detail::FeasibleSearch search(table, source, target, tol);
    std::ostringstream attempts;
    long pruned = 0;
    long flow_rejected = 0;
    bool any = false;
    if (auto solution = search.run(attempts, pruned, flow_rejected, any))
        return std::move(*solution);
    if (!any && pruned == 0)
        throw NoCandidateError("find_feasible_sp: enumeration produced no candidate SP");
    if (pruned > 0 || flow_rejected > 0)
        attempts << "  (" << pruned << " subtrees pruned, " << flow_rejected
                 << " candidates rejected by flow checks)\n";
    throw NoFeasibleSP("no feasible SP for the given pair; attempts:\n" + attempts.str());
}

/// A case pattern together with every SP found feasible for concrete
/// instances, tagged with a short description of the solution.
struct SolutionFamily {
    CasePattern pattern;
    std::vector<std::pair<PermutationSet, std::string>> feasible_sets;
    int n = 0;
};

/// All feasible SPs for one state pair, in enumeration order. n >= 1 for
/// every majorizing pair.
inline SolutionFamily enumerate_feasible(const CoherenceVector& source,
                                         const CoherenceVector& target,
                                         const Tolerances& tol = default_tolerances()) {
    SolutionFamily family;
    family.pattern = sign_pattern(source, target, tol);
    const auto table = build_table(family.pattern);
    SpEnumerator stream(table);
    while (auto sp = stream.next()) {
        auto outcome = solve_probabilities(coefficient_matrix(*sp, target), source, tol);
        if (!outcome.feasible()) continue;
        std::ostringstream os;
        os << "p = [";
        for (int i = 0; i < outcome.probabilities->size(); ++i)
            os << (i ? ", " : "") << outcome.probabilities->p[static_cast<std::size_t>(i)];
        os << "]";
        family.feasible_sets.emplace_back(std::move(*sp), os.str());
    }
    family.n = static_cast<int>(family.feasible_sets.size());
    return family;
}

/// Independent oracle: solves ALL (d-1)-subsets of the case table, ignoring
/// the mandatory and non-crossing filters, and returns every feasible one.
/// The pattern is taken from direct comparison (endpoints forced), so the
/// oracle also runs on non-majorizing pairs, where it must come back empty.
/// Guarded to d <= 7; the subset count explodes beyond that.
inline std::vector<std::pair<PermutationSet, ProbabilityVector>> brute_force_oracle(
    const CoherenceVector& source, const CoherenceVector& target,
    const Tolerances& tol = default_tolerances()) {
    const int d = source.dim();
    if (d > 7)
        throw DimensionTooLarge("brute_force_oracle: d = " + std::to_string(d) + " > 7");
    if (d != target.dim())
        throw DimensionMismatch("brute_force_oracle: dimension mismatch");
    CasePattern pattern;
    pattern.relations.resize(static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k)
        pattern.relations[static_cast<std::size_t>(k - 1)] =
            (source.amp(k) <= target.amp(k) + tol.maj) ? Relation::LE : Relation::GE;
    pattern.relations.front() = Relation::LE;
    pattern.relations.back() = Relation::GE;
    const auto table = build_table(pattern);

    std::vector<std::pair<PermutationSet, ProbabilityVector>> feasible;
    const int n = table.zeta();
    const int need = d - 1;
    std::vector<int> pick;
    auto solve_subset = [&]() {
        PermutationSet sp;
        sp.d = d;
        for (int i : pick) sp.transpositions.push_back(table.entries[static_cast<std::size_t>(i)]);
        auto outcome = solve_probabilities(coefficient_matrix(sp, target), source, tol);
        if (outcome.feasible())
            feasible.emplace_back(std::move(sp), std::move(*outcome.probabilities));
    };
    // plain lexicographic combinations; the oracle stays unfiltered
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(pick.size()) == need) {
            solve_subset();
            return;
        }
        for (int i = start; i <= n - (need - static_cast<int>(pick.size())); ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return feasible;
}

}  // namespace cohtrans
