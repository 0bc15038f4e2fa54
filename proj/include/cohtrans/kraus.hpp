#pragma once

// Kraus operator synthesis and channel verification. Operators are stored
// as generalized permutation (monomial) matrices -- at most one nonzero per
// column -- which makes incoherence a property of the representation and
// keeps its check exact.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cohtrans/errors.hpp"
#include "cohtrans/permutation.hpp"
#include "cohtrans/solver.hpp"
#include "cohtrans/state.hpp"
#include "cohtrans/tolerances.hpp"

namespace cohtrans {

/// Sparse monomial matrix: column j has its only (possibly zero) entry
/// value[j] at row[j]. The row map is injective on nonzero columns.
struct KrausOperator {
    int dim = 0;
    std::vector<int> row;      ///< 0-based target row per column
    std::vector<double> value; ///< entry value per column (0 allowed)

    static KrausOperator zero(int d) {
        KrausOperator k;
        k.dim = d;
        k.row.resize(static_cast<std::size_t>(d));
        k.value.assign(static_cast<std::size_t>(d), 0.0);
        for (int j = 0; j < d; ++j) k.row[static_cast<std::size_t>(j)] = j;
        return k;
    }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
        for (int j = 0; j < dim; ++j)
            m(row[static_cast<std::size_t>(j)], j) = value[static_cast<std::size_t>(j)];
        return m;
    }

    /// Row-map injectivity on nonzero columns (type invariant).
    bool injective() const {
        std::vector<bool> seen(static_cast<std::size_t>(dim), false);
        for (int j = 0; j < dim; ++j) {
            if (value[static_cast<std::size_t>(j)] == 0.0) continue;
            auto r = static_cast<std::size_t>(row[static_cast<std::size_t>(j)]);
            if (seen[r]) return false;
            seen[r] = true;
        }
        return true;
    }
};

/// A complete incoherent operation: Kraus operators with their measurement
/// probabilities and the permutation set they came from. For Protocol I
/// channels the operator count equals the dimension (zero-probability
/// operators are retained so indexing matches the solved SP); embedded
/// subspace channels carry one operator per subspace member.
struct IncoherentChannel {
    int dim = 0;
    std::vector<KrausOperator> kraus;
    ProbabilityVector probabilities;
    PermutationSet sp;
};

/// Materializes K_i = U_i sqrt(p_i) diag(c_ij / psi_j) from a feasible
/// solution. Operators with p_i = 0 are kept as zero operators so the count
/// stays at d.
inline IncoherentChannel build_kraus(const PermutationSet& sp,
                                     const ProbabilityVector& probabilities,
                                     const CoefficientMatrix& cmat,
                                     const CoherenceVector& source,
                                     const Tolerances& tol = default_tolerances()) {
    const int d = source.dim();
    if (sp.d != d || cmat.d != d)
        throw DimensionMismatch("build_kraus: dimension mismatch");
    if (probabilities.size() != sp.size())
        throw DimensionMismatch("build_kraus: probability count != SP size");
    for (int j = 1; j <= d; ++j)
        if (source.amp(j) <= tol.amp)
            throw ZeroAmplitudeError("build_kraus: source amplitude " +
                                     std::to_string(j) + " vanishes");
    IncoherentChannel ch;
    ch.dim = d;
    ch.probabilities = probabilities;
    ch.sp = sp;
    ch.kraus.reserve(static_cast<std::size_t>(sp.size()));
    for (int i = 0; i < sp.size(); ++i) {
        const double p = probabilities[static_cast<std::size_t>(i)];
        KrausOperator k = KrausOperator::zero(d);
        const auto member = sp.member(i);
        for (int j = 1; j <= d; ++j) {
            const int target_row = member ? member->apply(j) : j;
            k.row[static_cast<std::size_t>(j - 1)] = target_row - 1;
            if (p > 0.0)
                k.value[static_cast<std::size_t>(j - 1)] =
                    std::sqrt(p) * cmat.at(i, j) / source.amp(j);
        }
        ch.kraus.push_back(std::move(k));
    }
    return ch;
}

/// Max-norm of sum K_i^dag K_i - I, computed densely.
inline double verify_completeness(const IncoherentChannel& channel) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(channel.dim, channel.dim);
    for (const auto& k : channel.kraus) {
        const Eigen::MatrixXd m = k.dense();
        acc += m.transpose() * m;
    }
    acc -= Eigen::MatrixXd::Identity(channel.dim, channel.dim);
    return acc.cwiseAbs().maxCoeff();
}

/// Applies the channel: sum K_i rho K_i^dag. Monomial structure lets each
/// term be a relabel-and-scale of rho.
inline DensityMatrix apply_channel(const IncoherentChannel& channel,
                                   const DensityMatrix& rho) {
    const int d = channel.dim;
    if (rho.dim() != d)
        throw DimensionMismatch("apply_channel: channel dim " + std::to_string(d) +
                                " vs state dim " + std::to_string(rho.dim()));
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
    for (const auto& k : channel.kraus) {
        for (int a = 0; a < d; ++a) {
            const double va = k.value[static_cast<std::size_t>(a)];
            if (va == 0.0) continue;
            const int ra = k.row[static_cast<std::size_t>(a)];
            for (int b = 0; b < d; ++b) {
                const double vb = k.value[static_cast<std::size_t>(b)];
                if (vb == 0.0) continue;
                out(ra, k.row[static_cast<std::size_t>(b)]) += va * rho.entries(a, b) * vb;
            }
        }
    }
    return DensityMatrix{std::move(out)};
}

/// Structural incoherence of a dense operator: at most one nonzero per
/// column, exactly (no tolerance).
inline bool is_incoherent(const Eigen::MatrixXd& op) {
    for (Eigen::Index j = 0; j < op.cols(); ++j) {
        int nonzeros = 0;
        for (Eigen::Index i = 0; i < op.rows(); ++i)
            if (op(i, j) != 0.0) ++nonzeros;
        if (nonzeros > 1) return false;
    }
    return true;
}

/// Every Kraus operator of the channel maps basis states to basis states.
inline bool verify_incoherent(const IncoherentChannel& channel) {
    for (const auto& k : channel.kraus)
        if (!is_incoherent(k.dense()) || !k.injective()) return false;
    return true;
}

}  // namespace cohtrans
