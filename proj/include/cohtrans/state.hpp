#pragma once

// Canonical state representation: coherence vectors (descending positive
// amplitudes), their squared counterparts, and the majorization test that
// gates every deterministic transformation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cohtrans/errors.hpp"
#include "cohtrans/tolerances.hpp"

namespace cohtrans {

/// Squared amplitudes (probabilities) of a coherence vector, descending,
/// summing to one.
struct MuVector {
    std::vector<double> entries;

    int dim() const { return static_cast<int>(entries.size()); }
    double operator[](std::size_t i) const { return entries[i]; }
};

/// Pure coherent state in canonical form: amplitudes sorted descending,
/// strictly positive, unit two-norm. Immutable after construction.
class CoherenceVector {
public:
    /// Validates descending order, strict positivity and normalization.
    explicit CoherenceVector(std::vector<double> amps,
                             const Tolerances& tol = default_tolerances())
        : amps_(std::move(amps)) {
        if (amps_.empty()) throw NormError("empty amplitude list");
        double sq = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (amps_[i] <= tol.amp)
                throw ZeroAmplitudeError("amplitude " + std::to_string(i + 1) +
                                         " is zero or negative");
            if (i > 0 && amps_[i] > amps_[i - 1] + tol.amp)
                throw NormError("amplitudes not in descending order");
            sq += amps_[i] * amps_[i];
        }
        if (std::abs(sq - 1.0) > tol.norm)
            throw NormError("squared amplitudes sum to " + std::to_string(sq));
    }

    /// Builds from squared amplitudes (mu-vector form).
    static CoherenceVector from_mu(const std::vector<double>& mu,
                                   const Tolerances& tol = default_tolerances()) {
        std::vector<double> amps(mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i) {
            if (mu[i] < 0.0) throw ZeroAmplitudeError("negative squared amplitude");
            amps[i] = std::sqrt(mu[i]);
        }
        return CoherenceVector(std::move(amps), tol);
    }

    int dim() const { return static_cast<int>(amps_.size()); }
    const std::vector<double>& amps() const { return amps_; }
    /// Amplitude at a 1-based level label |j>.
    double amp(int level) const { return amps_[static_cast<std::size_t>(level - 1)]; }
    /// Squared amplitude at 1-based level.
    double mu_at(int level) const {
        double a = amp(level);
        return a * a;
    }

    MuVector mu() const {
        MuVector m;
        m.entries.resize(amps_.size());
        std::transform(amps_.begin(), amps_.end(), m.entries.begin(),
                       [](double a) { return a * a; });
        return m;
    }

    bool operator==(const CoherenceVector& o) const { return amps_ == o.amps_; }

private:
    std::vector<double> amps_;
};

/// Result of canonicalize: the state plus the sorting permutation, so callers
/// can map canonical level labels back to their original basis.
/// permutation[i] is the index in the raw input that landed at canonical
/// position i.
struct CanonicalState {
    CoherenceVector state;
    std::vector<int> permutation;
};

/// Strips complex phases, sorts magnitudes descending, and records the
/// applied permutation. Phases are free to eliminate (diagonal unitaries are
/// incoherent); everything downstream works in the sorted basis.
inline CanonicalState canonicalize(std::span<const std::complex<double>> raw,
                                   const Tolerances& tol = default_tolerances()) {
    if (raw.empty()) throw NormError("empty amplitude list");
    std::vector<double> mags(raw.size());
    double sq = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        mags[i] = std::abs(raw[i]);
        sq += mags[i] * mags[i];
    }
    if (std::abs(sq - 1.0) > tol.norm)
        throw NormError("input norm " + std::to_string(std::sqrt(sq)) + " != 1");
    for (std::size_t i = 0; i < mags.size(); ++i)
        if (mags[i] <= tol.amp)
            throw ZeroAmplitudeError("amplitude " + std::to_string(i + 1) +
                                     " vanishes; reduce the dimension first");
    std::vector<int> perm(raw.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int a, int b) { return mags[a] > mags[b]; });
    std::vector<double> sorted(raw.size());
    for (std::size_t i = 0; i < perm.size(); ++i) sorted[i] = mags[perm[i]];
    return CanonicalState{CoherenceVector(std::move(sorted), tol), std::move(perm)};
}

inline CanonicalState canonicalize(std::span<const double> raw,
                                   const Tolerances& tol = default_tolerances()) {
    std::vector<std::complex<double>> c(raw.begin(), raw.end());
    return canonicalize(std::span<const std::complex<double>>(c), tol);
}

/// Outcome of the majorization test. first_violation is the smallest k in
/// [1, d-1] whose partial sum fails, when holds is false.
struct MajorizationReport {
    bool holds = false;
    std::optional<int> first_violation;
};

/// mu(source) majorized by mu(target): all partial sums of the source
/// coherence vector are dominated by the target's. Equal dimensions only;
/// zero-padding is excluded because amplitudes must stay strictly positive.
inline MajorizationReport majorizes(const CoherenceVector& target,
                                    const CoherenceVector& source,
                                    const Tolerances& tol = default_tolerances()) {
    if (target.dim() != source.dim())
        throw DimensionMismatch("majorizes: dimensions " + std::to_string(target.dim()) +
                                " vs " + std::to_string(source.dim()));
    const int d = target.dim();
    double src = 0.0, tgt = 0.0;
    for (int k = 1; k <= d - 1; ++k) {
        src += source.mu_at(k);
        tgt += target.mu_at(k);
        if (src > tgt + tol.maj) return MajorizationReport{false, k};
    }
    return MajorizationReport{true, std::nullopt};
}

/// Dense density matrix. All channel math in this library is real in the
/// canonical basis (phases are eliminated up front), so entries are real.
struct DensityMatrix {
    Eigen::MatrixXd entries;

    int dim() const { return static_cast<int>(entries.rows()); }

    double trace() const { return entries.trace(); }

    /// Hermiticity (symmetry) and unit-trace check; PSD is verified through
    /// rank-1 structure where needed rather than a full eigensolve.
    bool valid(const Tolerances& tol = default_tolerances()) const {
        if (entries.rows() != entries.cols()) return false;
        if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > tol.psd) return false;
        return std::abs(trace() - 1.0) <= tol.norm;
    }
};

/// Rank-1 projector |psi><psi| of a coherent state.
inline DensityMatrix pure_density(const CoherenceVector& state) {
    const auto& a = state.amps();
    Eigen::Map<const Eigen::VectorXd> v(a.data(), static_cast<Eigen::Index>(a.size()));
    return DensityMatrix{v * v.transpose()};
}

}  // namespace cohtrans
