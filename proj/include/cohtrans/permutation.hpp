#pragma once

// Permutation calculus for single-step transformations: the case table of
// candidate transpositions, the selection rules for mandatory members, and
// the enumeration of pairwise non-crossing permutation sets.
//
// A "crossing" of two transpositions (a.x,a.y), (b.x,b.y) is strict
// interleaving of their level intervals. Nested intervals and shared
// endpoints do not cross; crossing pairs are exactly the ones that force
// negative probabilities downstream.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cohtrans/errors.hpp"
#include "cohtrans/state.hpp"
#include "cohtrans/tolerances.hpp"

namespace cohtrans {

/// Level swap |x> <-> |y>, 1-based, y > x.
struct Transposition {
    int x = 0;
    int y = 0;

    /// Image of a 1-based level under the swap.
    int apply(int level) const {
        if (level == x) return y;
        if (level == y) return x;
        return level;
    }

    friend bool operator==(const Transposition&, const Transposition&) = default;
    friend auto operator<=>(const Transposition&, const Transposition&) = default;
};

enum class Relation : std::uint8_t { LE, GE };

/// Per-level relation between source and target amplitudes. relations[k]
/// encodes psi_{k+1} <= phi_{k+1} (LE) or >= (GE); the endpoints are LE and
/// GE by majorization. Ties classify as LE: a tied level needs no
/// probability mass moved through it.
struct CasePattern {
    std::vector<Relation> relations;

    int dim() const { return static_cast<int>(relations.size()); }

    friend bool operator==(const CasePattern&, const CasePattern&) = default;
};

/// The case table: all transpositions (x,y) with x an LE level (column),
/// y a GE level (row), y > x. Holds between d-1 and floor(d/2)*ceil(d/2)
/// entries.
struct PermutationTable {
    int d = 0;
    std::vector<int> columns;             ///< LE levels, ascending
    std::vector<int> rows;                ///< GE levels, ascending
    std::vector<Transposition> entries;   ///< lexicographic by (x,y)

    int zeta() const { return static_cast<int>(entries.size()); }
};

/// One SP: the identity (implicit, members[0] slot) plus d-1 pairwise
/// non-crossing transpositions. transpositions[i] corresponds to the
/// (i+2)-th Kraus operator.
struct PermutationSet {
    int d = 0;
    std::vector<Transposition> transpositions;

    /// Total member count including the implicit identity.
    int size() const { return static_cast<int>(transpositions.size()) + 1; }

    /// Member i (0-based; 0 is the identity), as an optional transposition.
    std::optional<Transposition> member(int i) const {
        if (i == 0) return std::nullopt;
        return transpositions[static_cast<std::size_t>(i) - 1];
    }

    friend bool operator==(const PermutationSet&, const PermutationSet&) = default;
};

/// Classifies each level of a majorizing pair. Throws MajorizationError if
/// the target does not majorize the source.
inline CasePattern sign_pattern(const CoherenceVector& source,
                                const CoherenceVector& target,
                                const Tolerances& tol = default_tolerances()) {
    if (source.dim() != target.dim())
        throw DimensionMismatch("sign_pattern: dimension mismatch");
    auto rep = majorizes(target, source, tol);
    if (!rep.holds)
        throw MajorizationError("sign_pattern: target does not majorize source (k=" +
                                std::to_string(*rep.first_violation) + ")");
    const int d = source.dim();
    CasePattern pattern;
    pattern.relations.resize(static_cast<std::size_t>(d));
    pattern.relations.front() = Relation::LE;
    pattern.relations.back() = Relation::GE;
    for (int k = 2; k <= d - 1; ++k) {
        const double s = source.amp(k), t = target.amp(k);
        // ties resolve to LE
        pattern.relations[static_cast<std::size_t>(k - 1)] =
            (s <= t + tol.maj) ? Relation::LE : Relation::GE;
    }
    return pattern;
}

/// Cross product of LE columns and GE rows restricted to y > x: the full
/// candidate table for the given case.
inline PermutationTable build_table(const CasePattern& pattern) {
    PermutationTable table;
    table.d = pattern.dim();
    for (int level = 1; level <= table.d; ++level) {
        if (pattern.relations[static_cast<std::size_t>(level - 1)] == Relation::LE)
            table.columns.push_back(level);
        else
            table.rows.push_back(level);
    }
    for (int x : table.columns)
        for (int y : table.rows)
            if (y > x) table.entries.push_back({x, y});
    std::sort(table.entries.begin(), table.entries.end());
    return table;
}

/// Strict interleaving of the two level intervals. Shared endpoints and
/// nesting are not crossings (identical transpositions included).
inline bool crossing(const Transposition& a, const Transposition& b) {
    return (a.x < b.x && b.x < a.y && a.y < b.y) ||
           (b.x < a.x && a.x < b.y && b.y < a.y);
}

/// Transpositions that every SP of the table must contain, in rule order:
/// column-unique entries, row-unique entries, adjacent |u> <-> |u+1>
/// entries, and |1> <-> |d>. Duplicates removed, first occurrence wins.
inline std::vector<Transposition> mandatory_permutations(const PermutationTable& table) {
    std::vector<Transposition> out;
    auto push = [&out](const Transposition& t) {
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    };
    for (int x : table.columns) {
        std::optional<Transposition> only;
        int count = 0;
        for (const auto& t : table.entries)
            if (t.x == x) {
                ++count;
                only = t;
            }
        if (count == 1) push(*only);
    }
    for (int y : table.rows) {
        std::optional<Transposition> only;
        int count = 0;
        for (const auto& t : table.entries)
            if (t.y == y) {
                ++count;
                only = t;
            }
        if (count == 1) push(*only);
    }
    for (const auto& t : table.entries)
        if (t.y == t.x + 1) push(t);
    for (const auto& t : table.entries)
        if (t.x == 1 && t.y == table.d) push(t);
    return out;
}

namespace detail {

/// Member ordering of a complete SP: identity, then the mandatory
/// transpositions in rule order, then the free choices sorted
/// lexicographically.
inline PermutationSet make_sp(const PermutationTable& table,
                              const std::vector<Transposition>& mandatory,
                              std::vector<Transposition> chosen) {
    PermutationSet sp;
    sp.d = table.d;
    sp.transpositions = mandatory;
    std::vector<Transposition> free;
    for (const auto& t : chosen)
        if (std::find(mandatory.begin(), mandatory.end(), t) == mandatory.end())
            free.push_back(t);
    std::sort(free.begin(), free.end());
    sp.transpositions.insert(sp.transpositions.end(), free.begin(), free.end());
    return sp;
}

}  // namespace detail

/// Lazy stream over every (d-1)-subset of the table that contains all
/// mandatory transpositions and is pairwise non-crossing, each with the
/// identity prepended. Sets arrive in lexicographic order of their sorted
/// transposition lists, so runs are reproducible. Single consumer;
/// independent streams may run concurrently.
///
/// The DFS prunes as it goes: an entry crossing any chosen one is never
/// descended into, and a branch that would skip a mandatory entry dies on
/// the spot, so the (zeta choose d-1) explosion never materializes.
class SpEnumerator {
public:
    explicit SpEnumerator(const PermutationTable& table)
        : table_(table), mandatory_(mandatory_permutations(table)) {
        n_ = table_.zeta();
        need_ = table_.d - 1;
        cross_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), false);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                cross_[static_cast<std::size_t>(i * n_ + j)] = crossing(entry(i), entry(j));
        is_mandatory_.assign(static_cast<std::size_t>(n_), false);
        for (const auto& m : mandatory_)
            for (int i = 0; i < n_; ++i)
                if (entry(i) == m) is_mandatory_[static_cast<std::size_t>(i)] = true;
        frames_.push_back(Frame{0, -1});
    }

    /// Next SP in order, or nullopt when exhausted.
    std::optional<PermutationSet> next() {
        while (!frames_.empty()) {
            if (static_cast<int>(chosen_.size()) == need_) {
                auto sp = detail::make_sp(table_, mandatory_, chosen_);
                pop_frame();
                return sp;
            }
            Frame& f = frames_.back();
            if (f.next_idx >= n_) {
                pop_frame();
                continue;
            }
            const int i = f.next_idx++;
            const auto u = static_cast<std::size_t>(i);
            if (fits(i)) {
                chosen_.push_back(entry(i));
                chosen_idx_.push_back(i);
                frames_.push_back(Frame{i + 1, i});
            } else if (is_mandatory_[u]) {
                // a mandatory entry that cannot be taken kills the branch
                f.next_idx = n_;
            }
        }
        return std::nullopt;
    }

    /// Drains the stream. Throws NoCandidateError if the table admits no SP.
    std::vector<PermutationSet> all() {
        std::vector<PermutationSet> sets;
        while (auto sp = next()) sets.push_back(std::move(*sp));
        if (sets.empty())
            throw NoCandidateError("no non-crossing (d-1)-subset contains all mandatory permutations");
        return sets;
    }

private:
    struct Frame {
        int next_idx;          // next entry index this frame will consider
        int chose;             // entry whose selection created this frame
    };

    const Transposition& entry(int i) const {
        return table_.entries[static_cast<std::size_t>(i)];
    }

    bool fits(int i) const {
        if (n_ - i < need_ - static_cast<int>(chosen_.size())) return false;
        for (int j : chosen_idx_)
            if (cross_[static_cast<std::size_t>(i * n_ + j)]) return false;
        return true;
    }

    void pop_frame() {
        const int chose = frames_.back().chose;
        frames_.pop_back();
        if (chose >= 0) {
            chosen_.pop_back();
            chosen_idx_.pop_back();
            // resuming the parent past this entry would skip it; illegal
            // for mandatory entries, so exhaust the parent loop
            if (is_mandatory_[static_cast<std::size_t>(chose)] && !frames_.empty())
                frames_.back().next_idx = n_;
        }
    }

    PermutationTable table_;
    std::vector<Transposition> mandatory_;
    int n_ = 0;
    int need_ = 0;
    std::vector<bool> cross_;
    std::vector<bool> is_mandatory_;
    std::vector<Frame> frames_;
    std::vector<Transposition> chosen_;
    std::vector<int> chosen_idx_;
};

/// Materializes the full stream (see SpEnumerator for the lazy interface).
inline std::vector<PermutationSet> enumerate_sps(const PermutationTable& table) {
    return SpEnumerator(table).all();
}

}  // namespace cohtrans
