#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subsetlab/errors.hpp"
#include "subsetlab/input_set.hpp"
#include "subsetlab/trace.hpp"

namespace subsetlab {

enum class AlgorithmId { BruteForce, HorowitzSahni, DynamicProgramming };

inline std::string_view algorithm_name(AlgorithmId alg) {
    switch (alg) {
        case AlgorithmId::BruteForce: return "brute";
        case AlgorithmId::HorowitzSahni: return "hs";
        case AlgorithmId::DynamicProgramming: return "dp";
    }
    return "?";
}

inline std::optional<AlgorithmId> parse_algorithm(std::string_view name) {
    if (name == "brute") return AlgorithmId::BruteForce;
    if (name == "hs") return AlgorithmId::HorowitzSahni;
    if (name == "dp") return AlgorithmId::DynamicProgramming;
    return std::nullopt;
}

/// Cap on the number of table cells the row-by-row solver will fill.
inline constexpr std::uint64_t kMaxDpCells = 1'000'000;

namespace detail {

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return result;
}

/// Steps the exhaustive pass spends on all subsets of an n-element pool:
/// a subset of size m costs max(1, m-1) additions/comparisons, the last of
/// which is its main step.
inline std::uint64_t exhaustive_steps(int n) {
    std::uint64_t total = 0;
    for (int m = 1; m <= n; ++m) {
        total += binomial(n, m) * static_cast<std::uint64_t>(std::max(1, m - 1));
    }
    return total;
}

}  // namespace detail

/// Step count of the worst-case run for the given input size, the common
/// yardstick every same-size trace is padded to. The table-filling algorithm
/// is value-dependent, so it additionally takes the element-magnitude bound M
/// and uses the conservative row width 2nM + 1.
inline std::uint64_t worst_case_steps(AlgorithmId alg, int n, std::optional<std::int64_t> value_bound = {}) {
    if (n < 1 || n > kMaxElements) {
        throw std::invalid_argument("no worst-case accounting for n = " + std::to_string(n));
    }
    switch (alg) {
        case AlgorithmId::BruteForce:
            return detail::exhaustive_steps(n);
        case AlgorithmId::HorowitzSahni: {
            if (n < 2) throw std::invalid_argument("split solver requires n >= 2");
            const int first = (n + 1) / 2;
            const int second = n - first;
            const std::uint64_t build = detail::exhaustive_steps(first) + detail::exhaustive_steps(second);
            const std::uint64_t scan = (std::uint64_t{1} << first) + (std::uint64_t{1} << second) - 1;
            return build + 2 + scan + 1;  // two sorts, scan couples, one possible empty-skip
        }
        case AlgorithmId::DynamicProgramming: {
            if (!value_bound || *value_bound < 1) {
                throw std::invalid_argument("table accounting requires a positive value bound");
            }
            const std::uint64_t width = 2 * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(*value_bound) + 1;
            return static_cast<std::uint64_t>(n) * width;
        }
    }
    throw std::invalid_argument("unknown algorithm");
}

/// Extends a trace with trailing empty steps up to `target`. The appended
/// steps carry no events and are not procedural: nothing happens in them.
inline Trace pad_trace(Trace t, StepIndex target) {
    if (target < t.step_count) {
        throw std::invalid_argument("cannot shrink a trace from " + std::to_string(t.step_count) + " to " +
                                    std::to_string(target) + " steps");
    }
    t.step_count = target;
    return t;
}

// ---------------------------------------------------------------------------
// Exhaustive solver
// ---------------------------------------------------------------------------

/// Walks all nonzero masks in ascending order, spending max(1, m-1) steps per
/// size-m subset. Partial additions are procedural; the final addition (or the
/// lone comparison of a singleton) is the main step where the subset is
/// checked. The trace is worst-case length by construction.
inline Trace solve_brute_force(const InputSet& s) {
    const int n = s.size();
    TraceBuilder builder(std::string(algorithm_name(AlgorithmId::BruteForce)), s);
    for (SubsetMask mask : enumerate_masks(n)) {
        const int steps = std::max(1, mask.size() - 1);
        for (int k = 1; k < steps; ++k) {
            builder.begin_step();  // partial addition
        }
        builder.begin_step();
        const bool zero = subset_sum(s, mask) == 0;
        builder.checked(mask, zero ? SolutionInfo::solution(mask) : SolutionInfo::not_solution());
    }
    return builder.finish();
}

// ---------------------------------------------------------------------------
// Split-and-scan solver
// ---------------------------------------------------------------------------

namespace detail {

struct HalfEntry {
    std::int64_t sum;
    SubsetMask mask;
};

/// Emits exhaustive-style build steps for every nonempty subset of one half
/// (mask bits pre-shifted into full-input positions) and returns the sum list
/// including the empty-half sentinel.
inline std::vector<HalfEntry> build_half(TraceBuilder& builder, const InputSet& s, int offset, int width) {
    std::vector<HalfEntry> list;
    list.push_back({0, SubsetMask{0}});  // empty half: known for free, no step
    const std::uint32_t limit = (std::uint32_t{1} << width) - 1;
    for (std::uint32_t sub = 1; sub <= limit; ++sub) {
        const SubsetMask mask{sub << offset};
        const int steps = std::max(1, mask.size() - 1);
        for (int k = 1; k < steps; ++k) {
            builder.begin_step();
        }
        builder.begin_step();
        const std::int64_t sum = subset_sum(s, mask);
        builder.checked(mask, sum == 0 ? SolutionInfo::solution(mask) : SolutionInfo::not_solution());
        list.push_back({sum, mask});
    }
    return list;
}

}  // namespace detail

/// Splits the input into a first half of ceil(n/2) elements and a second half
/// of the rest, builds both subset-sum lists (empty halves included so that
/// every nonempty subset is exactly one couple), sorts them, then runs the
/// two-pointer scan: first list by descending sum, second by ascending sum.
///
/// Each couple evaluation is one main step checking the couple's union; every
/// couple it dominates is emitted in the same step as a collateral gain
/// depending on it:
///   sum > 0  -> couples with later second-list entries sum >= this one, so
///               none is a solution; advance the first pointer.
///   sum < 0  -> symmetric; advance the second pointer.
///   sum == 0 -> the couple is a solution. Entries tied with the current sums
///               pair into solutions too and are swept as solution collateral,
///               while strictly dominated couples on both sides are swept as
///               non-solutions; advance both pointers past the tied runs.
/// The empty-empty couple is skipped with no event (its step is procedural)
/// and the scan then advances the second pointer.
inline Trace solve_horowitz_sahni(const InputSet& s) {
    const int n = s.size();
    if (n < 2) {
        throw std::invalid_argument("split solver requires n >= 2");
    }
    if (n > kMaxElements) {
        throw capacity_error("split solver capped at n = " + std::to_string(kMaxElements));
    }
    const int first = (n + 1) / 2;
    const int second = n - first;

    TraceBuilder builder(std::string(algorithm_name(AlgorithmId::HorowitzSahni)), s);
    std::vector<detail::HalfEntry> lo = detail::build_half(builder, s, 0, first);
    std::vector<detail::HalfEntry> hi = detail::build_half(builder, s, first, second);

    // One procedural step per sort.
    std::sort(lo.begin(), lo.end(), [](const auto& a, const auto& b) {
        return a.sum != b.sum ? a.sum > b.sum : a.mask < b.mask;
    });
    builder.begin_step();
    std::sort(hi.begin(), hi.end(), [](const auto& a, const auto& b) {
        return a.sum != b.sum ? a.sum < b.sum : a.mask < b.mask;
    });
    builder.begin_step();

    auto verdict = [&](SubsetMask mask, bool zero) {
        return zero ? SolutionInfo::solution(mask) : SolutionInfo::not_solution();
    };

    std::size_t i = 0, j = 0;
    while (i < lo.size() && j < hi.size()) {
        if (lo[i].mask.empty() && hi[j].mask.empty()) {
            builder.begin_step();  // skipped couple: both halves empty
            ++j;
            continue;
        }
        const std::int64_t total = lo[i].sum + hi[j].sum;
        builder.begin_step();
        const SubsetMask couple{lo[i].mask.bits | hi[j].mask.bits};
        const EventId couple_event = builder.checked(couple, verdict(couple, total == 0));
        if (total > 0) {
            for (std::size_t b = j + 1; b < hi.size(); ++b) {
                const SubsetMask m{lo[i].mask.bits | hi[b].mask.bits};
                builder.collateral(m, SolutionInfo::not_solution(), {couple_event});
            }
            ++i;
        } else if (total < 0) {
            for (std::size_t a = i + 1; a < lo.size(); ++a) {
                const SubsetMask m{lo[a].mask.bits | hi[j].mask.bits};
                builder.collateral(m, SolutionInfo::not_solution(), {couple_event});
            }
            ++j;
        } else {
            // Tied runs share the current sums, so their cross-couples all
            // sum to zero as well.
            std::size_t i2 = i;
            while (i2 + 1 < lo.size() && lo[i2 + 1].sum == lo[i].sum) ++i2;
            std::size_t j2 = j;
            while (j2 + 1 < hi.size() && hi[j2 + 1].sum == hi[j].sum) ++j2;
            for (std::size_t a = i; a <= i2; ++a) {
                for (std::size_t b = j; b <= j2; ++b) {
                    if (a == i && b == j) continue;
                    const SubsetMask m{lo[a].mask.bits | hi[b].mask.bits};
                    if (m.empty()) continue;  // empty-empty pairing is not a subset
                    builder.collateral(m, SolutionInfo::solution(m), {couple_event});
                }
            }
            for (std::size_t a = i; a <= i2; ++a) {
                for (std::size_t b = j2 + 1; b < hi.size(); ++b) {
                    const SubsetMask m{lo[a].mask.bits | hi[b].mask.bits};
                    builder.collateral(m, SolutionInfo::not_solution(), {couple_event});
                }
            }
            for (std::size_t b = j; b <= j2; ++b) {
                for (std::size_t a = i2 + 1; a < lo.size(); ++a) {
                    const SubsetMask m{lo[a].mask.bits | hi[b].mask.bits};
                    builder.collateral(m, SolutionInfo::not_solution(), {couple_event});
                }
            }
            i = i2 + 1;
            j = j2 + 1;
        }
    }
    return pad_trace(builder.finish(), static_cast<StepIndex>(worst_case_steps(AlgorithmId::HorowitzSahni, n)));
}

// ---------------------------------------------------------------------------
// Table solver
// ---------------------------------------------------------------------------

/// Reachability table over prefixes and sums: truth(i, s) answers "some
/// nonempty subset of the first i elements sums to s" for s in [B, A], where
/// A is the sum of positive and B the sum of negative elements. Out-of-range
/// sums are false. True cells carry a witness mask over the first i elements.
class DpTable {
public:
    static DpTable build(const InputSet& s) {
        DpTable table;
        table.n_ = s.size();
        table.lo_ = 0;
        table.hi_ = 0;
        for (std::int64_t x : s.elements()) {
            if (x > 0) table.hi_ += x;
            if (x < 0) table.lo_ += x;
        }
        table.width_ = table.hi_ - table.lo_ + 1;
        const std::uint64_t cells = static_cast<std::uint64_t>(table.n_) * static_cast<std::uint64_t>(table.width_);
        if (cells > kMaxDpCells) {
            throw capacity_error("table of " + std::to_string(cells) + " cells exceeds cap " +
                                 std::to_string(kMaxDpCells));
        }
        table.truth_.assign(cells, 0);
        table.witness_.assign(cells, SubsetMask{0});
        for (int i = 1; i <= table.n_; ++i) {
            const std::int64_t x = s.element(i - 1);
            for (std::int64_t sum = table.lo_; sum <= table.hi_; ++sum) {
                bool truth = false;
                SubsetMask witness{0};
                if (i > 1 && table.value(i - 1, sum)) {
                    truth = true;
                    witness = *table.witness(i - 1, sum);
                } else if (x == sum) {
                    truth = true;
                    witness = SubsetMask{std::uint32_t{1} << (i - 1)};
                } else if (i > 1 && table.value(i - 1, sum - x)) {
                    truth = true;
                    witness = SubsetMask{table.witness(i - 1, sum - x)->bits | (std::uint32_t{1} << (i - 1))};
                }
                const std::size_t at = table.index(i, sum);
                table.truth_[at] = truth ? 1 : 0;
                table.witness_[at] = witness;
            }
        }
        return table;
    }

    std::int64_t positive_sum() const { return hi_; }
    std::int64_t negative_sum() const { return lo_; }
    std::int64_t width() const { return width_; }
    std::uint64_t cell_count() const { return truth_.size(); }

    bool value(int i, std::int64_t sum) const {
        if (sum < lo_ || sum > hi_) return false;
        return truth_[index(i, sum)] != 0;
    }

    std::optional<SubsetMask> witness(int i, std::int64_t sum) const {
        if (!value(i, sum)) return std::nullopt;
        return witness_[index(i, sum)];
    }

private:
    std::size_t index(int i, std::int64_t sum) const {
        return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(sum - lo_);
    }

    int n_ = 0;
    std::int64_t lo_ = 0, hi_ = 0, width_ = 0;
    std::vector<char> truth_;
    std::vector<SubsetMask> witness_;
};

/// Fills the table row by row, one step per cell. Each (i, 0) cell is the
/// row's main step: the singleton {x_i} is checked there via the x_i == 0
/// test, and for i >= 2 the same step determines the whole family "subsets of
/// the first i elements except {x_i}" as one collateral gain whose
/// dependencies are the previous row's family event and checked singleton;
/// the element x_i itself contributes as a member, not as a dependency. Cells
/// with s != 0 are procedural. The trace is not padded here: the worst case
/// depends on a value bound the input alone does not carry.
inline Trace solve_dp(const InputSet& s) {
    const int n = s.size();
    if (n > kMaxElements) {
        throw capacity_error("table solver capped at n = " + std::to_string(kMaxElements));
    }
    const DpTable table = DpTable::build(s);

    TraceBuilder builder(std::string(algorithm_name(AlgorithmId::DynamicProgramming)), s);
    EventId previous_checked = 0;
    EventId previous_family = 0;
    for (int i = 1; i <= n; ++i) {
        for (std::int64_t sum = table.negative_sum(); sum <= table.positive_sum(); ++sum) {
            builder.begin_step();
            if (sum != 0) continue;

            const std::int64_t x = s.element(i - 1);
            const SubsetMask singleton{std::uint32_t{1} << (i - 1)};
            const EventId checked_event =
                builder.checked(singleton, x == 0 ? SolutionInfo::solution(singleton) : SolutionInfo::not_solution());

            if (i >= 2) {
                std::vector<EventId> deps;
                if (i >= 3) deps.push_back(previous_family);
                deps.push_back(previous_checked);

                SolutionInfo verdict = SolutionInfo::family_without();
                if (auto w = table.witness(i - 1, 0)) {
                    verdict = SolutionInfo::family_with(*w);
                } else if (auto w2 = table.witness(i - 1, -x)) {
                    verdict = SolutionInfo::family_with(SubsetMask{w2->bits | singleton.bits});
                }
                previous_family = builder.collateral_family(FamilyDescriptor::prefix_except_singleton(i),
                                                            std::move(verdict), std::move(deps));
            }
            previous_checked = checked_event;
        }
    }
    return builder.finish();
}

// ---------------------------------------------------------------------------
// Common entry points
// ---------------------------------------------------------------------------

inline Trace run_solver(AlgorithmId alg, const InputSet& s) {
    switch (alg) {
        case AlgorithmId::BruteForce: return solve_brute_force(s);
        case AlgorithmId::HorowitzSahni: return solve_horowitz_sahni(s);
        case AlgorithmId::DynamicProgramming: return solve_dp(s);
    }
    throw std::invalid_argument("unknown algorithm");
}

/// First witness of a subset-solution recorded anywhere in the trace, in
/// emission order.
inline std::optional<SubsetMask> find_solution_witness(const Trace& t) {
    for (const DeterminationEvent& e : t.events) {
        if (e.solution.has_witness()) {
            return e.solution.witness;
        }
    }
    return std::nullopt;
}

}  // namespace subsetlab
