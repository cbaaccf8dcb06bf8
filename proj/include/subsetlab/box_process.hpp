#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "subsetlab/rational.hpp"
#include "subsetlab/rng.hpp"

namespace subsetlab {

/// Where a draw landed: place 0 means no subset-solution was checked in the
/// observed step, places 1..l name the checked slot that held one.
struct OutcomeLabel {
    std::uint32_t place = 0;

    friend bool operator==(OutcomeLabel, OutcomeLabel) = default;
};

/// A multiset of outcome-labeled items. Drawing uniformly from the box is the
/// whole random experiment; everything about it is exact integer counting.
class Box {
public:
    /// counts_by_place[p] = number of items labeled with place p;
    /// the vector length fixes the place capacity l = size - 1.
    explicit Box(std::vector<std::int64_t> counts_by_place) : counts_(std::move(counts_by_place)) {
        if (counts_.empty()) {
            throw std::invalid_argument("box needs at least place 0");
        }
        for (std::int64_t c : counts_) {
            if (c < 0) throw std::invalid_argument("box counts must be non-negative");
            total_ += c;
        }
        if (total_ < 1) {
            throw std::invalid_argument("box cardinality must be at least 1");
        }
    }

    /// Two-outcome box with a solution items and b - a non-solution items.
    static Box two_outcome(std::int64_t a, std::int64_t b) {
        if (b < 1 || a < 0 || a > b) {
            throw std::invalid_argument("two-outcome box requires 0 <= a <= b, b >= 1");
        }
        return Box({b - a, a});
    }

    /// Three-outcome box: a1 items at place 1, a2 at place 2, rest at place 0.
    static Box three_outcome(std::int64_t a1, std::int64_t a2, std::int64_t b) {
        if (b < 1 || a1 < 0 || a2 < 0 || a1 + a2 > b) {
            throw std::invalid_argument("three-outcome box requires 0 <= a1 + a2 <= b, b >= 1");
        }
        return Box({b - a1 - a2, a1, a2});
    }

    std::uint32_t place_capacity() const { return static_cast<std::uint32_t>(counts_.size() - 1); }
    std::int64_t cardinality() const { return total_; }
    std::int64_t count(std::uint32_t place) const {
        return place < counts_.size() ? counts_[place] : 0;
    }
    const std::vector<std::int64_t>& counts() const { return counts_; }

    friend bool operator==(const Box&, const Box&) = default;

private:
    std::vector<std::int64_t> counts_;
    std::int64_t total_ = 0;
};

/// Validated construction from a sparse place -> count map.
inline Box make_box(const std::map<std::uint32_t, std::int64_t>& counts, std::uint32_t place_capacity) {
    std::vector<std::int64_t> by_place(place_capacity + 1, 0);
    for (const auto& [place, count] : counts) {
        if (place > place_capacity) {
            throw std::invalid_argument("place " + std::to_string(place) + " exceeds capacity " +
                                        std::to_string(place_capacity));
        }
        by_place[place] = count;
    }
    return Box(std::move(by_place));
}

/// Probability that a draw lands on any solution place (place >= 1), exact.
inline Rational solution_probability(const Box& box) {
    std::int64_t hits = 0;
    for (std::uint32_t place = 1; place <= box.place_capacity(); ++place) {
        hits += box.count(place);
    }
    return Rational(hits, box.cardinality());
}

/// Exact per-place distribution; probabilities[p] = count(p) / cardinality.
struct Pmf {
    std::vector<Rational> probabilities;

    const Rational& at(std::uint32_t place) const { return probabilities.at(place); }
    Rational total() const {
        Rational sum(0, 1);
        for (const Rational& p : probabilities) sum = sum + p;
        return sum;
    }
};

inline Pmf exact_pmf(const Box& box) {
    Pmf pmf;
    pmf.probabilities.reserve(box.counts().size());
    for (std::int64_t c : box.counts()) {
        pmf.probabilities.emplace_back(c, box.cardinality());
    }
    return pmf;
}

/// One uniform draw. Item index maps to a place by cumulative counts in place
/// order, so equal seeds give equal outcomes everywhere.
inline OutcomeLabel sample_box(const Box& box, std::uint64_t seed) {
    std::mt19937_64 engine = seeded_engine(seed);
    std::int64_t index = static_cast<std::int64_t>(uniform_below(engine, static_cast<std::uint64_t>(box.cardinality())));
    for (std::uint32_t place = 0; place <= box.place_capacity(); ++place) {
        index -= box.count(place);
        if (index < 0) return OutcomeLabel{place};
    }
    return OutcomeLabel{box.place_capacity()};
}

/// Observed frequencies from repeated draws.
struct EmpiricalPmf {
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> counts;  // index = place

    double frequency(std::uint32_t place) const {
        return trials == 0 ? 0.0 : static_cast<double>(counts.at(place)) / static_cast<double>(trials);
    }

    friend bool operator==(const EmpiricalPmf&, const EmpiricalPmf&) = default;
};

namespace detail {

/// Trials are consumed in fixed blocks, one derived stream per block index,
/// so any assignment of blocks to workers accumulates identical counts.
inline constexpr std::uint64_t kTrialsPerBlock = 4096;

inline void accumulate_block(const Box& box, std::uint64_t seed, std::uint64_t block,
                             std::uint64_t trials, std::vector<std::uint64_t>& counts) {
    std::mt19937_64 engine = seeded_engine(seed, block + 1);
    const std::uint64_t cardinality = static_cast<std::uint64_t>(box.cardinality());
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::int64_t index = static_cast<std::int64_t>(uniform_below(engine, cardinality));
        for (std::uint32_t place = 0; place <= box.place_capacity(); ++place) {
            index -= box.count(place);
            if (index < 0) {
                ++counts[place];
                break;
            }
        }
    }
}

}  // namespace detail

inline EmpiricalPmf estimate_pmf(const Box& box, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) {
        throw std::invalid_argument("need at least one trial");
    }
    EmpiricalPmf result;
    result.trials = trials;
    result.counts.assign(box.place_capacity() + 1, 0);
    const std::uint64_t blocks = (trials + detail::kTrialsPerBlock - 1) / detail::kTrialsPerBlock;
    for (std::uint64_t block = 0; block < blocks; ++block) {
        const std::uint64_t in_block =
            std::min(detail::kTrialsPerBlock, trials - block * detail::kTrialsPerBlock);
        detail::accumulate_block(box, seed, block, in_block, result.counts);
    }
    return result;
}

/// Same totals as estimate_pmf, computed by striping blocks across workers
/// and merging their counts.
inline EmpiricalPmf estimate_pmf_parallel(const Box& box, std::uint64_t trials, std::uint64_t seed, int workers) {
    if (trials < 1) {
        throw std::invalid_argument("need at least one trial");
    }
    if (workers < 1) {
        throw std::invalid_argument("need at least one worker");
    }
    const std::uint64_t blocks = (trials + detail::kTrialsPerBlock - 1) / detail::kTrialsPerBlock;
    std::vector<std::vector<std::uint64_t>> partial(
        static_cast<std::size_t>(workers), std::vector<std::uint64_t>(box.place_capacity() + 1, 0));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::uint64_t block = static_cast<std::uint64_t>(w); block < blocks;
                 block += static_cast<std::uint64_t>(workers)) {
                const std::uint64_t in_block =
                    std::min(detail::kTrialsPerBlock, trials - block * detail::kTrialsPerBlock);
                detail::accumulate_block(box, seed, block, in_block, partial[static_cast<std::size_t>(w)]);
            }
        });
    }
    for (std::thread& t : pool) t.join();

    EmpiricalPmf result;
    result.trials = trials;
    result.counts.assign(box.place_capacity() + 1, 0);
    for (const auto& counts : partial) {
        for (std::size_t place = 0; place < counts.size(); ++place) {
            result.counts[place] += counts[place];
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Families of boxes over the rational unit interval
// ---------------------------------------------------------------------------

/// A rule assigning one box composition to every index q = a/b in [0, 1],
/// always with solution_probability == q. The built-in rules differ only in
/// how they split the solution mass between places 1 and 2:
///   Constant:  all of it on place 1, everywhere.
///   SwapAtOne: all on place 1 below q = 1; at q = 1 all on place 2.
///   SwapAt q0: as Constant except at q0, where it all moves to place 2.
///   Table:     explicit finite map; undefined elsewhere.
class FamilyRule {
public:
    enum class Kind { Constant, SwapAtOne, SwapAt, Table };

    static FamilyRule constant() { return FamilyRule(Kind::Constant, Rational(0, 1), {}); }
    static FamilyRule swap_at_one() { return FamilyRule(Kind::SwapAtOne, Rational(1, 1), {}); }

    static FamilyRule swap_at(const Rational& q0) {
        if (!q0.in_unit_interval()) {
            throw std::invalid_argument("swap point must lie in [0, 1]");
        }
        return FamilyRule(Kind::SwapAt, q0, {});
    }

    /// entries: q -> (a1, a2, b); each must satisfy (a1 + a2)/b == q.
    static FamilyRule table(std::map<Rational, std::array<std::int64_t, 3>> entries) {
        for (const auto& [q, counts] : entries) {
            const auto [a1, a2, b] = counts;
            if (!q.in_unit_interval() || Rational(a1 + a2, b) != q) {
                throw std::invalid_argument("table entry at q = " + q.str() + " does not realize that probability");
            }
        }
        return FamilyRule(Kind::Table, Rational(0, 1), std::move(entries));
    }

    Kind kind() const { return kind_; }
    const Rational& swap_point() const { return point_; }

    Box box_for(const Rational& q) const {
        if (!q.in_unit_interval()) {
            throw std::invalid_argument("index q = " + q.str() + " outside [0, 1]");
        }
        switch (kind_) {
            case Kind::Constant:
                return Box::three_outcome(q.numerator(), 0, q.denominator());
            case Kind::SwapAtOne:
                if (q == Rational(1, 1)) return Box::three_outcome(0, 1, 1);
                return Box::three_outcome(q.numerator(), 0, q.denominator());
            case Kind::SwapAt:
                if (q == point_) return Box::three_outcome(0, q.numerator(), q.denominator());
                return Box::three_outcome(q.numerator(), 0, q.denominator());
            case Kind::Table: {
                auto it = table_.find(q);
                if (it == table_.end()) {
                    throw std::invalid_argument("family rule undefined at q = " + q.str());
                }
                return Box::three_outcome(it->second[0], it->second[1], it->second[2]);
            }
        }
        throw std::invalid_argument("unknown family rule");
    }

    std::string name() const {
        switch (kind_) {
            case Kind::Constant: return "const";
            case Kind::SwapAtOne: return "paper-f";
            case Kind::SwapAt: return "jump:" + point_.str();
            case Kind::Table: return "table";
        }
        return "?";
    }

private:
    FamilyRule(Kind kind, Rational point, std::map<Rational, std::array<std::int64_t, 3>> table)
        : kind_(kind), point_(point), table_(std::move(table)) {}

    Kind kind_;
    Rational point_;
    std::map<Rational, std::array<std::int64_t, 3>> table_;
};

inline Box family_box(const FamilyRule& rule, const Rational& q) { return rule.box_for(q); }

/// Finite sampling of the index set: the Farey sequence of the given order.
inline std::vector<Rational> rational_grid(int max_denominator) { return farey_sequence(max_denominator); }

struct FamilyScanRow {
    Rational q;
    Rational pi0;
    Rational pi1;
    Rational pi2;
};

inline std::vector<FamilyScanRow> scan_family(const FamilyRule& rule, std::span<const Rational> grid) {
    std::vector<FamilyScanRow> rows;
    rows.reserve(grid.size());
    for (const Rational& q : grid) {
        const Pmf pmf = exact_pmf(rule.box_for(q));
        rows.push_back({q, pmf.at(0), pmf.at(1), pmf.at(2)});
    }
    return rows;
}

/// CSV with header q,pi0,pi1,pi2 and exact "a/b" strings.
inline void write_scan_csv(std::ostream& out, std::span<const FamilyScanRow> rows) {
    out << "q,pi0,pi1,pi2\n";
    for (const FamilyScanRow& row : rows) {
        out << row.q.str() << ',' << row.pi0.str() << ',' << row.pi1.str() << ',' << row.pi2.str() << '\n';
    }
}

// ---------------------------------------------------------------------------
// Jump detection along an approach sequence
// ---------------------------------------------------------------------------

/// The approach q_k = q0 * (k - 1) / k for k = 1..depth: ascending, inside
/// [0, q0], converging to q0.
inline std::vector<Rational> approach_below(const Rational& q0, int depth) {
    if (depth < 1) {
        throw std::invalid_argument("approach depth must be at least 1");
    }
    std::vector<Rational> sequence;
    sequence.reserve(static_cast<std::size_t>(depth));
    for (int k = 1; k <= depth; ++k) {
        Rational q = q0 * Rational(k - 1, k);
        if (sequence.empty() || !(q == sequence.back())) {
            sequence.push_back(q);
        }
    }
    return sequence;
}

struct JumpReport {
    Rational point;           // q0
    Rational value_at_point;  // pi1(q0)
    Rational left_limit;      // extrapolated limit of pi1 along the approach
    bool extrapolated;        // false when the tail was not exactly affine
    Rational magnitude;       // |left_limit - value_at_point|
    std::vector<std::pair<Rational, Rational>> samples;  // (q_k, pi1(q_k))
};

/// Evaluates pi1 along the approach and at the point itself, all exact. When
/// the last three samples are exactly collinear in (q, pi1) the sequence
/// limit is read off by affine extrapolation to q0; otherwise the final
/// sample value stands in. Magnitude 0 means no jump along this approach.
inline JumpReport detect_jump(const FamilyRule& rule, const Rational& q0, std::span<const Rational> approach) {
    if (!q0.in_unit_interval()) {
        throw std::invalid_argument("jump point outside [0, 1]");
    }
    JumpReport report{q0, Rational(0, 1), Rational(0, 1), false, Rational(0, 1), {}};
    report.value_at_point = exact_pmf(rule.box_for(q0)).at(1);

    for (const Rational& q : approach) {
        if (!q.in_unit_interval()) {
            throw std::invalid_argument("approach value " + q.str() + " outside [0, 1]");
        }
        report.samples.emplace_back(q, exact_pmf(rule.box_for(q)).at(1));
    }

    if (report.samples.empty()) {
        report.left_limit = report.value_at_point;
    } else if (report.samples.size() < 3) {
        report.left_limit = report.samples.back().second;
    } else {
        const auto& [qa, pa] = report.samples[report.samples.size() - 3];
        const auto& [qb, pb] = report.samples[report.samples.size() - 2];
        const auto& [qc, pc] = report.samples[report.samples.size() - 1];
        if (qb == qc || qa == qb) {
            report.left_limit = pc;
        } else {
            const Rational slope = (pc - pb) / (qc - qb);
            if (pa == pc + slope * (qa - qc)) {
                report.left_limit = pc + slope * (q0 - qc);
                report.extrapolated = true;
            } else {
                report.left_limit = pc;
            }
        }
    }
    report.magnitude = (report.left_limit - report.value_at_point).abs();
    return report;
}

}  // namespace subsetlab
