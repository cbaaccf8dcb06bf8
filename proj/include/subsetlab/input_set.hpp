#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "subsetlab/errors.hpp"

namespace subsetlab {

/// Largest supported input cardinality. Subsets live in the bits of a 32-bit
/// word; 2^20 masks is already far beyond what the analyzers need.
inline constexpr int kMaxElements = 20;

/// Bitmask over input positions: bit k set means element k (0-based) is in
/// the subset. The zero mask denotes the empty set and is only ever used as
/// the empty-half sentinel of the meet-in-the-middle solver.
struct SubsetMask {
    std::uint32_t bits = 0;

    constexpr bool has_element(int index) const { return (bits >> index) & 1u; }
    constexpr int size() const { return std::popcount(bits); }
    constexpr bool empty() const { return bits == 0; }

    friend constexpr bool operator==(SubsetMask, SubsetMask) = default;
    friend constexpr auto operator<=>(SubsetMask, SubsetMask) = default;
};

/// Serializes as "m:" + lowercase hex, e.g. mask 7 -> "m:7".
inline std::string to_string(SubsetMask m) {
    char buf[16];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), m.bits, 16);
    return "m:" + std::string(buf, end);
}

inline SubsetMask parse_mask(std::string_view text) {
    if (text.size() < 3 || text.substr(0, 2) != "m:") {
        throw std::invalid_argument("subset mask must look like \"m:<hex>\", got \"" + std::string(text) + "\"");
    }
    std::uint32_t bits = 0;
    const char* first = text.data() + 2;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, bits, 16);
    if (ec != std::errc{} || ptr != last) {
        throw std::invalid_argument("bad hex in subset mask \"" + std::string(text) + "\"");
    }
    return SubsetMask{bits};
}

/// An ordered tuple of distinct integers. Construction validates distinctness
/// and an overflow guard (n * max|x| fits in 62 bits), so every subset sum is
/// exactly representable in 64-bit arithmetic and summation never needs a
/// per-call check.
class InputSet {
public:
    explicit InputSet(std::vector<std::int64_t> elements) : elements_(std::move(elements)) {
        if (elements_.empty()) {
            throw std::invalid_argument("input set must contain at least one element");
        }
        std::vector<std::int64_t> sorted = elements_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("input set elements must be pairwise distinct");
        }
        const std::int64_t magnitude_cap = ((std::int64_t{1} << 62) - 1) / static_cast<std::int64_t>(elements_.size());
        for (std::int64_t x : elements_) {
            if (x == std::numeric_limits<std::int64_t>::min() || std::abs(x) > magnitude_cap) {
                throw std::invalid_argument("element magnitude too large: subset sums could overflow");
            }
        }
    }

    /// Parses a comma-separated integer list, e.g. "1,-3,2".
    static InputSet parse(std::string_view text) {
        std::vector<std::int64_t> values;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t comma = text.find(',', pos);
            std::string_view token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
            while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
            std::int64_t value = 0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
                throw std::invalid_argument("bad integer list token \"" + std::string(token) + "\"");
            }
            values.push_back(value);
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        return InputSet(std::move(values));
    }

    int size() const { return static_cast<int>(elements_.size()); }
    std::int64_t element(int index) const { return elements_[static_cast<std::size_t>(index)]; }
    const std::vector<std::int64_t>& elements() const { return elements_; }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(elements_[i]);
        }
        return out;
    }

    friend bool operator==(const InputSet&, const InputSet&) = default;

private:
    std::vector<std::int64_t> elements_;
};

inline std::int64_t subset_sum(const InputSet& s, SubsetMask m) {
    std::int64_t total = 0;
    std::uint32_t bits = m.bits;
    while (bits) {
        const int index = std::countr_zero(bits);
        total += s.element(index);
        bits &= bits - 1;
    }
    return total;
}

/// True iff the nonempty subset denoted by `m` sums to zero.
inline bool is_solution(const InputSet& s, SubsetMask m) {
    if (m.empty()) {
        throw std::invalid_argument("the empty set is not a candidate subset");
    }
    return subset_sum(s, m) == 0;
}

/// All 2^n - 1 nonzero masks in ascending numeric order. This is the canonical
/// subset order used by the exhaustive solver and everything downstream.
inline std::vector<SubsetMask> enumerate_masks(int n) {
    if (n < 1) {
        throw std::invalid_argument("cardinality must be at least 1");
    }
    if (n > kMaxElements) {
        throw capacity_error("cardinality " + std::to_string(n) + " exceeds the enumeration cap of " +
                             std::to_string(kMaxElements));
    }
    const std::uint32_t limit = (std::uint32_t{1} << n) - 1;
    std::vector<SubsetMask> masks;
    masks.reserve(limit);
    for (std::uint32_t bits = 1; bits <= limit; ++bits) {
        masks.push_back(SubsetMask{bits});
    }
    return masks;
}

}  // namespace subsetlab
