#pragma once

#include <stdexcept>
#include <string>

namespace subsetlab {

/// A configured resource cap was exceeded (input cardinality, table cells,
/// family expansion width).
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

/// A bounded search ran out of budget before finding what it was asked for.
class search_exhausted_error : public std::runtime_error {
public:
    explicit search_exhausted_error(const std::string& what) : std::runtime_error(what) {}
};

/// A dependency walk revisited a node, witnessing an unbounded chain.
class chain_cycle_error : public std::runtime_error {
public:
    explicit chain_cycle_error(const std::string& what) : std::runtime_error(what) {}
};

/// The requested step checks no subject in any distribution seen so far.
class not_a_main_step_error : public std::invalid_argument {
public:
    explicit not_a_main_step_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace subsetlab
