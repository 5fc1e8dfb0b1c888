#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cts/errors.hpp"

namespace cts {

// One value per weak-constraint level, ordered by strictly descending
// level. Comparison is lexicographic: a higher level always outranks
// everything below it.
class CostVector {
public:
    using Entry = std::pair<int, long long>;  // (level, value)

    CostVector() = default;
    explicit CostVector(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    // Value at a level; throws UsageError when the level is absent.
    long long at(int level) const;
    bool has_level(int level) const;
    bool same_levels(const CostVector& other) const;
    bool all_zero() const;

    // "[7:0 6:1 5:0 4:2]"
    std::string to_string() const;

    bool operator==(const CostVector&) const = default;

private:
    std::vector<Entry> entries_;
};

// Strict lexicographic dominance over vectors with identical level sets.
// Irreflexive; throws UsageError when the level sets differ.
bool dominates(const CostVector& a, const CostVector& b);

}  // namespace cts
