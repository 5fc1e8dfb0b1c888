#include "cts/cost.hpp"

namespace cts {

CostVector::CostVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
    for (size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].second < 0)
            throw UsageError("cost value at level " +
                             std::to_string(entries_[i].first) + " is negative");
        if (i > 0 && entries_[i - 1].first <= entries_[i].first)
            throw UsageError("cost levels must be strictly descending");
    }
}

long long CostVector::at(int level) const {
    for (const Entry& e : entries_)
        if (e.first == level) return e.second;
    throw UsageError("cost vector has no level " + std::to_string(level));
}

bool CostVector::has_level(int level) const {
    for (const Entry& e : entries_)
        if (e.first == level) return true;
    return false;
}

bool CostVector::same_levels(const CostVector& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    for (size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].first != other.entries_[i].first) return false;
    return true;
}

bool CostVector::all_zero() const {
    for (const Entry& e : entries_)
        if (e.second != 0) return false;
    return true;
}

std::string CostVector::to_string() const {
    std::string out = "[";
    for (size_t i = 0; i < entries_.size(); ++i) {
        if (i > 0) out += ' ';
        out += std::to_string(entries_[i].first);
        out += ':';
        out += std::to_string(entries_[i].second);
    }
    out += ']';
    return out;
}

bool dominates(const CostVector& a, const CostVector& b) {
    if (!a.same_levels(b))
        throw UsageError("dominates: cost vectors have different level sets");
    for (size_t i = 0; i < a.entries().size(); ++i) {
        long long va = a.entries()[i].second;
        long long vb = b.entries()[i].second;
        if (va != vb) return va < vb;
    }
    return false;
}

}  // namespace cts
