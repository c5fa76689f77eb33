#pragma once

#include "symsage/rational.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace symsage {

/// Exponent vector of a signomial term. Ordering is exact lexicographic.
class ExponentVector {
public:
    ExponentVector() = default;
    explicit ExponentVector(std::size_t dimension) : entries_(dimension) {}
    explicit ExponentVector(std::vector<Rational> entries) : entries_(std::move(entries)) {}
    ExponentVector(std::initializer_list<std::int64_t> entries);

    std::size_t size() const { return entries_.size(); }
    const Rational& operator[](std::size_t i) const { return entries_[i]; }
    Rational& operator[](std::size_t i) { return entries_[i]; }
    std::span<const Rational> entries() const { return entries_; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }
    auto begin() { return entries_.begin(); }
    auto end() { return entries_.end(); }

    bool is_zero() const;
    /// Inner product with a real point, evaluated in long double.
    long double dot(std::span<const double> x) const;
    std::vector<double> to_doubles() const;
    std::string to_string() const;

    friend bool operator==(const ExponentVector&, const ExponentVector&) = default;
    friend std::strong_ordering operator<=>(const ExponentVector& a, const ExponentVector& b)
    {
        return std::lexicographical_compare_three_way(a.entries_.begin(), a.entries_.end(),
                                                      b.entries_.begin(), b.entries_.end());
    }
    friend std::ostream& operator<<(std::ostream& os, const ExponentVector& v)
    {
        return os << v.to_string();
    }

private:
    std::vector<Rational> entries_;
};

/// Zero vector of the given length.
ExponentVector zero_exponent(std::size_t dimension);

}  // namespace symsage

template <>
struct std::hash<symsage::ExponentVector> {
    std::size_t operator()(const symsage::ExponentVector& v) const noexcept
    {
        std::size_t h = v.size();
        for (const auto& r : v) {
            h ^= std::hash<symsage::Rational>{}(r) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};
