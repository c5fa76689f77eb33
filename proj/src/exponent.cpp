#include "symsage/exponent.hpp"
#include "symsage/bigint.hpp"

#include <stdexcept>

namespace symsage {

ExponentVector::ExponentVector(std::initializer_list<std::int64_t> entries)
{
    entries_.reserve(entries.size());
    for (auto e : entries) {
        entries_.emplace_back(e);
    }
}

bool ExponentVector::is_zero() const
{
    for (const auto& r : entries_) {
        if (!r.is_zero()) {
            return false;
        }
    }
    return true;
}

long double ExponentVector::dot(std::span<const double> x) const
{
    if (x.size() != entries_.size()) {
        throw std::invalid_argument("dimension mismatch in exponent inner product");
    }
    long double acc = 0.0L;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!entries_[i].is_zero()) {
            acc += entries_[i].to_long_double() * static_cast<long double>(x[i]);
        }
    }
    return acc;
}

std::vector<double> ExponentVector::to_doubles() const
{
    std::vector<double> out;
    out.reserve(entries_.size());
    for (const auto& r : entries_) {
        out.push_back(r.to_double());
    }
    return out;
}

std::string ExponentVector::to_string() const
{
    std::string out = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) {
            out += ",";
        }
        out += entries_[i].to_string();
    }
    return out + ")";
}

ExponentVector zero_exponent(std::size_t dimension)
{
    return ExponentVector(dimension);
}

BigInt factorial(std::uint64_t n)
{
    BigInt out = 1;
    for (std::uint64_t i = 2; i <= n; ++i) {
        out *= i;
    }
    return out;
}

BigInt binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    BigInt out = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        out *= n - k + i;
        out /= i;
    }
    return out;
}

double count_to_double(const BigInt& value, bool allow_inexact)
{
    if (!allow_inexact && abs(value) > float_exact_limit()) {
        throw std::overflow_error("count " + value.str() +
                                  " exceeds 2^53 and cannot be represented exactly as a double");
    }
    return value.convert_to<double>();
}

double ratio_to_double(const BigRational& value, bool allow_inexact)
{
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (!allow_inexact &&
        (abs(numerator(value)) > float_exact_limit() || denominator(value) > float_exact_limit())) {
        throw std::overflow_error("ratio " + value.str() + " has terms exceeding 2^53");
    }
    return value.convert_to<double>();
}

}  // namespace symsage
