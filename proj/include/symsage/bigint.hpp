#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace symsage {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Largest integer below which every integer is exactly representable as a double.
inline const BigInt& float_exact_limit()
{
    static const BigInt limit = BigInt(1) << 53;
    return limit;
}

BigInt factorial(std::uint64_t n);
BigInt binomial(std::uint64_t n, std::uint64_t k);

inline std::string to_string(const BigInt& value) { return value.str(); }

/// Converts a count to double. Throws std::overflow_error when the count
/// exceeds 2^53 and allow_inexact is false.
double count_to_double(const BigInt& value, bool allow_inexact = false);
double ratio_to_double(const BigRational& value, bool allow_inexact = false);

}  // namespace symsage
