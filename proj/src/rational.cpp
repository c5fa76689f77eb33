#include "symsage/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace symsage {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return out;
}

std::int64_t parse_int(std::string_view text)
{
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den)
{
    if (den_ == 0) {
        throw std::invalid_argument("rational with zero denominator");
    }
    if (den_ < 0) {
        num_ = checked_mul(num_, -1);
        den_ = checked_mul(den_, -1);
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::parse(std::string_view text)
{
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_int(text));
    }
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::string Rational::to_string() const
{
    if (den_ == 1) {
        return std::to_string(num_);
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const
{
    return Rational(checked_mul(num_, -1), den_);
}

Rational& Rational::operator+=(const Rational& other)
{
    const std::int64_t g = std::gcd(den_, other.den_);
    const std::int64_t lhs = checked_mul(num_, other.den_ / g);
    const std::int64_t rhs = checked_mul(other.num_, den_ / g);
    *this = Rational(checked_add(lhs, rhs), checked_mul(den_ / g, other.den_));
    return *this;
}

Rational& Rational::operator-=(const Rational& other)
{
    return *this += -other;
}

Rational& Rational::operator*=(const Rational& other)
{
    const std::int64_t g1 = std::gcd(num_, other.den_);
    const std::int64_t g2 = std::gcd(other.num_, den_);
    // denominators are positive, so both gcds are >= 1
    const std::int64_t n = checked_mul(num_ / g1, other.num_ / g2);
    const std::int64_t d = checked_mul(den_ / g2, other.den_ / g1);
    *this = Rational(n, d);
    return *this;
}

Rational& Rational::operator/=(const Rational& other)
{
    if (other.num_ == 0) {
        throw std::domain_error("rational division by zero");
    }
    return *this *= Rational(other.den_, other.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) {
        return std::strong_ordering::less;
    }
    if (lhs > rhs) {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

}  // namespace symsage
