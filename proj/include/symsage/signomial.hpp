#pragma once

#include "symsage/exponent.hpp"

#include <map>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace symsage {

class PermutationGroup;

/// Finite sum  sum_alpha c_alpha * exp(<alpha, x>)  with exact exponents.
///
/// Terms are kept in lexicographic exponent order. Duplicate exponents are
/// merged at construction and exact-zero coefficients are dropped, so every
/// stored coefficient is nonzero.
class Signomial {
public:
    using Term = std::pair<ExponentVector, double>;
    using TermMap = std::map<ExponentVector, double>;

    explicit Signomial(std::size_t dimension);
    Signomial(std::size_t dimension, std::span<const Term> terms);
    Signomial(std::size_t dimension, std::initializer_list<Term> terms);

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

    /// Coefficient of exp(<alpha, x>), zero when alpha is not in the support.
    double coefficient(const ExponentVector& alpha) const;
    bool contains(const ExponentVector& alpha) const { return terms_.contains(alpha); }
    std::vector<ExponentVector> support() const;

    /// Adds c * exp(<alpha, x>), dropping the term if it cancels exactly.
    void add_term(const ExponentVector& alpha, double c);

    double evaluate(std::span<const double> x) const;

    friend bool operator==(const Signomial&, const Signomial&) = default;

private:
    std::size_t dimension_;
    TermMap terms_;
};

/// Exponents with positive (A) and negative (B) coefficients.
struct SignSupport {
    std::vector<ExponentVector> positives;
    std::vector<ExponentVector> negatives;
};

SignSupport sign_partition(const Signomial& f);

/// Reynolds average (1/|G|) sum_sigma sigma f, computed orbit-wise on exponents.
Signomial symmetrize(const Signomial& f, const PermutationGroup& group);

/// True when every generator maps each term to a term with the same
/// coefficient, within tol relative to max(1, |c|).
bool check_invariance(const Signomial& f, const PermutationGroup& group, double tol = 1e-9);

Signomial parse_signomial(const nlohmann::json& document);
Signomial parse_signomial(std::string_view text);
nlohmann::json to_json(const Signomial& f);

nlohmann::json exponent_to_json(const ExponentVector& alpha);
ExponentVector exponent_from_json(const nlohmann::json& entries);

}  // namespace symsage
