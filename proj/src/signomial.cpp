#include "symsage/signomial.hpp"

#include <cmath>
#include <stdexcept>

namespace symsage {

Signomial::Signomial(std::size_t dimension) : dimension_(dimension)
{
    if (dimension_ == 0) {
        throw std::invalid_argument("signomial dimension must be positive");
    }
}

Signomial::Signomial(std::size_t dimension, std::span<const Term> terms) : Signomial(dimension)
{
    for (const auto& [alpha, c] : terms) {
        add_term(alpha, c);
    }
}

Signomial::Signomial(std::size_t dimension, std::initializer_list<Term> terms)
    : Signomial(dimension, std::span<const Term>(terms.begin(), terms.size()))
{
}

double Signomial::coefficient(const ExponentVector& alpha) const
{
    auto it = terms_.find(alpha);
    return it == terms_.end() ? 0.0 : it->second;
}

std::vector<ExponentVector> Signomial::support() const
{
    std::vector<ExponentVector> out;
    out.reserve(terms_.size());
    for (const auto& [alpha, c] : terms_) {
        out.push_back(alpha);
    }
    return out;
}

void Signomial::add_term(const ExponentVector& alpha, double c)
{
    if (alpha.size() != dimension_) {
        throw std::invalid_argument("exponent " + alpha.to_string() + " has length " +
                                    std::to_string(alpha.size()) + ", expected " +
                                    std::to_string(dimension_));
    }
    if (!std::isfinite(c)) {
        throw std::invalid_argument("non-finite coefficient at exponent " + alpha.to_string());
    }
    if (c == 0.0) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) {
            terms_.erase(it);
        }
    }
}

double Signomial::evaluate(std::span<const double> x) const
{
    if (x.size() != dimension_) {
        throw std::invalid_argument("evaluation point has length " + std::to_string(x.size()) +
                                    ", expected " + std::to_string(dimension_));
    }
    long double acc = 0.0L;
    for (const auto& [alpha, c] : terms_) {
        acc += static_cast<long double>(c) * std::exp(alpha.dot(x));
    }
    return static_cast<double>(acc);
}

SignSupport sign_partition(const Signomial& f)
{
    SignSupport out;
    for (const auto& [alpha, c] : f) {
        (c > 0 ? out.positives : out.negatives).push_back(alpha);
    }
    return out;
}

nlohmann::json exponent_to_json(const ExponentVector& alpha)
{
    auto entries = nlohmann::json::array();
    for (const auto& r : alpha) {
        if (r.is_integer()) {
            entries.push_back(r.num());
        } else {
            entries.push_back(r.to_string());
        }
    }
    return entries;
}

ExponentVector exponent_from_json(const nlohmann::json& entries)
{
    if (!entries.is_array()) {
        throw std::invalid_argument("exponent must be an array");
    }
    std::vector<Rational> values;
    values.reserve(entries.size());
    for (const auto& e : entries) {
        if (e.is_number_integer()) {
            values.emplace_back(e.get<std::int64_t>());
        } else if (e.is_string()) {
            values.push_back(Rational::parse(e.get<std::string>()));
        } else if (e.is_number_float()) {
            const double v = e.get<double>();
            if (v != std::floor(v) || std::abs(v) > 9.0e15) {
                throw std::invalid_argument("exponent entries must be integers or \"p/q\" strings");
            }
            values.emplace_back(static_cast<std::int64_t>(v));
        } else {
            throw std::invalid_argument("exponent entries must be integers or \"p/q\" strings");
        }
    }
    return ExponentVector(std::move(values));
}

Signomial parse_signomial(const nlohmann::json& document)
{
    if (!document.is_object() || !document.contains("dimension") || !document.contains("terms")) {
        throw std::invalid_argument("signomial document needs \"dimension\" and \"terms\"");
    }
    const auto& dim = document.at("dimension");
    if (!dim.is_number_integer() || dim.get<std::int64_t>() <= 0) {
        throw std::invalid_argument("\"dimension\" must be a positive integer");
    }
    Signomial f(dim.get<std::size_t>());
    const auto& terms = document.at("terms");
    if (!terms.is_array()) {
        throw std::invalid_argument("\"terms\" must be an array");
    }
    for (const auto& term : terms) {
        if (!term.is_object() || !term.contains("exponent") || !term.contains("coefficient")) {
            throw std::invalid_argument("each term needs \"exponent\" and \"coefficient\"");
        }
        const auto& coeff = term.at("coefficient");
        if (!coeff.is_number()) {
            throw std::invalid_argument("coefficient must be a number");
        }
        f.add_term(exponent_from_json(term.at("exponent")), coeff.get<double>());
    }
    return f;
}

Signomial parse_signomial(std::string_view text)
{
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed signomial document: ") + e.what());
    }
    return parse_signomial(document);
}

nlohmann::json to_json(const Signomial& f)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [alpha, c] : f) {
        terms.push_back({{"exponent", exponent_to_json(alpha)}, {"coefficient", c}});
    }
    return {{"dimension", f.dimension()}, {"terms", std::move(terms)}};
}

}  // namespace symsage
