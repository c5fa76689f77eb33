#include "symsage/combinatorics.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace symsage {

IntegerPartition::IntegerPartition(std::vector<int> parts) : parts_(std::move(parts))
{
    for (int p : parts_) {
        if (p <= 0) {
            throw std::invalid_argument("partition parts must be positive");
        }
    }
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

int IntegerPartition::sum() const
{
    return std::accumulate(parts_.begin(), parts_.end(), 0);
}

std::string IntegerPartition::to_string() const
{
    std::string out = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        out += (i ? "," : "") + std::to_string(parts_[i]);
    }
    return out + ")";
}

std::vector<IntegerPartition> partitions_of(int n)
{
    std::vector<IntegerPartition> out;
    std::vector<int> current;
    std::function<void(int, int)> rec = [&](int remaining, int cap) {
        if (remaining == 0) {
            out.emplace_back(current);
            return;
        }
        for (int p = std::min(remaining, cap); p >= 1; --p) {
            current.push_back(p);
            rec(remaining - p, p);
            current.pop_back();
        }
    };
    if (n > 0) {
        rec(n, n);
    }
    return out;
}

OrbitTypeInfo orbit_type(const ExponentVector& alpha)
{
    std::map<Rational, int> counts;
    for (const auto& r : alpha) {
        ++counts[r];
    }
    std::vector<int> full;
    std::vector<int> reduced;
    for (const auto& [value, count] : counts) {
        full.push_back(count);
        if (!value.is_zero()) {
            reduced.push_back(count);
        }
    }
    OrbitTypeInfo info;
    info.full_type = IntegerPartition(std::move(full));
    info.reduced_type = IntegerPartition(std::move(reduced));
    info.weight = info.reduced_type.sum();
    info.length = static_cast<int>(info.full_type.length());
    return info;
}

BigInt count_contingency(std::span<const int> rows, std::span<const int> cols)
{
    for (int v : rows) {
        if (v < 0) {
            throw std::invalid_argument("negative row sum");
        }
    }
    for (int v : cols) {
        if (v < 0) {
            throw std::invalid_argument("negative column sum");
        }
    }
    const long total_rows = std::accumulate(rows.begin(), rows.end(), 0L);
    const long total_cols = std::accumulate(cols.begin(), cols.end(), 0L);
    if (total_rows != total_cols) {
        return 0;
    }

    // Columns left to right; state is the sorted multiset of residual row sums.
    std::vector<int> start;
    for (int r : rows) {
        if (r > 0) {
            start.push_back(r);
        }
    }
    std::sort(start.begin(), start.end(), std::greater<>());
    std::vector<int> columns;
    for (int c : cols) {
        if (c > 0) {
            columns.push_back(c);
        }
    }
    std::map<std::pair<std::size_t, std::vector<int>>, BigInt> memo;

    std::function<BigInt(std::size_t, const std::vector<int>&)> count =
        [&](std::size_t j, const std::vector<int>& residual) -> BigInt {
        if (j == columns.size()) {
            return residual.empty() ? BigInt(1) : BigInt(0);
        }
        if (j + 1 == columns.size()) {
            // The last column is forced to equal the residuals.
            return BigInt(1);
        }
        auto key = std::make_pair(j, residual);
        if (auto it = memo.find(key); it != memo.end()) {
            return it->second;
        }
        BigInt total = 0;
        std::vector<int> take(residual.size(), 0);
        std::vector<int> suffix(residual.size() + 1, 0);
        for (std::size_t i = residual.size(); i-- > 0;) {
            suffix[i] = suffix[i + 1] + residual[i];
        }
        std::function<void(std::size_t, int)> split = [&](std::size_t i, int remaining) {
            if (i == residual.size()) {
                if (remaining == 0) {
                    std::vector<int> next;
                    for (std::size_t r = 0; r < residual.size(); ++r) {
                        if (residual[r] - take[r] > 0) {
                            next.push_back(residual[r] - take[r]);
                        }
                    }
                    std::sort(next.begin(), next.end(), std::greater<>());
                    total += count(j + 1, next);
                }
                return;
            }
            if (remaining > suffix[i]) {
                return;
            }
            for (int v = std::min(remaining, residual[i]); v >= 0; --v) {
                take[i] = v;
                split(i + 1, remaining - v);
            }
            take[i] = 0;
        };
        split(0, columns[j]);
        memo.emplace(std::move(key), total);
        return total;
    };
    return count(0, start);
}

BigInt count_contingency(const IntegerPartition& rows, const IntegerPartition& cols)
{
    return count_contingency(std::span<const int>(rows.parts()), std::span<const int>(cols.parts()));
}

BigInt u_count(int w)
{
    if (w < 0) {
        throw std::invalid_argument("u(w) requires w >= 0");
    }
    BigInt out = 0;
    for (int i = 0; i <= w; ++i) {
        const BigInt c = binomial(w, i);
        out += c * c * factorial(i);
    }
    return out;
}

namespace {

std::vector<int> value_counts(const ExponentVector& alpha, std::span<const int> block)
{
    std::map<Rational, int> counts;
    for (int p : block) {
        ++counts[alpha[p]];
    }
    std::vector<int> out;
    for (const auto& [value, count] : counts) {
        out.push_back(count);
    }
    return out;
}

}  // namespace

BigInt double_coset_count(const PermutationGroup& group, const ExponentVector& alpha,
                          const ExponentVector& beta)
{
    if (alpha.size() != group.degree() || beta.size() != group.degree()) {
        throw std::invalid_argument("exponent length does not match group degree");
    }
    if (group.is_young()) {
        BigInt out = 1;
        for (const auto& block : group.blocks()) {
            out *= count_contingency(value_counts(alpha, block), value_counts(beta, block));
        }
        return out;
    }
    // Burnside: orbits of Stab(alpha) on G.beta, averaging fixed points.
    const auto stab = stabilizer(group, alpha);
    const auto targets = orbit(group, beta);
    BigInt fixed = 0;
    for (const auto& h : stab.elements()) {
        for (const auto& gamma : targets.elements) {
            if (act(h, gamma) == gamma) {
                fixed += 1;
            }
        }
    }
    return fixed / BigInt(stab.elements().size());
}

std::string to_string(ProgramMode mode)
{
    return mode == ProgramMode::Standard ? "standard" : "reduced";
}

SizePrediction predict_sizes(std::span<const OrbitClass> inner, std::span<const OrbitClass> outer,
                             const PermutationGroup& group, ProgramMode mode,
                             bool with_bound_variable, const SizeOptions& options)
{
    SizePrediction out;
    out.mode = mode;
    out.includes_bound_variable = with_bound_variable;
    if (outer.empty() && !options.origin_block) {
        out.variables = with_bound_variable ? 1 : 0;
        out.inequalities = inner.size();
        if (mode == ProgramMode::Standard) {
            out.inequalities = 0;
            for (const auto& cls : inner) {
                out.inequalities += cls.size;
            }
        }
        return out;
    }
    const BigInt n = group.degree();
    const auto is_origin = [](const OrbitClass& c) { return c.representative.is_zero(); };
    const bool has_origin = std::any_of(inner.begin(), inner.end(), is_origin);
    if (options.origin_block && !has_origin) {
        throw std::invalid_argument("origin block requested but the origin is not an inner term");
    }

    if (mode == ProgramMode::Standard) {
        BigInt a = 0;
        BigInt b = 0;
        for (const auto& cls : inner) {
            a += cls.size;
        }
        for (const auto& cls : outer) {
            b += cls.size;
        }
        out.variables = 2 * a * b;
        out.equalities = n * b;
        out.inequalities = a + b;
        if (options.origin_block) {
            out.variables += 2 * (a - 1);
            out.equalities += n;
        }
    } else {
        for (const auto& beta : outer) {
            for (const auto& alpha : inner) {
                out.variables += 2 * double_coset_count(group, alpha.representative, beta.representative);
            }
            out.equalities += coordinate_orbits(stabilizer(group, beta.representative)).size();
        }
        out.inequalities = inner.size() + outer.size();
        if (options.origin_block) {
            out.variables += 2 * BigInt(inner.size() - 1);
            out.equalities += coordinate_orbits(group).size();
        }
    }
    if (options.box) {
        // Two sign-split auxiliaries per projected equality row.
        out.variables += 2 * out.equalities;
    }
    if (with_bound_variable) {
        out.variables += 1;
    }
    return out;
}

int stabilization_threshold(std::span<const ExponentVector> inner, std::span<const ExponentVector> outer)
{
    int m = 0;
    for (const auto* set : {&inner, &outer}) {
        for (const auto& alpha : *set) {
            m = std::max(m, orbit_type(alpha).weight);
        }
    }
    return 2 * m;
}

ExponentVector pad_exponent(const ExponentVector& alpha, std::size_t n)
{
    if (n < alpha.size()) {
        throw std::invalid_argument("cannot pad an exponent of length " + std::to_string(alpha.size()) +
                                    " down to " + std::to_string(n));
    }
    std::vector<Rational> entries(alpha.begin(), alpha.end());
    entries.resize(n);
    return ExponentVector(std::move(entries));
}

}  // namespace symsage
