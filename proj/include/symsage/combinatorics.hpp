#pragma once

#include "symsage/bigint.hpp"
#include "symsage/exponent.hpp"
#include "symsage/group.hpp"

#include <span>
#include <string>
#include <vector>

namespace symsage {

/// Weakly decreasing list of positive integers.
class IntegerPartition {
public:
    IntegerPartition() = default;
    /// Parts must be positive; they are sorted into weakly decreasing order.
    explicit IntegerPartition(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    int sum() const;
    std::size_t length() const { return parts_.size(); }
    std::string to_string() const;

    friend bool operator==(const IntegerPartition&, const IntegerPartition&) = default;
    friend auto operator<=>(const IntegerPartition&, const IntegerPartition&) = default;

private:
    std::vector<int> parts_;
};

/// All partitions of n, in reverse lexicographic order starting with (n).
std::vector<IntegerPartition> partitions_of(int n);

struct OrbitTypeInfo {
    IntegerPartition full_type;     // multiplicities of all distinct entries
    IntegerPartition reduced_type;  // multiplicities of the nonzero entries
    int weight = 0;                 // number of nonzero entries
    int length = 0;                 // number of distinct entries
};

OrbitTypeInfo orbit_type(const ExponentVector& alpha);

/// Number of nonnegative integer matrices with row sums `rows` and column sums `cols`.
BigInt count_contingency(std::span<const int> rows, std::span<const int> cols);
BigInt count_contingency(const IntegerPartition& rows, const IntegerPartition& cols);

/// u(w) = sum_{i=0}^{w} C(w,i)^2 i!.
BigInt u_count(int w);

/// |Stab(alpha) \ G / Stab(beta)|.
BigInt double_coset_count(const PermutationGroup& group, const ExponentVector& alpha,
                          const ExponentVector& beta);

enum class ProgramMode { Standard, Reduced };

std::string to_string(ProgramMode mode);

struct SizePrediction {
    BigInt variables = 0;
    BigInt equalities = 0;
    BigInt inequalities = 0;
    ProgramMode mode = ProgramMode::Reduced;
    bool includes_bound_variable = false;

    BigInt constraints() const { return equalities + inequalities; }
};

struct SizeOptions {
    /// Box support: two auxiliary variables per equality row.
    bool box = false;
    /// The zero exponent, which must be in `inner`, also owns an AGE block.
    bool origin_block = false;
};

/// Exact sizes of the program built from inner classes (positive terms, A-hat)
/// and outer classes (negative terms, B-hat).
///
/// Reduced: 2 * sum of double coset counts variables, one equality per
/// coordinate orbit of each Stab(beta-hat), |A-hat| + |B-hat| inequalities.
/// Standard: the same on the expanded sets with the trivial group.
SizePrediction predict_sizes(std::span<const OrbitClass> inner, std::span<const OrbitClass> outer,
                             const PermutationGroup& group, ProgramMode mode,
                             bool with_bound_variable, const SizeOptions& options = {});

/// 2 * max weight over the given representatives.
int stabilization_threshold(std::span<const ExponentVector> inner, std::span<const ExponentVector> outer);

/// Appends zeros up to length n.
ExponentVector pad_exponent(const ExponentVector& alpha, std::size_t n);

}  // namespace symsage
