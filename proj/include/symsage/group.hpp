#pragma once

#include "symsage/bigint.hpp"
#include "symsage/exponent.hpp"

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace symsage {

/// Bijection of {0, ..., n-1}; image(i) is sigma(i).
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images);

    static Permutation identity(std::size_t degree);
    /// Cycles use 1-based points, e.g. from_cycles(3, {{1, 2, 3}}) is 1->2->3->1.
    static Permutation from_cycles(std::size_t degree,
                                   std::initializer_list<std::initializer_list<int>> cycles);
    static Permutation transposition(std::size_t degree, int a, int b);

    std::size_t degree() const { return images_.size(); }
    int operator()(std::size_t i) const { return images_[i]; }
    std::span<const int> images() const { return images_; }
    bool is_identity() const;
    Permutation inverse() const;

    /// (a * b)(i) = a(b(i)).
    friend Permutation operator*(const Permutation& a, const Permutation& b);
    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> images_;
};

/// Coordinate action sigma(alpha)_{sigma(j)} = alpha_j, i.e. (alpha_{sigma^{-1}(1)}, ...).
ExponentVector act(const Permutation& sigma, const ExponentVector& alpha);

/// Finite group of coordinate permutations.
///
/// Two representations: Young subgroups S_{b1} x ... x S_{bk} of explicit
/// coordinate blocks (the full symmetric group and the trivial group are the
/// one-block and all-singleton cases), answered combinatorially without ever
/// listing elements; and groups given by generators, answered by orbit
/// search and, where a group order is needed, by enumeration capped at
/// kEnumerationLimit elements.
class PermutationGroup {
public:
    enum class Kind { Young, Generated };

    static constexpr std::size_t kEnumerationLimit = 1'000'000;

    static PermutationGroup symmetric(std::size_t degree);
    static PermutationGroup trivial(std::size_t degree);
    /// Blocks are 0-based and must partition {0..n-1}; missing points become singletons.
    static PermutationGroup young(std::size_t degree, std::vector<std::vector<int>> blocks);
    static PermutationGroup generated(std::size_t degree, std::vector<Permutation> generators);

    std::size_t degree() const { return degree_; }
    Kind kind() const { return kind_; }
    bool is_young() const { return kind_ == Kind::Young; }
    bool is_full_symmetric() const;
    bool is_trivial() const;

    /// Young blocks sorted by smallest point (only for Kind::Young).
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    /// Block index of each coordinate (only for Kind::Young).
    const std::vector<int>& block_of() const { return block_of_; }

    /// For Young groups: adjacent transpositions inside each block.
    const std::vector<Permutation>& generators() const { return generators_; }

    BigInt order() const;
    /// All elements; throws std::length_error beyond kEnumerationLimit.
    const std::vector<Permutation>& elements() const;

    nlohmann::json to_json() const;
    static PermutationGroup from_json(const nlohmann::json& document);
    std::string describe() const;

private:
    struct ElementCache;

    PermutationGroup(std::size_t degree, Kind kind);

    std::size_t degree_ = 0;
    Kind kind_ = Kind::Young;
    std::vector<std::vector<int>> blocks_;
    std::vector<int> block_of_;
    std::vector<Permutation> generators_;
    std::shared_ptr<ElementCache> cache_;
};

/// A G-orbit (or H-suborbit) with exact size; elements are filled only when
/// the class was materialized.
struct OrbitClass {
    ExponentVector representative;
    BigInt size;
    std::vector<ExponentVector> elements;
};

inline constexpr std::size_t kOrbitBudget = 2'000'000;

/// Lexicographically greatest element of the orbit of alpha.
ExponentVector canonical_representative(const PermutationGroup& group, const ExponentVector& alpha);

OrbitClass orbit(const PermutationGroup& group, const ExponentVector& alpha,
                 std::size_t budget = kOrbitBudget);
BigInt orbit_size(const PermutationGroup& group, const ExponentVector& alpha);
BigInt stabilizer_order(const PermutationGroup& group, const ExponentVector& alpha);
PermutationGroup stabilizer(const PermutationGroup& group, const ExponentVector& alpha);

/// Orbits of the coordinate set {0..n-1} under the group; their number is the
/// dimension of the fixed subspace of R^n.
std::vector<std::vector<int>> coordinate_orbits(const PermutationGroup& group);

/// One class per G-orbit of a G-closed set S, with canonical representatives.
/// Throws std::invalid_argument when S is not closed under G.
std::vector<OrbitClass> orbit_representatives(const PermutationGroup& group,
                                              std::span<const ExponentVector> set);

/// Partition of an H-closed set into H-orbits.
std::vector<OrbitClass> suborbits(const PermutationGroup& subgroup,
                                  std::span<const ExponentVector> set);

/// H-orbits inside the G-orbit of alpha, without materializing the orbit
/// when both groups are Young and H refines G.
std::vector<OrbitClass> orbit_suborbits(const PermutationGroup& group, const ExponentVector& alpha,
                                        const PermutationGroup& subgroup);

/// Left coset representatives of G / Stab(beta): pairs (rho, rho(beta)), one
/// per orbit element. Materializes the orbit of beta.
std::vector<std::pair<Permutation, ExponentVector>> coset_representatives(
    const PermutationGroup& group, const ExponentVector& beta, std::size_t budget = kOrbitBudget);

}  // namespace symsage
