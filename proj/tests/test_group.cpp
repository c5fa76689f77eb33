#include <doctest.h>

#include "oracles.hpp"
#include "symsage/group.hpp"

#include <random>

using namespace symsage;

namespace {

std::vector<ExponentVector> eight_point_support()
{
    return {ExponentVector{0, 0, 0}, ExponentVector{7, 0, 0}, ExponentVector{0, 7, 0},
            ExponentVector{0, 0, 7}, ExponentVector{1, 1, 2}, ExponentVector{1, 2, 1},
            ExponentVector{2, 1, 1}, ExponentVector{2, 2, 2}};
}

ExponentVector random_exponent(std::mt19937& rng, std::size_t n, int max_value)
{
    std::uniform_int_distribution<int> d(0, max_value);
    std::vector<Rational> entries;
    for (std::size_t i = 0; i < n; ++i) {
        entries.emplace_back(d(rng));
    }
    return ExponentVector(std::move(entries));
}

}  // namespace

TEST_CASE("act permutes coordinates")
{
    const auto cycle = Permutation::from_cycles(3, {{1, 2, 3}});
    CHECK(act(cycle, ExponentVector{1, 2, 2}) == ExponentVector{2, 1, 2});
    CHECK(act(Permutation::identity(3), ExponentVector{4, 5, 6}) == ExponentVector{4, 5, 6});
    CHECK(act(Permutation::from_cycles(3, {{2, 3}}), ExponentVector{1, 2, 2}) == ExponentVector{1, 2, 2});
    CHECK_THROWS_AS(act(cycle, ExponentVector{1, 2}), std::invalid_argument);
}

TEST_CASE("act respects composition")
{
    std::mt19937 rng(3);
    const auto perms = oracle::all_permutations(4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto& s = perms[rng() % perms.size()];
        const auto& t = perms[rng() % perms.size()];
        const auto alpha = random_exponent(rng, 4, 5);
        CHECK(act(s * t, alpha) == act(s, act(t, alpha)));
    }
}

TEST_CASE("orbits")
{
    const auto s3 = PermutationGroup::symmetric(3);
    auto o = orbit(s3, ExponentVector{1, 2, 2});
    CHECK(o.size == 3);
    CHECK(o.elements == std::vector<ExponentVector>{{1, 2, 2}, {2, 1, 2}, {2, 2, 1}});
    CHECK(o.representative == ExponentVector{2, 2, 1});
    CHECK(orbit(s3, ExponentVector{4, 4, 4}).elements.size() == 1);
    CHECK(orbit(s3, ExponentVector{1, 2, 3}).elements.size() == 6);
}

TEST_CASE("orbit and stabilizer sizes")
{
    CHECK(orbit_size(PermutationGroup::symmetric(5), ExponentVector{1, 2, 3, 4, 5}) == 120);
    CHECK(stabilizer_order(PermutationGroup::symmetric(5), ExponentVector{1, 2, 3, 4, 5}) == 1);
    CHECK(orbit_size(PermutationGroup::symmetric(6), ExponentVector{1, 1, 1, 1, 1, 1}) == 1);
    CHECK(stabilizer_order(PermutationGroup::symmetric(6), ExponentVector{1, 1, 1, 1, 1, 1}) == 720);
    CHECK(orbit_size(PermutationGroup::symmetric(7), ExponentVector{4, 2, 0, 0, 0, 0, 0}) == 42);

    // Large n is answered without enumeration.
    std::vector<Rational> big(350, Rational(349));
    big[0] = Rational(350);
    CHECK(orbit_size(PermutationGroup::symmetric(350), ExponentVector(big)) == 350);
}

TEST_CASE("stabilizers")
{
    const auto s3 = PermutationGroup::symmetric(3);
    auto h = stabilizer(s3, ExponentVector{1, 2, 2});
    CHECK(h.order() == 2);
    CHECK(h.elements().size() == 2);
    CHECK(h.elements()[1] == Permutation::from_cycles(3, {{2, 3}}));
    CHECK(stabilizer(s3, ExponentVector{5, 5, 5}).order() == 6);
    CHECK(stabilizer(PermutationGroup::symmetric(4), ExponentVector{1, 1, 2, 2}).order() == 4);
}

TEST_CASE("symmetric fast path agrees with the generated path for n <= 5")
{
    std::mt19937 rng(11);
    for (std::size_t n = 1; n <= 5; ++n) {
        const auto fast = PermutationGroup::symmetric(n);
        const auto slow = oracle::symmetric_by_transpositions(n);
        const auto all = oracle::all_permutations(n);
        CHECK(fast.order() == slow.order());
        CHECK(fast.elements() == slow.elements());
        for (int trial = 0; trial < 25; ++trial) {
            const auto alpha = random_exponent(rng, n, 2);
            const auto beta = random_exponent(rng, n, 2);
            CHECK(canonical_representative(fast, alpha) == canonical_representative(slow, alpha));
            CHECK(orbit(fast, alpha).elements == orbit(slow, alpha).elements);
            CHECK(orbit_size(fast, alpha) == orbit_size(slow, alpha));
            const auto stab_elements = oracle::stabilizer_elements(all, alpha);
            CHECK(stabilizer_order(fast, alpha) == stab_elements.size());
            CHECK(stabilizer_order(slow, alpha) == stab_elements.size());
            CHECK(stabilizer(fast, alpha).elements() == stab_elements);
            CHECK(stabilizer(slow, alpha).elements() == stab_elements);
            CHECK(orbit_size(fast, alpha) * stabilizer_order(fast, alpha) == fast.order());

            const auto fast_sub = orbit_suborbits(fast, alpha, stabilizer(fast, beta));
            const auto slow_sub = orbit_suborbits(slow, alpha, stabilizer(slow, beta));
            REQUIRE(fast_sub.size() == slow_sub.size());
            for (std::size_t i = 0; i < fast_sub.size(); ++i) {
                CHECK(fast_sub[i].representative == slow_sub[i].representative);
                CHECK(fast_sub[i].size == slow_sub[i].size);
            }
        }
    }
}

TEST_CASE("orbit representatives of the eight-point support")
{
    const auto s3 = PermutationGroup::symmetric(3);
    const auto support = eight_point_support();
    std::vector<ExponentVector> a(support.begin(), support.begin() + 4);
    std::vector<ExponentVector> b(support.begin() + 4, support.end());
    auto a_hat = orbit_representatives(s3, a);
    auto b_hat = orbit_representatives(s3, b);
    REQUIRE(a_hat.size() == 2);
    REQUIRE(b_hat.size() == 2);
    // Same orbits as alpha_0, alpha_1 and alpha_4, alpha_7; representatives are lex-greatest.
    CHECK(a_hat[0].representative == ExponentVector{0, 0, 0});
    CHECK(canonical_representative(s3, a_hat[1].representative) == canonical_representative(s3, support[1]));
    CHECK(a_hat[1].size == 3);
    CHECK(canonical_representative(s3, b_hat[0].representative) == canonical_representative(s3, support[4]));
    CHECK(b_hat[0].size == 3);
    CHECK(b_hat[1].representative == ExponentVector{2, 2, 2});

    CHECK(orbit_representatives(s3, std::vector<ExponentVector>{{1, 2, 2}, {2, 1, 2}, {2, 2, 1}}).size() == 1);
    CHECK_THROWS_AS(orbit_representatives(PermutationGroup::symmetric(2), std::vector<ExponentVector>{{1, 2}}),
                    std::invalid_argument);
}

TEST_CASE("suborbits under stabilizers")
{
    const auto s3 = PermutationGroup::symmetric(3);
    const auto support = eight_point_support();
    std::vector<ExponentVector> a(support.begin(), support.begin() + 4);

    auto h4 = stabilizer(s3, ExponentVector{1, 1, 2});
    auto classes = suborbits(h4, a);
    REQUIRE(classes.size() == 3);
    std::vector<int> sizes;
    for (const auto& c : classes) {
        sizes.push_back(static_cast<int>(c.size));
    }
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<int>{1, 1, 2});
    for (const auto& c : classes) {
        if (c.size == 2) {
            CHECK(c.elements == std::vector<ExponentVector>{{0, 7, 0}, {7, 0, 0}});
        }
    }

    auto h7 = stabilizer(s3, ExponentVector{2, 2, 2});
    auto classes7 = suborbits(h7, a);
    REQUIRE(classes7.size() == 2);
    CHECK(classes7[0].size == 1);
    CHECK(classes7[1].size == 3);

    auto trivial = suborbits(PermutationGroup::trivial(3), a);
    CHECK(trivial.size() == 4);

    auto streamed = orbit_suborbits(s3, ExponentVector{7, 0, 0}, h4);
    REQUIRE(streamed.size() == 2);
    CHECK(streamed[0].size + streamed[1].size == 3);
}

TEST_CASE("suborbit class sizes sum to the orbit and classes are invariant")
{
    std::mt19937 rng(5);
    const auto s5 = PermutationGroup::symmetric(5);
    for (int trial = 0; trial < 40; ++trial) {
        const auto alpha = random_exponent(rng, 5, 3);
        const auto beta = random_exponent(rng, 5, 2);
        const auto h = stabilizer(s5, beta);
        const auto full = orbit(s5, alpha);
        auto classes = suborbits(h, full.elements);
        BigInt total = 0;
        for (const auto& c : classes) {
            total += c.size;
            for (const auto& s : h.generators()) {
                for (const auto& e : c.elements) {
                    CHECK(std::binary_search(c.elements.begin(), c.elements.end(), act(s, e)));
                }
            }
        }
        CHECK(total == full.size);
        auto fast = orbit_suborbits(s5, alpha, h);
        CHECK(fast.size() == classes.size());
    }
}

TEST_CASE("generated groups")
{
    const auto c4 = PermutationGroup::generated(4, {Permutation::from_cycles(4, {{1, 2, 3, 4}})});
    CHECK(c4.order() == 4);
    CHECK(orbit_size(c4, ExponentVector{1, 0, 0, 0}) == 4);
    CHECK(orbit_size(c4, ExponentVector{1, 0, 1, 0}) == 2);
    CHECK(stabilizer_order(c4, ExponentVector{1, 0, 1, 0}) == 2);
    CHECK(stabilizer(c4, ExponentVector{1, 0, 1, 0}).order() == 2);
    CHECK(coordinate_orbits(c4).size() == 1);
    CHECK(coordinate_orbits(PermutationGroup::young(4, {{0, 2}})).size() == 3);

    auto back = PermutationGroup::from_json(c4.to_json());
    CHECK(back.elements() == c4.elements());
    auto sym = PermutationGroup::from_json(nlohmann::json{{"degree", 3}, {"kind", "symmetric"}});
    CHECK(sym.is_full_symmetric());
    CHECK_THROWS_AS(PermutationGroup::from_json(nlohmann::json{{"degree", 3}, {"kind", "bogus"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Permutation(std::vector<int>{0, 0, 1}), std::invalid_argument);
}

TEST_CASE("coset representatives map beta onto each orbit element")
{
    const auto s4 = PermutationGroup::symmetric(4);
    const ExponentVector beta{3, 1, 1, 0};
    auto reps = coset_representatives(s4, beta);
    CHECK(reps.size() == 12);
    for (const auto& [rho, image] : reps) {
        CHECK(act(rho, beta) == image);
    }
    const auto c4 = PermutationGroup::generated(4, {Permutation::from_cycles(4, {{1, 2, 3, 4}})});
    for (const auto& [rho, image] : coset_representatives(c4, beta)) {
        CHECK(act(rho, beta) == image);
    }
}
