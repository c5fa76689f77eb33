#pragma once

// Brute-force reference computations used to cross-check the library.

#include "symsage/group.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

/// Counts tables by visiting cells in row-major order, bounding each cell by
/// the residual row and column sums; every complete table is visited once.
inline std::uint64_t brute_force_tables(const std::vector<int>& rows, const std::vector<int>& cols)
{
    const std::size_t k = rows.size();
    const std::size_t l = cols.size();
    std::vector<int> row_left(rows);
    std::vector<int> col_left(cols);
    std::uint64_t count = 0;
    std::function<void(std::size_t)> fill = [&](std::size_t idx) {
        if (idx == k * l) {
            bool done = std::all_of(row_left.begin(), row_left.end(), [](int v) { return v == 0; }) &&
                        std::all_of(col_left.begin(), col_left.end(), [](int v) { return v == 0; });
            count += done ? 1 : 0;
            return;
        }
        const std::size_t i = idx / l;
        const std::size_t j = idx % l;
        for (int v = 0; v <= std::min(row_left[i], col_left[j]); ++v) {
            row_left[i] -= v;
            col_left[j] -= v;
            // A row must be exhausted by its last cell.
            if (j + 1 < l || row_left[i] == 0) {
                fill(idx + 1);
            }
            row_left[i] += v;
            col_left[j] += v;
        }
    };
    fill(0);
    return count;
}

/// S_n as a generated group, generators = all transpositions.
inline symsage::PermutationGroup symmetric_by_transpositions(std::size_t n)
{
    std::vector<symsage::Permutation> gens;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            gens.push_back(symsage::Permutation::transposition(n, static_cast<int>(a), static_cast<int>(b)));
        }
    }
    return symsage::PermutationGroup::generated(n, gens);
}

/// Enumerates all elements of S_n directly with next_permutation.
inline std::vector<symsage::Permutation> all_permutations(std::size_t n)
{
    std::vector<int> images(n);
    std::iota(images.begin(), images.end(), 0);
    std::vector<symsage::Permutation> out;
    do {
        out.emplace_back(images);
    } while (std::next_permutation(images.begin(), images.end()));
    return out;
}

/// |H \ G / K| by explicit partition of G into double cosets.
inline std::size_t double_cosets(const std::vector<symsage::Permutation>& g,
                                 const std::vector<symsage::Permutation>& h,
                                 const std::vector<symsage::Permutation>& k)
{
    std::set<symsage::Permutation> seen;
    std::size_t classes = 0;
    for (const auto& x : g) {
        if (seen.contains(x)) {
            continue;
        }
        ++classes;
        for (const auto& a : h) {
            for (const auto& b : k) {
                seen.insert(a * x * b);
            }
        }
    }
    return classes;
}

/// |H \ G / K| by Burnside's lemma for H x K acting on G by g -> h g k^-1:
/// (h, k) fixes g exactly when g^-1 h g = k.
inline std::size_t burnside_double_cosets(const std::vector<symsage::Permutation>& g,
                                          const std::vector<symsage::Permutation>& h,
                                          const std::vector<symsage::Permutation>& k)
{
    const std::set<symsage::Permutation> in_k(k.begin(), k.end());
    std::size_t fixed = 0;
    for (const auto& a : h) {
        for (const auto& x : g) {
            fixed += in_k.contains(x.inverse() * a * x) ? 1 : 0;
        }
    }
    return fixed / (h.size() * k.size());
}

/// Elements of S_n fixing alpha, by filtering.
inline std::vector<symsage::Permutation> stabilizer_elements(const std::vector<symsage::Permutation>& g,
                                                             const symsage::ExponentVector& alpha)
{
    std::vector<symsage::Permutation> out;
    for (const auto& s : g) {
        if (symsage::act(s, alpha) == alpha) {
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace oracle
