#include "symsage/group.hpp"
#include "symsage/signomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symsage {

Signomial symmetrize(const Signomial& f, const PermutationGroup& group)
{
    if (group.degree() != f.dimension()) {
        throw std::invalid_argument("group of degree " + std::to_string(group.degree()) +
                                    " cannot act on a signomial of dimension " +
                                    std::to_string(f.dimension()));
    }
    // (1/|G|) sum_sigma sigma f puts c / |G.alpha| on every element of the orbit.
    Signomial::TermMap accumulated;
    for (const auto& [alpha, c] : f) {
        const auto cls = orbit(group, alpha);
        const double share = c / count_to_double(cls.size, true);
        for (const auto& beta : cls.elements) {
            accumulated[beta] += share;
        }
    }
    Signomial out(f.dimension());
    for (const auto& [beta, c] : accumulated) {
        out.add_term(beta, c);
    }
    return out;
}

bool check_invariance(const Signomial& f, const PermutationGroup& group, double tol)
{
    if (group.degree() != f.dimension()) {
        throw std::invalid_argument("group degree does not match signomial dimension");
    }
    for (const auto& sigma : group.generators()) {
        std::vector<std::size_t> moved;
        for (std::size_t j = 0; j < sigma.degree(); ++j) {
            if (sigma(j) != static_cast<int>(j)) {
                moved.push_back(j);
            }
        }
        for (const auto& [alpha, c] : f) {
            // sigma fixes alpha when it only permutes equal entries.
            if (std::all_of(moved.begin(), moved.end(), [&](std::size_t j) { return alpha[j] == alpha[sigma(j)]; })) {
                continue;
            }
            const double image = f.coefficient(act(sigma, alpha));
            if (std::abs(image - c) > tol * std::max(1.0, std::abs(c))) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace symsage
