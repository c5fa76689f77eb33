#include "symsage/group.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace symsage {

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::vector<int> images) : images_(std::move(images))
{
    std::vector<char> seen(images_.size(), 0);
    for (int v : images_) {
        if (v < 0 || static_cast<std::size_t>(v) >= images_.size() || seen[v]) {
            throw std::invalid_argument("permutation image table is not a bijection");
        }
        seen[v] = 1;
    }
}

Permutation Permutation::identity(std::size_t degree)
{
    std::vector<int> images(degree);
    std::iota(images.begin(), images.end(), 0);
    return Permutation(std::move(images));
}

Permutation Permutation::from_cycles(std::size_t degree,
                                     std::initializer_list<std::initializer_list<int>> cycles)
{
    std::vector<int> images(degree);
    std::iota(images.begin(), images.end(), 0);
    for (const auto& cycle : cycles) {
        std::vector<int> points(cycle);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const int from = points[i] - 1;
            const int to = points[(i + 1) % points.size()] - 1;
            if (from < 0 || to < 0 || static_cast<std::size_t>(from) >= degree ||
                static_cast<std::size_t>(to) >= degree) {
                throw std::invalid_argument("cycle point out of range");
            }
            images[from] = to;
        }
    }
    return Permutation(std::move(images));
}

Permutation Permutation::transposition(std::size_t degree, int a, int b)
{
    auto p = identity(degree);
    std::swap(p.images_[a], p.images_[b]);
    return p;
}

bool Permutation::is_identity() const
{
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (images_[i] != static_cast<int>(i)) {
            return false;
        }
    }
    return true;
}

Permutation Permutation::inverse() const
{
    std::vector<int> inv(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) {
        inv[images_[i]] = static_cast<int>(i);
    }
    Permutation out;
    out.images_ = std::move(inv);
    return out;
}

Permutation operator*(const Permutation& a, const Permutation& b)
{
    if (a.degree() != b.degree()) {
        throw std::invalid_argument("composing permutations of different degree");
    }
    std::vector<int> images(a.degree());
    for (std::size_t i = 0; i < images.size(); ++i) {
        images[i] = a.images_[b.images_[i]];
    }
    Permutation out;
    out.images_ = std::move(images);
    return out;
}

ExponentVector act(const Permutation& sigma, const ExponentVector& alpha)
{
    if (sigma.degree() != alpha.size()) {
        throw std::invalid_argument("permutation degree " + std::to_string(sigma.degree()) +
                                    " does not match exponent length " +
                                    std::to_string(alpha.size()));
    }
    ExponentVector out(alpha.size());
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        out[sigma(j)] = alpha[j];
    }
    return out;
}

namespace {

struct PermutationHash {
    std::size_t operator()(const Permutation& p) const noexcept
    {
        std::size_t h = p.degree();
        for (int v : p.images()) {
            h = h * 1000003u ^ static_cast<std::size_t>(v);
        }
        return h;
    }
};

void check_degree(const PermutationGroup& group, const ExponentVector& alpha)
{
    if (group.degree() != alpha.size()) {
        throw std::invalid_argument("group of degree " + std::to_string(group.degree()) +
                                    " cannot act on exponent of length " +
                                    std::to_string(alpha.size()));
    }
}

/// Breadth-first orbit of a vector under generators, with a transversal when requested.
std::vector<ExponentVector> generated_orbit(const PermutationGroup& group, const ExponentVector& alpha,
                                            std::size_t budget,
                                            std::map<ExponentVector, Permutation>* transversal)
{
    std::set<ExponentVector> seen{alpha};
    std::deque<ExponentVector> queue{alpha};
    if (transversal) {
        transversal->clear();
        transversal->emplace(alpha, Permutation::identity(group.degree()));
    }
    while (!queue.empty()) {
        ExponentVector gamma = std::move(queue.front());
        queue.pop_front();
        for (const auto& s : group.generators()) {
            ExponentVector delta = act(s, gamma);
            if (seen.insert(delta).second) {
                if (seen.size() > budget) {
                    throw std::length_error("orbit exceeds the materialization budget of " +
                                            std::to_string(budget) + " elements");
                }
                if (transversal) {
                    transversal->emplace(delta, s * transversal->at(gamma));
                }
                queue.push_back(std::move(delta));
            }
        }
    }
    return {seen.begin(), seen.end()};
}

/// Multiset of values on one block: distinct values in descending order with counts.
std::vector<std::pair<Rational, int>> block_value_counts(const ExponentVector& alpha,
                                                         std::span<const int> block)
{
    std::map<Rational, int, std::greater<>> counts;
    for (int p : block) {
        ++counts[alpha[p]];
    }
    return {counts.begin(), counts.end()};
}

/// Enumerates all nonnegative integer matrices with given row and column sums.
void enumerate_tables(const std::vector<int>& rows, const std::vector<int>& cols,
                      const std::function<void(const std::vector<std::vector<int>>&)>& visit)
{
    const std::size_t k = rows.size();
    const std::size_t l = cols.size();
    std::vector<std::vector<int>> table(k, std::vector<int>(l, 0));
    std::vector<int> residual(rows);

    // Fill column j, row i; the last row of each column takes the remainder.
    std::function<void(std::size_t, std::size_t, int)> fill = [&](std::size_t j, std::size_t i,
                                                                  int remaining) {
        if (j == l) {
            if (std::all_of(residual.begin(), residual.end(), [](int r) { return r == 0; })) {
                visit(table);
            }
            return;
        }
        if (i + 1 == k) {
            if (remaining > residual[i]) {
                return;
            }
            table[i][j] = remaining;
            residual[i] -= remaining;
            fill(j + 1, 0, j + 1 < l ? cols[j + 1] : 0);
            residual[i] += remaining;
            table[i][j] = 0;
            return;
        }
        const int hi = std::min(remaining, residual[i]);
        for (int v = hi; v >= 0; --v) {
            table[i][j] = v;
            residual[i] -= v;
            fill(j, i + 1, remaining - v);
            residual[i] += v;
        }
        table[i][j] = 0;
    };
    if (k == 0 || l == 0) {
        if (k == 0 && l == 0) {
            visit(table);
        }
        return;
    }
    fill(0, 0, cols[0]);
}

bool refines(const PermutationGroup& group, const PermutationGroup& subgroup)
{
    if (!group.is_young() || !subgroup.is_young()) {
        return false;
    }
    for (const auto& block : subgroup.blocks()) {
        const int owner = group.block_of()[block.front()];
        for (int p : block) {
            if (group.block_of()[p] != owner) {
                return false;
            }
        }
    }
    return true;
}

std::vector<OrbitClass> partition_into_orbits(const PermutationGroup& group,
                                              std::span<const ExponentVector> input)
{
    std::vector<ExponentVector> set(input.begin(), input.end());
    for (const auto& s : set) {
        check_degree(group, s);
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());

    std::vector<OrbitClass> classes;
    if (group.is_young()) {
        std::map<ExponentVector, std::vector<ExponentVector>> by_canonical;
        for (const auto& s : set) {
            by_canonical[canonical_representative(group, s)].push_back(s);
        }
        for (auto& [rep, members] : by_canonical) {
            BigInt expected = orbit_size(group, rep);
            if (BigInt(members.size()) != expected) {
                throw std::invalid_argument("set is not closed under the group: orbit of " +
                                            rep.to_string() + " has " + expected.str() +
                                            " elements, set contains " +
                                            std::to_string(members.size()));
            }
            classes.push_back({rep, expected, std::move(members)});
        }
        return classes;
    }

    std::set<ExponentVector> remaining(set.begin(), set.end());
    const std::set<ExponentVector> universe(set.begin(), set.end());
    while (!remaining.empty()) {
        const ExponentVector start = *remaining.begin();
        std::set<ExponentVector> seen{start};
        std::deque<ExponentVector> queue{start};
        while (!queue.empty()) {
            ExponentVector gamma = std::move(queue.front());
            queue.pop_front();
            for (const auto& s : group.generators()) {
                ExponentVector delta = act(s, gamma);
                if (!universe.contains(delta)) {
                    throw std::invalid_argument("set is not closed under the group: " +
                                                delta.to_string() + " is missing");
                }
                if (seen.insert(delta).second) {
                    queue.push_back(std::move(delta));
                }
            }
        }
        for (const auto& e : seen) {
            remaining.erase(e);
        }
        OrbitClass cls{*seen.rbegin(), BigInt(seen.size()), {seen.begin(), seen.end()}};
        classes.push_back(std::move(cls));
    }
    std::sort(classes.begin(), classes.end(),
              [](const OrbitClass& a, const OrbitClass& b) { return a.representative < b.representative; });
    return classes;
}

}  // namespace

// ---------------------------------------------------------------------------
// PermutationGroup

struct PermutationGroup::ElementCache {
    std::once_flag once;
    std::vector<Permutation> elements;
    std::exception_ptr failure;
};

PermutationGroup::PermutationGroup(std::size_t degree, Kind kind)
    : degree_(degree), kind_(kind), cache_(std::make_shared<ElementCache>())
{
    if (degree_ == 0) {
        throw std::invalid_argument("group degree must be positive");
    }
}

PermutationGroup PermutationGroup::symmetric(std::size_t degree)
{
    std::vector<int> all(degree);
    std::iota(all.begin(), all.end(), 0);
    return young(degree, {all});
}

PermutationGroup PermutationGroup::trivial(std::size_t degree)
{
    return young(degree, {});
}

PermutationGroup PermutationGroup::young(std::size_t degree, std::vector<std::vector<int>> blocks)
{
    PermutationGroup g(degree, Kind::Young);
    std::vector<char> covered(degree, 0);
    for (auto& block : blocks) {
        for (int p : block) {
            if (p < 0 || static_cast<std::size_t>(p) >= degree || covered[p]) {
                throw std::invalid_argument("Young blocks must be disjoint points in range");
            }
            covered[p] = 1;
        }
    }
    for (std::size_t p = 0; p < degree; ++p) {
        if (!covered[p]) {
            blocks.push_back({static_cast<int>(p)});
        }
    }
    blocks.erase(std::remove_if(blocks.begin(), blocks.end(), [](const auto& b) { return b.empty(); }),
                 blocks.end());
    for (auto& block : blocks) {
        std::sort(block.begin(), block.end());
    }
    std::sort(blocks.begin(), blocks.end());
    g.block_of_.assign(degree, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (int p : blocks[b]) {
            g.block_of_[p] = static_cast<int>(b);
        }
        for (std::size_t i = 0; i + 1 < blocks[b].size(); ++i) {
            g.generators_.push_back(Permutation::transposition(degree, blocks[b][i], blocks[b][i + 1]));
        }
    }
    g.blocks_ = std::move(blocks);
    return g;
}

PermutationGroup PermutationGroup::generated(std::size_t degree, std::vector<Permutation> generators)
{
    PermutationGroup g(degree, Kind::Generated);
    for (const auto& s : generators) {
        if (s.degree() != degree) {
            throw std::invalid_argument("generator degree does not match group degree");
        }
        if (!s.is_identity()) {
            g.generators_.push_back(s);
        }
    }
    std::sort(g.generators_.begin(), g.generators_.end());
    g.generators_.erase(std::unique(g.generators_.begin(), g.generators_.end()), g.generators_.end());
    return g;
}

bool PermutationGroup::is_full_symmetric() const
{
    return kind_ == Kind::Young && blocks_.size() == 1;
}

bool PermutationGroup::is_trivial() const
{
    if (kind_ == Kind::Generated) {
        return generators_.empty();
    }
    return blocks_.size() == degree_;
}

BigInt PermutationGroup::order() const
{
    if (kind_ == Kind::Young) {
        BigInt out = 1;
        for (const auto& block : blocks_) {
            out *= factorial(block.size());
        }
        return out;
    }
    return BigInt(elements().size());
}

const std::vector<Permutation>& PermutationGroup::elements() const
{
    std::call_once(cache_->once, [this] {
        try {
            if (kind_ == Kind::Young && order() > BigInt(kEnumerationLimit)) {
                throw std::length_error("group order exceeds the enumeration limit");
            }
            std::unordered_set<Permutation, PermutationHash> seen;
            std::vector<Permutation> out{Permutation::identity(degree_)};
            seen.insert(out.front());
            for (std::size_t head = 0; head < out.size(); ++head) {
                for (const auto& s : generators_) {
                    Permutation next = s * out[head];
                    if (seen.insert(next).second) {
                        if (out.size() >= kEnumerationLimit) {
                            throw std::length_error("group order exceeds the enumeration limit of " +
                                                    std::to_string(kEnumerationLimit));
                        }
                        out.push_back(std::move(next));
                    }
                }
            }
            std::sort(out.begin(), out.end());
            cache_->elements = std::move(out);
        } catch (...) {
            cache_->failure = std::current_exception();
        }
    });
    if (cache_->failure) {
        std::rethrow_exception(cache_->failure);
    }
    return cache_->elements;
}

nlohmann::json PermutationGroup::to_json() const
{
    nlohmann::json out{{"degree", degree_}};
    if (kind_ == Kind::Young) {
        if (is_full_symmetric()) {
            out["kind"] = "symmetric";
        } else if (is_trivial()) {
            out["kind"] = "trivial";
        } else {
            out["kind"] = "young";
            auto blocks = nlohmann::json::array();
            for (const auto& block : blocks_) {
                if (block.size() < 2) {
                    continue;
                }
                auto b = nlohmann::json::array();
                for (int p : block) {
                    b.push_back(p + 1);
                }
                blocks.push_back(std::move(b));
            }
            out["blocks"] = std::move(blocks);
        }
        return out;
    }
    out["kind"] = "generated";
    auto gens = nlohmann::json::array();
    for (const auto& s : generators_) {
        auto images = nlohmann::json::array();
        for (int v : s.images()) {
            images.push_back(v + 1);
        }
        gens.push_back(std::move(images));
    }
    out["generators"] = std::move(gens);
    return out;
}

PermutationGroup PermutationGroup::from_json(const nlohmann::json& document)
{
    if (!document.is_object() || !document.contains("degree") || !document.contains("kind")) {
        throw std::invalid_argument("group document needs \"degree\" and \"kind\"");
    }
    const auto& deg = document.at("degree");
    if (!deg.is_number_integer() || deg.get<std::int64_t>() <= 0) {
        throw std::invalid_argument("group \"degree\" must be a positive integer");
    }
    const auto degree = deg.get<std::size_t>();
    const auto kind = document.at("kind").get<std::string>();
    if (kind == "symmetric") {
        return symmetric(degree);
    }
    if (kind == "trivial") {
        return trivial(degree);
    }
    if (kind == "young") {
        std::vector<std::vector<int>> blocks;
        for (const auto& b : document.at("blocks")) {
            std::vector<int> block;
            for (const auto& p : b) {
                block.push_back(p.get<int>() - 1);
            }
            blocks.push_back(std::move(block));
        }
        return young(degree, std::move(blocks));
    }
    if (kind == "generated") {
        std::vector<Permutation> gens;
        for (const auto& g : document.at("generators")) {
            std::vector<int> images;
            for (const auto& v : g) {
                images.push_back(v.get<int>() - 1);
            }
            if (images.size() != degree) {
                throw std::invalid_argument("generator image table has wrong length");
            }
            gens.emplace_back(std::move(images));
        }
        return generated(degree, std::move(gens));
    }
    throw std::invalid_argument("unknown group kind '" + kind + "'");
}

std::string PermutationGroup::describe() const
{
    if (is_full_symmetric()) {
        return "S_" + std::to_string(degree_);
    }
    if (is_trivial()) {
        return "trivial(" + std::to_string(degree_) + ")";
    }
    if (kind_ == Kind::Young) {
        std::string out = "Young(";
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            out += (b ? "," : "") + std::to_string(blocks_[b].size());
        }
        return out + ")";
    }
    return "generated(" + std::to_string(degree_) + ", " + std::to_string(generators_.size()) +
           " generators)";
}

// ---------------------------------------------------------------------------
// Orbits and stabilizers

ExponentVector canonical_representative(const PermutationGroup& group, const ExponentVector& alpha)
{
    check_degree(group, alpha);
    if (group.is_young()) {
        ExponentVector out = alpha;
        std::vector<Rational> values;
        for (const auto& block : group.blocks()) {
            values.clear();
            for (int p : block) {
                values.push_back(alpha[p]);
            }
            std::sort(values.begin(), values.end(), std::greater<>());
            for (std::size_t i = 0; i < block.size(); ++i) {
                out[block[i]] = values[i];
            }
        }
        return out;
    }
    auto elements = generated_orbit(group, alpha, kOrbitBudget, nullptr);
    return elements.back();
}

OrbitClass orbit(const PermutationGroup& group, const ExponentVector& alpha, std::size_t budget)
{
    check_degree(group, alpha);
    if (!group.is_young()) {
        auto elements = generated_orbit(group, alpha, budget, nullptr);
        OrbitClass out{elements.back(), BigInt(elements.size()), std::move(elements)};
        return out;
    }
    const BigInt size = orbit_size(group, alpha);
    if (size > BigInt(budget)) {
        throw std::length_error("orbit of size " + size.str() +
                                " exceeds the materialization budget; use orbit_size");
    }
    std::vector<ExponentVector> elements{alpha};
    for (const auto& block : group.blocks()) {
        if (block.size() < 2) {
            continue;
        }
        std::vector<Rational> values;
        for (int p : block) {
            values.push_back(alpha[p]);
        }
        std::sort(values.begin(), values.end(), std::greater<>());
        std::vector<std::vector<Rational>> arrangements;
        do {
            arrangements.push_back(values);
        } while (std::prev_permutation(values.begin(), values.end()));
        std::vector<ExponentVector> next;
        next.reserve(elements.size() * arrangements.size());
        for (const auto& e : elements) {
            for (const auto& arr : arrangements) {
                ExponentVector v = e;
                for (std::size_t i = 0; i < block.size(); ++i) {
                    v[block[i]] = arr[i];
                }
                next.push_back(std::move(v));
            }
        }
        elements = std::move(next);
    }
    std::sort(elements.begin(), elements.end());
    OrbitClass out{elements.back(), size, std::move(elements)};
    return out;
}

BigInt orbit_size(const PermutationGroup& group, const ExponentVector& alpha)
{
    check_degree(group, alpha);
    if (!group.is_young()) {
        return BigInt(generated_orbit(group, alpha, kOrbitBudget, nullptr).size());
    }
    BigInt out = 1;
    for (const auto& block : group.blocks()) {
        out *= factorial(block.size());
        for (const auto& [value, count] : block_value_counts(alpha, block)) {
            out /= factorial(count);
        }
    }
    return out;
}

BigInt stabilizer_order(const PermutationGroup& group, const ExponentVector& alpha)
{
    check_degree(group, alpha);
    if (!group.is_young()) {
        return group.order() / orbit_size(group, alpha);
    }
    BigInt out = 1;
    for (const auto& block : group.blocks()) {
        for (const auto& [value, count] : block_value_counts(alpha, block)) {
            out *= factorial(count);
        }
    }
    return out;
}

PermutationGroup stabilizer(const PermutationGroup& group, const ExponentVector& alpha)
{
    check_degree(group, alpha);
    if (group.is_young()) {
        std::vector<std::vector<int>> refined;
        for (const auto& block : group.blocks()) {
            std::map<Rational, std::vector<int>> by_value;
            for (int p : block) {
                by_value[alpha[p]].push_back(p);
            }
            for (auto& [value, points] : by_value) {
                refined.push_back(std::move(points));
            }
        }
        return PermutationGroup::young(group.degree(), std::move(refined));
    }
    // Schreier generators u_{s(g)}^{-1} s u_g over the orbit transversal.
    std::map<ExponentVector, Permutation> transversal;
    generated_orbit(group, alpha, kOrbitBudget, &transversal);
    std::set<Permutation> schreier;
    for (const auto& [gamma, u] : transversal) {
        for (const auto& s : group.generators()) {
            const Permutation& v = transversal.at(act(s, gamma));
            Permutation gen = v.inverse() * s * u;
            if (!gen.is_identity()) {
                schreier.insert(std::move(gen));
            }
        }
    }
    return PermutationGroup::generated(group.degree(), {schreier.begin(), schreier.end()});
}

std::vector<std::vector<int>> coordinate_orbits(const PermutationGroup& group)
{
    if (group.is_young()) {
        return group.blocks();
    }
    const std::size_t n = group.degree();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& s : group.generators()) {
        for (std::size_t i = 0; i < n; ++i) {
            const int a = find(static_cast<int>(i));
            const int b = find(s(i));
            if (a != b) {
                parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        groups[find(static_cast<int>(i))].push_back(static_cast<int>(i));
    }
    std::vector<std::vector<int>> out;
    for (auto& [root, points] : groups) {
        out.push_back(std::move(points));
    }
    return out;
}

std::vector<OrbitClass> orbit_representatives(const PermutationGroup& group,
                                              std::span<const ExponentVector> set)
{
    return partition_into_orbits(group, set);
}

std::vector<OrbitClass> suborbits(const PermutationGroup& subgroup, std::span<const ExponentVector> set)
{
    return partition_into_orbits(subgroup, set);
}

std::vector<OrbitClass> orbit_suborbits(const PermutationGroup& group, const ExponentVector& alpha,
                                        const PermutationGroup& subgroup)
{
    check_degree(group, alpha);
    if (group.degree() != subgroup.degree()) {
        throw std::invalid_argument("subgroup degree does not match group degree");
    }
    if (!refines(group, subgroup)) {
        const auto full = orbit(group, alpha);
        return suborbits(subgroup, full.elements);
    }

    // Per block of G: contingency tables between the value multiset of alpha on
    // the block and the H-blocks it contains. Each table is one H-orbit.
    struct Partial {
        ExponentVector vector;
        BigInt size;
    };
    std::vector<Partial> partials{{ExponentVector(alpha.size()), BigInt(1)}};
    for (const auto& block : group.blocks()) {
        const auto values = block_value_counts(alpha, block);
        std::vector<const std::vector<int>*> inner;
        for (const auto& h : subgroup.blocks()) {
            if (group.block_of()[h.front()] == group.block_of()[block.front()]) {
                inner.push_back(&h);
            }
        }
        std::vector<int> rows;
        for (const auto& [value, count] : values) {
            rows.push_back(count);
        }
        std::vector<int> cols;
        for (const auto* h : inner) {
            cols.push_back(static_cast<int>(h->size()));
        }
        std::vector<std::pair<std::vector<std::pair<int, Rational>>, BigInt>> local;
        enumerate_tables(rows, cols, [&](const std::vector<std::vector<int>>& table) {
            std::vector<std::pair<int, Rational>> assignment;
            BigInt size = 1;
            for (std::size_t j = 0; j < inner.size(); ++j) {
                const auto& positions = *inner[j];
                std::size_t cursor = 0;
                size *= factorial(positions.size());
                for (std::size_t i = 0; i < values.size(); ++i) {
                    size /= factorial(table[i][j]);
                    for (int c = 0; c < table[i][j]; ++c) {
                        assignment.emplace_back(positions[cursor++], values[i].first);
                    }
                }
            }
            local.emplace_back(std::move(assignment), std::move(size));
        });
        std::vector<Partial> next;
        next.reserve(partials.size() * local.size());
        for (const auto& p : partials) {
            for (const auto& [assignment, size] : local) {
                Partial q{p.vector, p.size * size};
                for (const auto& [pos, value] : assignment) {
                    q.vector[pos] = value;
                }
                next.push_back(std::move(q));
            }
        }
        partials = std::move(next);
    }
    std::vector<OrbitClass> out;
    out.reserve(partials.size());
    for (auto& p : partials) {
        out.push_back({std::move(p.vector), std::move(p.size), {}});
    }
    std::sort(out.begin(), out.end(),
              [](const OrbitClass& a, const OrbitClass& b) { return a.representative < b.representative; });
    return out;
}

std::vector<std::pair<Permutation, ExponentVector>> coset_representatives(const PermutationGroup& group,
                                                                         const ExponentVector& beta,
                                                                         std::size_t budget)
{
    check_degree(group, beta);
    std::vector<std::pair<Permutation, ExponentVector>> out;
    if (!group.is_young()) {
        std::map<ExponentVector, Permutation> transversal;
        generated_orbit(group, beta, budget, &transversal);
        for (auto& [gamma, u] : transversal) {
            out.emplace_back(u, gamma);
        }
        return out;
    }
    const auto full = orbit(group, beta, budget);
    out.reserve(full.elements.size());
    for (const auto& target : full.elements) {
        std::vector<int> images(beta.size());
        for (const auto& block : group.blocks()) {
            std::map<Rational, std::vector<int>> source_positions;
            std::map<Rational, std::vector<int>> target_positions;
            for (int p : block) {
                source_positions[beta[p]].push_back(p);
                target_positions[target[p]].push_back(p);
            }
            for (auto& [value, sources] : source_positions) {
                const auto& targets = target_positions.at(value);
                for (std::size_t i = 0; i < sources.size(); ++i) {
                    images[sources[i]] = targets[i];
                }
            }
        }
        out.emplace_back(Permutation(std::move(images)), target);
    }
    return out;
}

}  // namespace symsage
