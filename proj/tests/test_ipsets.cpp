#include <catch2/catch.hpp>

#include <random>
#include <set>

#include "tilerec/ipsets.hpp"

using namespace tilerec;

namespace {

// Independent oracle: subset-sum reachability by forward dynamic programming
// over an explicit generator list (each index used at most once).
std::set<std::uint64_t> ip_oracle(const std::vector<std::uint64_t>& gens, std::uint64_t limit) {
    std::set<std::uint64_t> sums{0};
    for (std::uint64_t g : gens) {
        std::set<std::uint64_t> next = sums;
        for (std::uint64_t s : sums)
            if (s + g <= limit) next.insert(s + g);
        sums = std::move(next);
    }
    sums.erase(0);
    return sums;
}

}  // namespace

TEST_CASE("ip_enumerate examples") {
    // p_i = 2^(i-1): binary representations give every natural number.
    IPSetSpec powers;
    powers.kind = "explicit";
    powers.values = {1, 2, 4, 8};
    const auto all = ip_enumerate(powers, 10);
    REQUIRE(all == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});

    IPSetSpec decades;
    decades.kind = "explicit";
    decades.values = {10, 100, 1000};
    REQUIRE(ip_enumerate(decades, 2000) ==
            std::vector<std::uint64_t>{10, 100, 110, 1000, 1010, 1100, 1110});

    IPSetSpec single;
    single.kind = "explicit";
    single.values = {5};
    REQUIRE(ip_enumerate(single, 100) == std::vector<std::uint64_t>{5});
}

TEST_CASE("ip_contains examples") {
    IPSetSpec base3;
    base3.kind = "geometric";
    base3.base = 3;
    REQUIRE(ip_contains(base3, 12));       // 3 + 9
    REQUIRE_FALSE(ip_contains(base3, 6));  // 3 + 3 needs a repeated index
    IPSetSpec odd;
    odd.kind = "explicit";
    odd.values = {7, 11, 13};
    REQUIRE(ip_contains(odd, 31));
    REQUIRE_FALSE(ip_contains(odd, 9));
}

TEST_CASE("repeated values at distinct indices are distinct terms") {
    IPSetSpec dup;
    dup.kind = "explicit";
    dup.values = {2, 2, 5};
    const auto sums = ip_enumerate(dup, 20);
    REQUIRE(std::count(sums.begin(), sums.end(), 4) == 1);  // 2 + 2 across indices
    REQUIRE(sums == std::vector<std::uint64_t>{2, 4, 5, 7, 9});
}

TEST_CASE("enumerate and contains cross-validate against the oracle") {
    std::vector<IPSetSpec> specs(3);
    specs[0].kind = "geometric";
    specs[0].base = 3;
    specs[1].kind = "explicit";
    specs[1].values = {4, 9, 14, 23, 31};
    specs[2].kind = "arithmetic";
    specs[2].start = 7;
    specs[2].step = 12;

    for (const IPSetSpec& spec : specs) {
        const std::uint64_t limit = 2000;
        const auto enumerated = ip_enumerate(spec, limit);
        const auto oracle = ip_oracle(spec.generators_up_to(limit), limit);
        REQUIRE(std::set<std::uint64_t>(enumerated.begin(), enumerated.end()) == oracle);
        // Membership agrees everywhere, not just on members.
        for (std::uint64_t n = 1; n <= limit; n += 7)
            REQUIRE(ip_contains(spec, n) == (oracle.count(n) > 0));
    }
}

TEST_CASE("enumeration is closed under disjoint-support sums") {
    IPSetSpec spec;
    spec.kind = "explicit";
    spec.values = {3, 5, 11, 17, 29};
    const std::uint64_t limit = 70;
    const auto sums = ip_enumerate(spec, limit);
    const std::set<std::uint64_t> present(sums.begin(), sums.end());

    // Pairs of sums with provably disjoint support: take single generators.
    const auto& g = spec.values;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
            if (g[i] + g[j] <= limit) REQUIRE(present.count(g[i] + g[j]) == 1);
    // And a deeper split: {3,5} + {11,17} etc.
    REQUIRE(present.count(3 + 5 + 11 + 17) == 1);
    REQUIRE(present.count(3 + 11 + 29) == 1);
}
