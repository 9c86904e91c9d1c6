#pragma once

// IP-sets: all finite sums p_{i1} + ... + p_{ik} of a fixed sequence of
// positive integers with strictly increasing indices. Indices must be
// distinct; values may repeat in the sequence and then count as distinct
// terms.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace tilerec {

struct IPSetSpec {
    std::string kind = "geometric";  // geometric | arithmetic | explicit
    std::uint64_t base = 2;          // geometric: p_i = base^i, i >= 1
    std::uint64_t start = 1;         // arithmetic: p_i = start + (i-1)*step
    std::uint64_t step = 1;
    std::vector<std::uint64_t> values;  // explicit prefix

    // All generators <= limit, in index order. Repeated values are capped at
    // the multiplicity that can still matter below the limit.
    std::vector<std::uint64_t> generators_up_to(std::uint64_t limit) const {
        std::vector<std::uint64_t> out;
        if (kind == "explicit") {
            for (std::uint64_t v : values) {
                if (v < 1) throw std::invalid_argument("ip set: generators must be >= 1");
                if (v <= limit) out.push_back(v);
            }
            return out;
        }
        if (kind == "geometric") {
            if (base < 1) throw std::invalid_argument("ip set: base must be >= 1");
            if (base == 1) {
                out.assign(static_cast<std::size_t>(std::min<std::uint64_t>(limit, 1u << 20)), 1);
                return out;
            }
            for (std::uint64_t v = base; v <= limit; v *= base) {
                out.push_back(v);
                if (v > limit / base) break;
            }
            return out;
        }
        if (kind == "arithmetic") {
            if (start < 1) throw std::invalid_argument("ip set: start must be >= 1");
            std::uint64_t v = start;
            while (v <= limit) {
                out.push_back(v);
                if (step == 0) {
                    if (out.size() >= limit / start + 1) break;
                } else {
                    if (v > limit - step) break;
                    v += step;
                }
            }
            return out;
        }
        throw std::invalid_argument("ip set: unknown kind " + kind);
    }
};

// Every element of the IP-set up to `limit`, ascending and deduplicated.
// 0/1-knapsack reachability over the generators; each index used at most
// once.
inline std::vector<std::uint64_t> ip_enumerate(const IPSetSpec& spec, std::uint64_t limit) {
    if (limit < 1) throw std::invalid_argument("ip_enumerate: limit must be >= 1");
    std::vector<char> reach(static_cast<std::size_t>(limit) + 1, 0);
    reach[0] = 1;
    for (std::uint64_t g : spec.generators_up_to(limit)) {
        for (std::uint64_t s = limit - g + 1; s-- > 0;)
            if (reach[s]) reach[s + g] = 1;
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t v = 1; v <= limit; ++v)
        if (reach[v]) out.push_back(v);
    return out;
}

// Membership by depth-first subset sum over generators <= n, pruning on the
// remaining achievable sum. Failed (index, remaining) states are memoized so
// dense generator sets stay polynomial.
inline bool ip_contains(const IPSetSpec& spec, std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("ip_contains: n must be >= 1");
    std::vector<std::uint64_t> gens = spec.generators_up_to(n);
    std::sort(gens.begin(), gens.end(), std::greater<>());
    std::vector<std::uint64_t> suffix(gens.size() + 1, 0);
    for (std::size_t i = gens.size(); i-- > 0;) suffix[i] = suffix[i + 1] + gens[i];

    std::unordered_set<std::uint64_t> failed;
    const auto key = [&](std::size_t idx, std::uint64_t rem) {
        return (static_cast<std::uint64_t>(idx) << 40) ^ rem;
    };
    const auto dfs = [&](auto&& self, std::size_t idx, std::uint64_t remaining) -> bool {
        if (remaining == 0) return true;
        if (idx >= gens.size() || suffix[idx] < remaining) return false;
        if (failed.count(key(idx, remaining))) return false;
        if (gens[idx] <= remaining && self(self, idx + 1, remaining - gens[idx])) return true;
        if (self(self, idx + 1, remaining)) return true;
        failed.insert(key(idx, remaining));
        return false;
    };
    return dfs(dfs, 0, n);
}

}  // namespace tilerec
