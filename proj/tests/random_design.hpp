#pragma once

// Random feed-forward designs for property tests.

#include <random>
#include <string>
#include <vector>

#include "fxpipe/fxpipe.hpp"

namespace testing_support {

struct RandomDesign {
    fxpipe::Design design;
    int expected_latency = 0; // longest chain of clocked assignments, computed independently
};

inline RandomDesign random_design(std::uint64_t seed, int steps = 12)
{
    using namespace fxpipe;
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    Design d("random_" + std::to_string(seed));

    struct Entry {
        Signal s;
        int depth;
    };
    std::vector<Entry> pool;
    const int n_in = uni(2, 4);
    for (int i = 0; i < n_in; ++i) {
        const int w = uni(4, 14);
        const double range = std::ldexp(1.0, uni(-2, 5)) * (1.0 + 0.37 * uni(0, 3));
        const auto fmt = uni(0, 2) == 0 ? make_unsigned_format(w, range) : make_signed_format(w, -range, range);
        pool.push_back({d.input("in" + std::to_string(i), fmt), 0});
    }
    int made = 0;
    for (int attempt = 0; made < steps && attempt < 10 * steps; ++attempt) {
        const Entry& a = pool[static_cast<std::size_t>(uni(0, static_cast<int>(pool.size()) - 1))];
        const Entry& b = pool[static_cast<std::size_t>(uni(0, static_cast<int>(pool.size()) - 1))];
        try {
            Signal e;
            switch (uni(0, 6)) {
            case 0: e = a.s + b.s; break;
            case 1: e = a.s - b.s; break;
            case 2: e = a.s * b.s; break;
            case 3: e = d.mul_pow2(a.s, -uni(1, 3)) + b.s; break;
            case 4: e = d.select(d.compare(a.s, CompareOp::gt, b.s), a.s, b.s); break;
            case 5: e = d.reduce_to_width(a.s * b.s, 20) - a.s; break;
            default: e = (a.s + b.s) * d.constant(0.75, make_signed_format(8, -1, 1)); break;
            }
            Signal r = d.assign("r" + std::to_string(made), e);
            pool.push_back({r, std::max(a.depth, b.depth) + 1});
            ++made;
        } catch (const GraphError&) {
            // range would exceed the width budget; try another pair
        }
    }
    RandomDesign out;
    const int n_out = std::min<int>(2, made);
    for (int k = 0; k < n_out; ++k) {
        const Entry& e = pool[pool.size() - 1 - static_cast<std::size_t>(k)];
        d.output("o" + std::to_string(k), e.s);
        out.expected_latency = std::max(out.expected_latency, e.depth);
    }
    out.design = freeze(d);
    return out;
}

} // namespace testing_support
