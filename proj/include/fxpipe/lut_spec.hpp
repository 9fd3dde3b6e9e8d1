#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fxp.hpp"

namespace fxpipe {

// A block-RAM lookup table. The address is the input integer minus its
// minimum (in_offset); each word is the quantized function value minus the
// table minimum (out_offset), so every stored word is non-negative.
struct LutSpec {
    std::string name;
    std::function<double(double)> function;
    FixedPointFormat in_fmt;
    FixedPointFormat out_fmt;
    std::int64_t in_offset = 0;
    std::int64_t out_offset = 0;
    std::int64_t depth = 0;
    int word_width = 1;
    int read_latency = 1;
    std::vector<std::int64_t> contents;
    std::vector<std::string> warnings;

    // Word before the offset was removed.
    std::int64_t raw(std::size_t k) const { return contents.at(k) + out_offset; }

    std::vector<std::int64_t> raw_contents() const
    {
        std::vector<std::int64_t> r(contents.size());
        for (std::size_t k = 0; k < contents.size(); ++k)
            r[k] = contents[k] + out_offset;
        return r;
    }

    double in_offset_real() const { return to_real(in_offset, in_fmt); }
    double out_offset_real() const { return to_real(out_offset, out_fmt); }
};

} // namespace fxpipe
