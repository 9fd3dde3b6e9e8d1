#pragma once

// Block-RAM lookup tables for operators that have no direct hardware form
// (division, trigonometry), plus coefficient (COE) file I/O.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "lut_spec.hpp"

namespace fxpipe {

struct LutOptions {
    int read_latency = 1;             // 1: plain synchronous read, 2: registered output
    std::int64_t max_depth = 1 << 16; // BRAM budget in words
};

struct LutResult {
    std::size_t index = 0; // into Design::luts()
    Signal out;
};

// Samples f at every representable input and builds the three-stage table
// pipeline: address (input - in_offset), synchronous read, offset re-add.
// The output is valid 2 + read_latency cycles after the input.
inline LutResult build_lut(Design& design, const std::string& name, std::function<double(double)> f, Signal in,
                           int out_bit_width, double out_min, double out_max, const LutOptions& opts = {})
{
    const Node in_node = in.node();
    if (in_node.boolean)
        throw LutError("table '" + name + "': input must be numeric");
    if (opts.read_latency < 1 || opts.read_latency > 2)
        throw LutError("table '" + name + "': read latency must be 1 or 2");
    const std::int64_t depth = in_node.range.hi - in_node.range.lo + 1;
    if (depth > opts.max_depth)
        throw LutError("table '" + name + "': depth " + std::to_string(depth) + " exceeds budget of " +
                       std::to_string(opts.max_depth) + " words");

    LutSpec spec;
    spec.name = name;
    spec.function = f;
    spec.in_fmt = in_node.fmt;
    spec.out_fmt = out_min < 0.0 ? make_signed_format(out_bit_width, out_min, out_max)
                                 : make_unsigned_format(out_bit_width, out_max);
    spec.in_offset = in_node.range.lo;
    spec.depth = depth;
    spec.read_latency = opts.read_latency;

    std::vector<std::int64_t> raw(static_cast<std::size_t>(depth));
    std::size_t clipped = 0;
    for (std::int64_t k = 0; k < depth; ++k) {
        const double x = to_real(k + spec.in_offset, spec.in_fmt);
        const double y = f(x);
        if (!std::isfinite(y))
            throw LutError("table '" + name + "': function is not finite at x = " + detail::fmt_double(x));
        if (y < out_min || y > out_max)
            ++clipped;
        raw[static_cast<std::size_t>(k)] = to_integer_saturating(std::clamp(y, out_min, out_max), spec.out_fmt);
    }
    if (clipped)
        spec.warnings.push_back("table '" + name + "': " + std::to_string(clipped) +
                                " entries saturated to the output range");

    spec.out_offset = *std::min_element(raw.begin(), raw.end());
    spec.contents.resize(raw.size());
    std::int64_t max_word = 0;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        spec.contents[k] = raw[k] - spec.out_offset;
        max_word = std::max(max_word, spec.contents[k]);
    }
    spec.word_width = min_width_for_integer_range(0, max_word, Signedness::Unsigned);

    const double in_cc = spec.in_fmt.conversion_constant();
    const double out_cc = spec.out_fmt.conversion_constant();
    const std::int64_t out_offset = spec.out_offset;

    Signal addr = design.assign(name + "_addr", in - design.constant_integer(spec.in_offset, in_cc));
    const std::size_t index = design.luts().size();
    Signal data = design.add_lut_read(std::move(spec), addr, name + "_data");
    Signal out = design.assign(name, data + design.constant_integer(out_offset, out_cc));
    return {index, out};
}

enum class CoeContents { stored, raw };

// Two LF-terminated lines, decimal words in address order, each followed by
// a comma.
inline std::string emit_coe(const LutSpec& spec, CoeContents which = CoeContents::stored)
{
    std::string s = "memory_initialization_radix=10;\nmemory_initialization_vector=";
    for (std::size_t k = 0; k < spec.contents.size(); ++k) {
        s += std::to_string(which == CoeContents::stored ? spec.contents[k] : spec.raw(k));
        s += ',';
    }
    s += '\n';
    return s;
}

// Inverse of emit_coe. Whitespace and line breaks are ignored; the vector
// ends at ';' or at the end of the text.
inline std::vector<std::int64_t> parse_coe(std::string_view text)
{
    std::string compact;
    compact.reserve(text.size());
    for (char c : text)
        if (c != ' ' && c != '\t' && c != '\r' && c != '\n')
            compact += c;
    constexpr std::string_view radix = "memory_initialization_radix=";
    constexpr std::string_view vec = "memory_initialization_vector=";
    const auto rpos = compact.find(radix);
    if (rpos == std::string::npos)
        throw LutError("COE: missing radix line");
    const auto rend = compact.find(';', rpos);
    if (rend == std::string::npos || compact.substr(rpos + radix.size(), rend - rpos - radix.size()) != "10")
        throw LutError("COE: only radix 10 is supported");
    const auto vpos = compact.find(vec, rend);
    if (vpos == std::string::npos)
        throw LutError("COE: missing vector line");

    std::vector<std::int64_t> out;
    std::string tok;
    for (std::size_t i = vpos + vec.size(); i < compact.size(); ++i) {
        const char c = compact[i];
        if (c == ',' || c == ';') {
            if (!tok.empty()) {
                std::size_t used = 0;
                long long v = 0;
                try {
                    v = std::stoll(tok, &used);
                } catch (const std::logic_error&) {
                    used = 0;
                }
                if (used != tok.size())
                    throw LutError("COE: bad word '" + tok + "'");
                out.push_back(v);
                tok.clear();
            }
            if (c != ',')
                break;
        } else {
            tok += c;
        }
    }
    if (!tok.empty())
        throw LutError("COE: unterminated vector");
    return out;
}

struct BramBlocks {
    std::int64_t ramb36 = 0;
    std::int64_t ramb18 = 0;
};

inline constexpr std::int64_t kRamb36Bits = 36 * 1024;
inline constexpr std::int64_t kRamb18Bits = 18 * 1024;

// Greedy packing of a bit count into 36Kb blocks, the tail into an 18Kb
// block when it fits.
inline BramBlocks bram_blocks_for_bits(std::int64_t bits)
{
    BramBlocks b;
    if (bits <= 0)
        return b;
    b.ramb36 = bits / kRamb36Bits;
    const std::int64_t rest = bits % kRamb36Bits;
    if (rest > kRamb18Bits)
        ++b.ramb36;
    else if (rest > 0)
        ++b.ramb18;
    return b;
}

inline BramBlocks bram_estimate(const LutSpec& spec)
{
    return bram_blocks_for_bits(spec.depth * spec.word_width);
}

} // namespace fxpipe
