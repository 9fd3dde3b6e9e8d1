#pragma once

// Fixed-point formats and float <-> integer conversion.
//
// A format maps a real quantity x to the integer round(x * cc), where the
// conversion constant cc is chosen so that the declared float range fills
// the bit width. The integer is saturated to the width, since the range
// boundary lands exactly on a half count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "error.hpp"

namespace fxpipe {

inline constexpr int kMaxBitWidth = 48;

enum class Signedness { Signed, Unsigned };

inline const char* to_string(Signedness s) { return s == Signedness::Signed ? "signed" : "unsigned"; }

// Closed integer interval [lo, hi].
struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    bool contains(std::int64_t v) const { return lo <= v && v <= hi; }
    bool contains(const IntRange& o) const { return lo <= o.lo && o.hi <= hi; }
    friend bool operator==(const IntRange&, const IntRange&) = default;
};

namespace detail {

inline std::int64_t pow2(int n) { return std::int64_t{1} << n; }

inline std::string fmt_double(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace detail

// Representable integer range of an n-bit word.
inline IntRange representable_range(int bit_width, Signedness s)
{
    if (s == Signedness::Signed)
        return {-detail::pow2(bit_width - 1), detail::pow2(bit_width - 1) - 1};
    return {0, detail::pow2(bit_width) - 1};
}

// Smallest bit width whose representable range contains [int_min, int_max].
inline int min_width_for_integer_range(std::int64_t int_min, std::int64_t int_max, Signedness s)
{
    if (int_min > int_max)
        throw RangeError("min_width_for_integer_range: empty interval");
    if (s == Signedness::Unsigned && int_min < 0)
        throw RangeError("min_width_for_integer_range: negative bound for unsigned word");
    for (int n = 1; n < 63; ++n) {
        if (representable_range(n, s).contains(IntRange{int_min, int_max}))
            return n;
    }
    return 63;
}

inline int min_width_for_integer_range(const IntRange& r, Signedness s)
{
    return min_width_for_integer_range(r.lo, r.hi, s);
}

class FixedPointFormat {
public:
    FixedPointFormat() = default;

    int bit_width() const { return width_; }
    Signedness signedness() const { return sign_; }
    bool is_signed() const { return sign_ == Signedness::Signed; }
    double conversion_constant() const { return cc_; }
    double float_min() const { return fmin_; }
    double float_max() const { return fmax_; }
    IntRange int_range() const { return representable_range(width_, sign_); }

    // Format whose float range is implied by the representable integers,
    // used for intermediate results of the dataflow graph.
    static FixedPointFormat derived(int bit_width, Signedness s, double cc)
    {
        check_width(bit_width, 1);
        if (!(cc > 0.0) || !std::isfinite(cc))
            throw FormatError("conversion constant must be positive and finite");
        FixedPointFormat f;
        f.width_ = bit_width;
        f.sign_ = s;
        f.cc_ = cc;
        const auto r = f.int_range();
        f.fmin_ = static_cast<double>(r.lo) / cc;
        f.fmax_ = static_cast<double>(r.hi) / cc;
        return f;
    }

    friend FixedPointFormat make_signed_format(int bit_width, double float_min, double float_max);
    friend FixedPointFormat make_unsigned_format(int bit_width, double float_max);

    // Constants compare with a relative tolerance of 1e-12.
    friend bool same_constant(const FixedPointFormat& a, const FixedPointFormat& b)
    {
        return std::abs(a.cc_ - b.cc_) <= 1e-12 * std::max(a.cc_, b.cc_);
    }

private:
    static void check_width(int w, int min_w)
    {
        if (w < min_w || w > kMaxBitWidth)
            throw FormatError("bit width " + std::to_string(w) + " outside " + std::to_string(min_w) + ".." +
                              std::to_string(kMaxBitWidth));
    }

    int width_ = 1;
    Signedness sign_ = Signedness::Unsigned;
    double cc_ = 1.0;
    double fmin_ = 0.0;
    double fmax_ = 1.0;
};

// cc = (2^(n-1) - 0.5) / max(float_max, |float_min|)
inline FixedPointFormat make_signed_format(int bit_width, double float_min, double float_max)
{
    FixedPointFormat::check_width(bit_width, 2);
    if (!std::isfinite(float_min) || !std::isfinite(float_max) || !(float_min < float_max))
        throw FormatError("signed format needs float_min < float_max, got [" + detail::fmt_double(float_min) +
                          ", " + detail::fmt_double(float_max) + "]");
    const double sym_max = std::max(float_max, std::abs(float_min));
    if (!(sym_max > 0.0))
        throw FormatError("signed format needs a nonzero range");
    FixedPointFormat f;
    f.width_ = bit_width;
    f.sign_ = Signedness::Signed;
    f.cc_ = (std::ldexp(1.0, bit_width - 1) - 0.5) / sym_max;
    f.fmin_ = float_min;
    f.fmax_ = float_max;
    return f;
}

// cc = (2^n - 0.5) / float_max
inline FixedPointFormat make_unsigned_format(int bit_width, double float_max)
{
    FixedPointFormat::check_width(bit_width, 1);
    if (!std::isfinite(float_max) || !(float_max > 0.0))
        throw FormatError("unsigned format needs float_max > 0, got " + detail::fmt_double(float_max));
    FixedPointFormat f;
    f.width_ = bit_width;
    f.sign_ = Signedness::Unsigned;
    f.cc_ = (std::ldexp(1.0, bit_width) - 0.5) / float_max;
    f.fmin_ = 0.0;
    f.fmax_ = float_max;
    return f;
}

inline std::int64_t saturate(std::int64_t v, const IntRange& r) { return std::clamp(v, r.lo, r.hi); }

// Round half away from zero, then saturate to the word. No range check.
inline std::int64_t to_integer_saturating(double x, const FixedPointFormat& fmt)
{
    if (std::isnan(x))
        throw RangeError("cannot convert NaN");
    const auto r = fmt.int_range();
    const double scaled = x * fmt.conversion_constant();
    if (scaled >= static_cast<double>(r.hi))
        return r.hi;
    if (scaled <= static_cast<double>(r.lo))
        return r.lo;
    return saturate(std::llround(scaled), r);
}

inline std::int64_t to_integer(double x, const FixedPointFormat& fmt)
{
    if (!(x >= fmt.float_min() && x <= fmt.float_max()))
        throw RangeError("value " + detail::fmt_double(x) + " outside declared range [" +
                         detail::fmt_double(fmt.float_min()) + ", " + detail::fmt_double(fmt.float_max()) + "]");
    return to_integer_saturating(x, fmt);
}

inline double to_real(std::int64_t i, const FixedPointFormat& fmt)
{
    return static_cast<double>(i) / fmt.conversion_constant();
}

// One (float, integer, real) observation of a signal.
struct SignalValue {
    double float_value = 0.0;
    std::int64_t integer_value = 0;
    double real_value = 0.0;

    static SignalValue from(double f, std::int64_t i, double cc)
    {
        return {f, i, static_cast<double>(i) / cc};
    }
};

} // namespace fxpipe
