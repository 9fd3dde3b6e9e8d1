#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fxpipe/fxp.hpp"

using namespace fxpipe;

TEST(Format, SignedConversionConstant)
{
    const auto f = make_signed_format(10, -3.14, 3.14);
    EXPECT_DOUBLE_EQ(f.conversion_constant(), 511.5 / 3.14);
    EXPECT_EQ(f.bit_width(), 10);
    EXPECT_TRUE(f.is_signed());
    EXPECT_EQ(f.int_range(), (IntRange{-512, 511}));
}

TEST(Format, SignedConstantUsesLargerMagnitude)
{
    const auto f = make_signed_format(8, -10.0, 2.0);
    EXPECT_DOUBLE_EQ(f.conversion_constant(), 127.5 / 10.0);
    const auto g = make_signed_format(8, -1.0, 4.0);
    EXPECT_DOUBLE_EQ(g.conversion_constant(), 127.5 / 4.0);
}

TEST(Format, UnsignedConversionConstant)
{
    const auto f = make_unsigned_format(12, 16.0);
    EXPECT_DOUBLE_EQ(f.conversion_constant(), 4095.5 / 16.0);
    EXPECT_FALSE(f.is_signed());
    EXPECT_EQ(f.int_range(), (IntRange{0, 4095}));
}

TEST(Format, RejectsBadWidthsAndRanges)
{
    EXPECT_THROW(make_signed_format(1, -1, 1), FormatError);
    EXPECT_THROW(make_signed_format(49, -1, 1), FormatError);
    EXPECT_THROW(make_unsigned_format(0, 1), FormatError);
    EXPECT_THROW(make_unsigned_format(49, 1), FormatError);
    EXPECT_THROW(make_signed_format(8, 1, -1), FormatError);
    EXPECT_THROW(make_signed_format(8, 0, 0), FormatError);
    EXPECT_THROW(make_unsigned_format(8, 0), FormatError);
    EXPECT_THROW(make_unsigned_format(8, NAN), FormatError);
    EXPECT_NO_THROW(make_signed_format(48, -1, 1));
    EXPECT_NO_THROW(make_unsigned_format(1, 1));
}

TEST(Convert, PipelinedAddValues)
{
    const auto f = make_signed_format(10, -3.14, 3.14);
    EXPECT_EQ(to_integer(1.57, f), 256);
    EXPECT_EQ(to_integer(-0.785, f), -128);
    EXPECT_EQ(to_integer(0.785, f), 128);
    EXPECT_NEAR(to_real(256, f), 1.57153, 5e-6);
    EXPECT_NEAR(to_real(-128, f), -0.78577, 5e-6);
}

TEST(Convert, RoundsHalfAwayFromZero)
{
    const auto f = FixedPointFormat::derived(8, Signedness::Signed, 2.0);
    EXPECT_EQ(to_integer_saturating(1.25, f), 3);   // 2.5
    EXPECT_EQ(to_integer_saturating(-1.25, f), -3); // -2.5
    EXPECT_EQ(to_integer_saturating(0.75, f), 2);   // 1.5
    EXPECT_EQ(to_integer_saturating(0.2, f), 0);
}

TEST(Convert, Saturates)
{
    const auto f = make_signed_format(10, -3.14, 3.14);
    EXPECT_EQ(to_integer_saturating(3.14, f), 511);
    EXPECT_EQ(to_integer_saturating(-3.14, f), -511);
    EXPECT_EQ(to_integer_saturating(100.0, f), 511);
    EXPECT_EQ(to_integer_saturating(-100.0, f), -512);
    EXPECT_THROW(to_integer(3.15, f), RangeError);
    EXPECT_THROW(to_integer_saturating(NAN, f), RangeError);
    const auto u = make_unsigned_format(4, 1.0);
    EXPECT_EQ(to_integer_saturating(-0.3, u), 0);
    EXPECT_EQ(to_integer_saturating(1.0, u), 15);
}

TEST(Convert, RoundTripWithinHalfLsb)
{
    std::mt19937_64 rng(7);
    for (int w : {2, 5, 10, 16, 24, 32, 48}) {
        const auto f = make_signed_format(w, -2.5, 2.5);
        const double half_lsb = 0.5 / f.conversion_constant();
        std::uniform_real_distribution<double> dist(f.float_min(), f.float_max());
        for (int k = 0; k < 2000; ++k) {
            const double x = dist(rng);
            // a few ulps of slack for the double conversion at 48 bits
            ASSERT_LE(std::abs(to_real(to_integer(x, f), f) - x), half_lsb * (1 + 1e-9) + 8e-16 * std::abs(x))
                << "w=" << w;
        }
    }
}

TEST(Convert, MonotonicAndSymmetric)
{
    const auto f = make_signed_format(12, -5.0, 5.0);
    std::int64_t prev = to_integer(-5.0, f);
    for (int k = -5000; k <= 5000; ++k) {
        const double x = k * 1e-3;
        const auto i = to_integer(x, f);
        ASSERT_GE(i, prev);
        if (std::abs(i) < 2047) { // the two's-complement ends are asymmetric
            ASSERT_EQ(to_integer(-x, f), -i);
        }
        prev = i;
    }
}

TEST(Width, MinimalWidth)
{
    EXPECT_EQ(min_width_for_integer_range(0, 0, Signedness::Unsigned), 1);
    EXPECT_EQ(min_width_for_integer_range(0, 255, Signedness::Unsigned), 8);
    EXPECT_EQ(min_width_for_integer_range(0, 256, Signedness::Unsigned), 9);
    EXPECT_EQ(min_width_for_integer_range(-512, 511, Signedness::Signed), 10);
    EXPECT_EQ(min_width_for_integer_range(-1024, 1022, Signedness::Signed), 11);
    EXPECT_EQ(min_width_for_integer_range(0, 1024, Signedness::Signed), 12);
    EXPECT_EQ(min_width_for_integer_range(-1, 0, Signedness::Signed), 1);
    EXPECT_THROW(min_width_for_integer_range(-1, 3, Signedness::Unsigned), RangeError);
    EXPECT_THROW(min_width_for_integer_range(3, 1, Signedness::Signed), RangeError);
}

TEST(Width, MinimalityProperty)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> dist(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
    for (int k = 0; k < 5000; ++k) {
        auto a = dist(rng), b = dist(rng);
        if (a > b)
            std::swap(a, b);
        const int w = min_width_for_integer_range(a, b, Signedness::Signed);
        ASSERT_TRUE(representable_range(w, Signedness::Signed).contains(IntRange{a, b}));
        if (w > 1) {
            ASSERT_FALSE(representable_range(w - 1, Signedness::Signed).contains(IntRange{a, b}));
        }
    }
}

TEST(Format, DerivedRangeFollowsIntegers)
{
    const auto f = FixedPointFormat::derived(11, Signedness::Signed, 511.5 / 3.14);
    EXPECT_DOUBLE_EQ(f.float_max(), 1023 / f.conversion_constant());
    EXPECT_DOUBLE_EQ(f.float_min(), -1024 / f.conversion_constant());
    EXPECT_THROW(FixedPointFormat::derived(8, Signedness::Signed, 0.0), FormatError);
    EXPECT_TRUE(same_constant(f, make_signed_format(10, -3.14, 3.14)));
}

TEST(SignalValueTest, CarriesAllThreeViews)
{
    const auto v = SignalValue::from(1.57, 256, 511.5 / 3.14);
    EXPECT_DOUBLE_EQ(v.float_value, 1.57);
    EXPECT_EQ(v.integer_value, 256);
    EXPECT_NEAR(v.real_value, 1.57153, 5e-6);
}

TEST(Format, ReferenceConstants)
{
    EXPECT_NEAR(make_signed_format(10, -3.14, 3.14).conversion_constant(), 162.898, 5e-4);
    EXPECT_DOUBLE_EQ(make_signed_format(8, -1.0, 1.0).conversion_constant(), 127.5);
    EXPECT_NEAR(make_unsigned_format(10, 3.14).conversion_constant(), 325.955, 5e-4);
    EXPECT_DOUBLE_EQ(make_unsigned_format(8, 1.0).conversion_constant(), 255.5);
}

TEST(Width, SignedRangeBruteForce)
{
    int w = 1;
    while (!(-(std::int64_t{1} << (w - 1)) <= -128 && 256 <= (std::int64_t{1} << (w - 1)) - 1))
        ++w;
    EXPECT_EQ(w, 10);
    EXPECT_EQ(min_width_for_integer_range(-128, 256, Signedness::Signed), w);
}
