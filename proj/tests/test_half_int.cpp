#include <gtest/gtest.h>

#include <sstream>

#include <revlink/half_int.hpp>

using namespace revlink;

TEST(HalfInt, ConstructionAndValue) {
    EXPECT_EQ(half(3).value(), 1.5);
    EXPECT_EQ(HalfInt::from_int(-2).halves(), -4);
    EXPECT_TRUE(HalfInt::from_int(7).is_integer());
    EXPECT_FALSE(half(-1).is_integer());
    EXPECT_EQ(HalfInt().halves(), 0);
}

TEST(HalfInt, Arithmetic) {
    EXPECT_EQ(half(1) + half(1), HalfInt::from_int(1));
    EXPECT_EQ(half(1) - HalfInt::from_int(1), half(-1));
    EXPECT_EQ(3 * half(-1), half(-3));
    EXPECT_EQ(half(5) * 2, HalfInt::from_int(5));
    HalfInt x = half(1);
    x += half(3);
    x -= HalfInt::from_int(1);
    EXPECT_EQ(x, HalfInt::from_int(1));
    EXPECT_EQ(-half(3), half(-3));
    EXPECT_LT(half(-1), half(1));
}

TEST(HalfInt, Formatting) {
    EXPECT_EQ(half(6).str(), "3");
    EXPECT_EQ(half(-2).str(), "-1");
    EXPECT_EQ(half(1).str(), "1/2");
    EXPECT_EQ(half(-5).str(), "-5/2");
    EXPECT_EQ(HalfInt().str(), "0");
    std::ostringstream os;
    os << half(-1);
    EXPECT_EQ(os.str(), "-1/2");
}

TEST(GeodesicType, Validation) {
    EXPECT_THROW(GeodesicType(1, 0), InvalidInput);
    EXPECT_THROW(GeodesicType(0, 2), InvalidInput);
    EXPECT_NO_THROW(GeodesicType(0, 1));
    EXPECT_TRUE(GeodesicType(3, 2).reduced());
    EXPECT_FALSE(GeodesicType(4, 2).reduced());
    EXPECT_EQ(GeodesicType(-2, 1).str(), "(-2,1)");
}

TEST(GeodesicType, EquatorLabels) {
    EXPECT_EQ(to_string(EquatorOrientation::Plus), "e+");
    EXPECT_EQ(to_string(EquatorOrientation::Minus), "e-");
}
