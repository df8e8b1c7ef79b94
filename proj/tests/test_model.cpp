#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stratq/errors.hpp"
#include "stratq/model.hpp"

using namespace stratq;

namespace
{

ErrorKind kind_of(const RawParams& raw)
{
    try
    {
        validate_params(raw);
    }
    catch (const Error& e)
    {
        return e.kind();
    }
    ADD_FAILURE() << "no error";
    return ErrorKind::ConfigError;
}

}  // namespace

TEST(Validate, AcceptsOrdinaryRecord)
{
    const ModelParams p = validate_params(RawParams{1, 1, 2, 4, 1, 3, 1});
    EXPECT_EQ(p.lambda_b(), 1.0);
    EXPECT_EQ(p.service_value_ratio(CustomerClass::A), 8.0);
}

TEST(Validate, RejectsBadRecords)
{
    EXPECT_EQ(kind_of(RawParams{1, 1, 1, 0.5, 1, 3, 1}), ErrorKind::RewardTooSmall);
    EXPECT_EQ(kind_of(RawParams{0, 1, 1, 4, 1, 3, 1}), ErrorKind::NonPositiveRate);
    EXPECT_EQ(kind_of(RawParams{1, -1, 1, 4, 1, 3, 1}), ErrorKind::NonPositiveRate);
    EXPECT_EQ(kind_of(RawParams{1, 1, 0, 4, 1, 3, 1}), ErrorKind::NonPositiveRate);
    EXPECT_EQ(kind_of(RawParams{1, 1, 1, NAN, 1, 3, 1}), ErrorKind::NotFinite);
    EXPECT_EQ(kind_of(RawParams{1, INFINITY, 1, 4, 1, 3, 1}), ErrorKind::NotFinite);
}

TEST(Validate, RewardTooSmallNamesTheClass)
{
    try
    {
        validate_params(RawParams{1, 1, 1, 4, 1, 0.5, 1});
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::RewardTooSmall);
        EXPECT_EQ(e.detail(), "B");
    }
}

TEST(Validate, BoundaryRewardTimesMuEqualsCost)
{
    EXPECT_NO_THROW(validate_params(RawParams{1, 0, 1, 1, 1, 1, 1}));
}

TEST(Validate, Idempotent)
{
    const ModelParams p = validate_params(RawParams{0.7, 0.3, 1.9, 4.1, 1.3, 3.3, 0.9});
    EXPECT_EQ(validate_params(p), p);
    EXPECT_EQ(p.with_lambda_b(0.3), p);
    EXPECT_NE(p.with_lambda_b(0.0), p);
}

TEST(Utilizations, Examples)
{
    auto u = utilizations(validate_params(RawParams{1, 2, 4, 4, 1, 3, 1}));
    EXPECT_DOUBLE_EQ(u.rho_a, 0.25);
    EXPECT_DOUBLE_EQ(u.rho_b, 0.5);
    EXPECT_DOUBLE_EQ(u.rho, 0.75);
    u = utilizations(validate_params(RawParams{1, 0, 1, 4, 1, 3, 1}));
    EXPECT_EQ(u.rho_a, 1.0);
    EXPECT_EQ(u.rho_b, 0.0);
    EXPECT_EQ(u.rho, 1.0);
    u = utilizations(validate_params(RawParams{3, 1, 2, 4, 1, 3, 1}));
    EXPECT_DOUBLE_EQ(u.rho_a, 1.5);
    EXPECT_DOUBLE_EQ(u.rho_b, 0.5);
    EXPECT_DOUBLE_EQ(u.rho, 2.0);
}

TEST(Utilizations, TotalLoadWithinOneUlp)
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> rate(0.01, 10.0);
    for (int k = 0; k < 10'000; ++k)
    {
        const RawParams raw{rate(gen), k % 5 == 0 ? 0.0 : rate(gen), rate(gen), 100, 1, 100, 1};
        const auto u = utilizations(validate_params(raw));
        const double lhs = u.rho * raw.mu;
        const double rhs = raw.lambda_a + raw.lambda_b;
        EXPECT_LE(std::abs(lhs - rhs), std::nextafter(rhs, INFINITY) - rhs) << k;
        // rho_a and rho_b are rounded separately, so their sum may sit two ulps off.
        const double sum = u.rho_a + u.rho_b;
        EXPECT_LE(std::abs(u.rho - sum), 2 * (std::nextafter(sum, INFINITY) - sum)) << k;
    }
}

TEST(Position, Conventions)
{
    EXPECT_EQ(Position::behind(0).value(), 1);
    EXPECT_EQ(Position(5).ahead(), 4);
    EXPECT_THROW(Position(0), Error);
    EXPECT_EQ((QueueState{2, 3}.total()), 5);
}
