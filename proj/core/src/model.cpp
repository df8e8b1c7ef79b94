#include "stratq/model.hpp"

#include <cmath>
#include <string>

#include "stratq/errors.hpp"

namespace stratq
{

std::string_view to_string(CustomerClass c) noexcept
{
    return c == CustomerClass::A ? "A" : "B";
}

ModelParams validate_params(const RawParams& raw)
{
    for (double v : {raw.lambda_a, raw.lambda_b, raw.mu, raw.reward_a, raw.cost_a, raw.reward_b, raw.cost_b})
    {
        if (!std::isfinite(v))
        {
            throw Error(ErrorKind::NotFinite, "parameter record contains a non-finite value");
        }
    }
    if (raw.lambda_a <= 0.0 || raw.mu <= 0.0 || raw.lambda_b < 0.0)
    {
        throw Error(ErrorKind::NonPositiveRate,
                    "rates must satisfy lambda_a > 0, mu > 0, lambda_b >= 0");
    }
    if (raw.reward_a <= 0.0 || raw.cost_a <= 0.0 || raw.reward_b <= 0.0 || raw.cost_b <= 0.0)
    {
        throw Error(ErrorKind::NonPositiveRate, "rewards and waiting costs must be positive");
    }
    if (raw.reward_a * raw.mu < raw.cost_a)
    {
        throw Error(ErrorKind::RewardTooSmall, "reward_a * mu < cost_a: class A would never join", "A");
    }
    if (raw.reward_b * raw.mu < raw.cost_b)
    {
        throw Error(ErrorKind::RewardTooSmall, "reward_b * mu < cost_b: class B would never join", "B");
    }
    return ModelParams(raw);
}

ModelParams ModelParams::with_lambda_b(double lambda_b) const
{
    RawParams r = raw_;
    r.lambda_b = lambda_b;
    return validate_params(r);
}

bool operator==(const ModelParams& x, const ModelParams& y) noexcept
{
    const RawParams& a = x.raw_;
    const RawParams& b = y.raw_;
    return a.lambda_a == b.lambda_a && a.lambda_b == b.lambda_b && a.mu == b.mu && a.reward_a == b.reward_a &&
           a.cost_a == b.cost_a && a.reward_b == b.reward_b && a.cost_b == b.cost_b;
}

Utilizations utilizations(const ModelParams& params) noexcept
{
    Utilizations u;
    u.rho_a = params.lambda_a() / params.mu();
    u.rho_b = params.lambda_b() / params.mu();
    u.rho = (params.lambda_a() + params.lambda_b()) / params.mu();
    return u;
}

Position::Position(int p) : p_(p)
{
    if (p < 1)
    {
        throw Error(ErrorKind::DomainError, "position must be >= 1, got " + std::to_string(p));
    }
}

}  // namespace stratq
