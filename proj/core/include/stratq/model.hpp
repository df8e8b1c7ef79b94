#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>

namespace stratq
{

enum class CustomerClass : std::uint8_t
{
    A,
    B,
};

std::string_view to_string(CustomerClass c) noexcept;

// Unvalidated parameter record as read from a config file.
struct RawParams
{
    double lambda_a = 0.0;
    double lambda_b = 0.0;
    double mu = 0.0;
    double reward_a = 0.0;
    double cost_a = 0.0;
    double reward_b = 0.0;
    double cost_b = 0.0;
};

// Validated two-class M/M/1 parameters. Only `validate_params` constructs
// one from raw input, so holding a ModelParams means every rate is positive
// (lambda_b may be zero) and reward * mu >= cost for both classes.
class ModelParams
{
public:
    double lambda_a() const noexcept { return raw_.lambda_a; }
    double lambda_b() const noexcept { return raw_.lambda_b; }
    double mu() const noexcept { return raw_.mu; }
    double reward_a() const noexcept { return raw_.reward_a; }
    double cost_a() const noexcept { return raw_.cost_a; }
    double reward_b() const noexcept { return raw_.reward_b; }
    double cost_b() const noexcept { return raw_.cost_b; }

    double reward(CustomerClass c) const noexcept { return c == CustomerClass::A ? reward_a() : reward_b(); }
    double cost(CustomerClass c) const noexcept { return c == CustomerClass::A ? cost_a() : cost_b(); }
    double lambda(CustomerClass c) const noexcept { return c == CustomerClass::A ? lambda_a() : lambda_b(); }

    // R * mu / C, the dimensionless reward ratio every threshold is read against.
    double service_value_ratio(CustomerClass c) const noexcept { return reward(c) * mu() / cost(c); }

    const RawParams& raw() const noexcept { return raw_; }

    // Same parameters with one arrival rate replaced; revalidates.
    ModelParams with_lambda_b(double lambda_b) const;

    friend bool operator==(const ModelParams& x, const ModelParams& y) noexcept;

private:
    friend ModelParams validate_params(const RawParams& raw);
    explicit ModelParams(const RawParams& raw) : raw_(raw) {}

    RawParams raw_;
};

ModelParams validate_params(const RawParams& raw);
inline ModelParams validate_params(const ModelParams& params) { return validate_params(params.raw()); }

struct Utilizations
{
    double rho_a = 0.0;
    double rho_b = 0.0;
    double rho = 0.0;
};

Utilizations utilizations(const ModelParams& params) noexcept;

// Customers present in the system (or ahead of a tagged customer, depending
// on the call site; each operation documents which).
struct QueueState
{
    int n_a = 0;
    int n_b = 0;

    int total() const noexcept { return n_a + n_b; }
    friend auto operator<=>(const QueueState&, const QueueState&) = default;
};

// 1-based rank of a tagged customer: customers ahead + 1. Position 1 is the
// customer in service.
class Position
{
public:
    explicit Position(int p);
    static Position behind(int ahead) { return Position(ahead + 1); }

    int value() const noexcept { return p_; }
    int ahead() const noexcept { return p_ - 1; }
    friend auto operator<=>(const Position&, const Position&) = default;

private:
    int p_;
};

// Load factors this close to 1 are treated as exactly 1 wherever a raw
// closed form has to pick a branch.
inline constexpr double kUnitLoadTolerance = 1e-9;

}  // namespace stratq
