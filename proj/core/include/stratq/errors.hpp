#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace stratq
{

enum class ErrorKind
{
    NotFinite,
    NonPositiveRate,
    RewardTooSmall,
    MissingKey,
    UnknownKeys,
    DriftTowardOpenBarrier,
    NotAbsorbing,
    SingularSystem,
    ChainTooLarge,
    ThresholdOverflow,
    UnstableSemiStrategic,
    CapViolation,
    WrongRegime,
    DomainError,
    DegenerateTrapezoid,
    ScanDiverged,
    ConfigError,
    OverflowGuard,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a machine-readable kind so the
// CLI can map it onto an exit code and a JSON error object.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& message, std::string detail = {})
        : std::runtime_error(message), kind_(kind), detail_(std::move(detail))
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

    // Short qualifier, e.g. the offending class for RewardTooSmall or the
    // comma-separated key list for UnknownKeys.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

}  // namespace stratq
