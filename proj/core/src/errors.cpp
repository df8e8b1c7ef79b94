#include "stratq/errors.hpp"

namespace stratq
{

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::NonPositiveRate: return "NonPositiveRate";
    case ErrorKind::RewardTooSmall: return "RewardTooSmall";
    case ErrorKind::MissingKey: return "MissingKey";
    case ErrorKind::UnknownKeys: return "UnknownKeys";
    case ErrorKind::DriftTowardOpenBarrier: return "DriftTowardOpenBarrier";
    case ErrorKind::NotAbsorbing: return "NotAbsorbing";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::ChainTooLarge: return "ChainTooLarge";
    case ErrorKind::ThresholdOverflow: return "ThresholdOverflow";
    case ErrorKind::UnstableSemiStrategic: return "UnstableSemiStrategic";
    case ErrorKind::CapViolation: return "CapViolation";
    case ErrorKind::WrongRegime: return "WrongRegime";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateTrapezoid: return "DegenerateTrapezoid";
    case ErrorKind::ScanDiverged: return "ScanDiverged";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::OverflowGuard: return "OverflowGuard";
    }
    return "Unknown";
}

}  // namespace stratq
