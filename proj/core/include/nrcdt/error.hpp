#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nrcdt {

enum class ErrorKind {
    ZeroMass,
    DimensionMismatch,
    NonFinite,
    OutOfRange,
    SingularMatrix,
    DegenerateProjection,
    CollinearSupport,
    InvalidConfig,
    ParseError,
    MissingFile,
    UnsupportedFormat,
    IoError,
    SingleClass,
    EmptyReferences,
    TooFewItems,
    InvalidK,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception. `kind()` identifies the failure class; the
/// optional index names the offending direction or item when one exists.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message,
          std::optional<std::size_t> index = std::nullopt);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> index_;
};

}  // namespace nrcdt
