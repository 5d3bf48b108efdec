#include "nrcdt/error.hpp"

namespace nrcdt {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ZeroMass: return "ZeroMass";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::DegenerateProjection: return "DegenerateProjection";
        case ErrorKind::CollinearSupport: return "CollinearSupport";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::MissingFile: return "MissingFile";
        case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::SingleClass: return "SingleClass";
        case ErrorKind::EmptyReferences: return "EmptyReferences";
        case ErrorKind::TooFewItems: return "TooFewItems";
        case ErrorKind::InvalidK: return "InvalidK";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      index_(index) {}

}  // namespace nrcdt
