#include "topofield/error.hpp"

namespace topofield {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::mode_mismatch: return "mode-mismatch";
        case ErrorKind::unsupported_operation: return "unsupported-operation";
        case ErrorKind::geometry: return "geometry";
        case ErrorKind::degeneracy: return "degeneracy";
        case ErrorKind::degenerate_sample: return "degenerate-sample";
        case ErrorKind::resource: return "resource";
        case ErrorKind::config: return "config";
    }
    return "unknown";
}

}  // namespace topofield

namespace topofield {

ResourceError::ResourceError(std::uint64_t required_bytes, std::uint64_t limit_bytes,
                             const std::string& what)
    : Error(ErrorKind::resource, what + ": requires " + std::to_string(required_bytes) +
                                     " bytes, limit " + std::to_string(limit_bytes)),
      required_(required_bytes),
      limit_(limit_bytes) {}

}  // namespace topofield
