#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace topofield {

enum class ErrorKind {
    invalid_argument,
    mode_mismatch,
    unsupported_operation,
    geometry,
    degeneracy,
    degenerate_sample,
    resource,
    config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool ok, ErrorKind kind, const std::string& message) {
    if (!ok) fail(kind, message);
}

}  // namespace topofield

namespace topofield {

/// Resource error carrying the memory a request would need.
class ResourceError : public Error {
public:
    ResourceError(std::uint64_t required_bytes, std::uint64_t limit_bytes, const std::string& what);
    std::uint64_t required_bytes() const noexcept { return required_; }
    std::uint64_t limit_bytes() const noexcept { return limit_; }

private:
    std::uint64_t required_;
    std::uint64_t limit_;
};

}  // namespace topofield
