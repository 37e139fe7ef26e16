#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace trapspec {

enum class ErrorKind {
    domain,
    config,
    numeric,
    io,
    resonance,
    convergence,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorKind::config, w) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string& w) : Error(ErrorKind::numeric, w) {}
};

struct IoError : Error {
    explicit IoError(const std::string& w) : Error(ErrorKind::io, w) {}
};

// Pole of tan(delta), or infinite scattering length at a unitarity point.
struct ResonanceError : Error {
    explicit ResonanceError(const std::string& w) : Error(ErrorKind::resonance, w) {}
};

}  // namespace trapspec
