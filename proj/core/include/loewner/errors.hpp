#pragma once

#include <stdexcept>
#include <string>

namespace loewner {

/// A requested bound or Lipschitz certificate does not exist (divergent
/// L^d norm, no enclosing polydisc, unsupported coefficient profile, ...).
class CertificateError : public std::runtime_error {
public:
    explicit CertificateError(const std::string& what) : std::runtime_error(what) {}
};

/// A trajectory left the domain before the requested end time.
class EscapeError : public std::runtime_error {
public:
    EscapeError(const std::string& what, double escape_time)
        : std::runtime_error(what), escape_time_(escape_time) {}
    double escape_time() const { return escape_time_; }

private:
    double escape_time_;
};

/// The Picard iteration failed to contract.
class PicardError : public std::runtime_error {
public:
    explicit PicardError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed configuration or serialized payload.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace loewner
