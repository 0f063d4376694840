#pragma once

#include <stdexcept>
#include <string>

namespace nids {

/// Bad command line / configuration. CLI exit code 1.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent input data. CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Training or model-file failure. CLI exit code 3.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Evidence with zero probability under the model (all-zero normalization).
class InconsistentEvidenceError : public ModelError {
public:
    explicit InconsistentEvidenceError(const std::string& what) : ModelError(what) {}
};

}  // namespace nids
