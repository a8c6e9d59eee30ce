#pragma once

#include <stdexcept>
#include <string>

namespace advids {

// Base for everything thrown by the library. The CLI maps subclasses to
// exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Tensor/layer shape disagreements.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Wrong API usage (cache/layer mismatch, bad call order).
class UsageError : public Error {
public:
    using Error::Error;
};

// Value outside its admissible set (label index, probability, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Invalid hyperparameters or run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// CSV/file ingestion failures.
class IngestionError : public Error {
public:
    using Error::Error;
};

// Feature schema fitting/consistency failures.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Stratified split cannot be performed.
class SplitError : public Error {
public:
    using Error::Error;
};

// Statistics requested over an empty or malformed set.
class StatsError : public Error {
public:
    using Error::Error;
};

// Classification metrics over an empty evaluation.
class MetricsError : public Error {
public:
    using Error::Error;
};

// Checkpoint files that cannot be read back as a model.
class CheckpointError : public Error {
public:
    using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace advids
