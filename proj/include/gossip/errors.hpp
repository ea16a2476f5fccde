#pragma once

#include <stdexcept>
#include <string>

namespace gossip {

// Invalid user input: bad topology parameters, malformed rate expressions,
// inconsistent config documents. The CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical analysis failure (reducible chain, singular sub-generator).
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A simulation exceeded one of its runtime guards. Exit code 3.
class RuntimeGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AggregationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gossip
