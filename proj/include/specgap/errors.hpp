// Error taxonomy: configuration errors are std::invalid_argument; runtime
// numerical failures derive from numerical_error (a std::runtime_error).
#pragma once

#include <stdexcept>
#include <string>

namespace specgap {

// Base for failures of numerical procedures (non-convergence, singular
// systems, failed internal consistency checks).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// A quadrature or series failed to reach its target accuracy within the
// permitted refinement budget.
class resolution_error : public numerical_error {
public:
    explicit resolution_error(const std::string& what) : numerical_error(what) {}
};

// Two independently computed quantities that must agree did not.
class consistency_error : public numerical_error {
public:
    explicit consistency_error(const std::string& what) : numerical_error(what) {}
};

// The discretized generator has a (numerically) multi-dimensional kernel, so
// no unique stationary state exists at this resolution.
class degenerate_kernel_error : public numerical_error {
public:
    explicit degenerate_kernel_error(const std::string& what) : numerical_error(what) {}
};

// The kernel vector cannot be normalized to unit mass (mass functional
// numerically zero).
class normalization_error : public numerical_error {
public:
    explicit normalization_error(const std::string& what) : numerical_error(what) {}
};

} // namespace specgap
