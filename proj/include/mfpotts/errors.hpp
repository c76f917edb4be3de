#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mfpotts {

/// Raised for parameters outside the domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an exact enumeration would exceed its configured state cap.
class CapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A limiting kernel was evaluated exactly at a point where it has no limit.
class AtDiscontinuity : public std::domain_error {
public:
    AtDiscontinuity(std::size_t class_index, double x, double beta_c)
        : std::domain_error("kernel evaluated at a discontinuity in class " +
                            std::to_string(class_index + 1)),
          class_index_(class_index), x_(x), beta_c_(beta_c) {}

    /// Zero-based index of the offending fuzzy class.
    std::size_t class_index() const noexcept { return class_index_; }
    double effective_beta() const noexcept { return x_; }
    double critical_beta() const noexcept { return beta_c_; }

private:
    std::size_t class_index_;
    double x_;
    double beta_c_;
};

}  // namespace mfpotts
