#pragma once

// Limiting single-site kernel of the fuzzy Potts model and the resulting
// Gibbs / non-Gibbs verdict for a spin partition (r_1, ..., r_s).

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mfpotts {

/// Class sizes (r_1, ..., r_s) of a partition of the q colors.
class SpinPartition {
public:
    /// Throws DomainError if empty or if any size is < 1.
    explicit SpinPartition(std::vector<int> sizes);

    std::span<const int> sizes() const noexcept { return sizes_; }
    std::size_t classes() const noexcept { return sizes_.size(); }
    int q() const noexcept { return q_; }
    int operator[](std::size_t i) const { return sizes_[i]; }

    /// Fuzzy analysis needs 1 < s < q; throws DomainError otherwise.
    void require_proper() const;

private:
    std::vector<int> sizes_;
    int q_ = 0;
};

enum class GibbsRegime { AllSmallClasses, ZAboveFour, ZTwoToFour };

std::string_view to_string(GibbsRegime regime);

struct DiscontinuityPoint {
    std::size_t class_index = 0;  // zero-based
    double nu = 0.0;              // the conditioning mass of that class
};

struct GibbsVerdict {
    bool gibbs_for_all_beta = false;
    bool non_gibbs = false;                    // at the beta that was classified
    std::optional<double> threshold_beta;      // beta_c(governing size, z)
    std::optional<int> governing_class_size;   // r_* or r_#
    GibbsRegime regime = GibbsRegime::AllSmallClasses;
    std::vector<DiscontinuityPoint> discontinuities;
    bool inherited_quadratic_case = false;     // z == 2
};

/// beta_c(r, z) of the r-state model, +inf for r == 1. Memoized and thread safe.
double class_critical_beta(int r, double z);

/// Limiting partition weight C(x, r) with x = beta * nu_k^{z-1}.
///
/// Throws AtDiscontinuity (class index 0) when |x - beta_c(r, z)| <= 1e-9, r >= 2.
double c_factor(double x, int r, double z);

/// Q^infinity(k | nu) for one class k.
double q_infinity(std::size_t k, std::span<const double> nu, double beta, double z,
                  const SpinPartition& partition);

/// The full kernel row over all classes.
std::vector<double> q_infinity_row(std::span<const double> nu, double beta, double z,
                                   const SpinPartition& partition);

/// Smallest class size >= 3 (2 <= z <= 4) or >= 2 (z > 4); none if no class qualifies.
std::optional<int> r_star(const SpinPartition& partition, double z);

/// Smallest class size >= 2.
std::optional<int> r_hash(const SpinPartition& partition);

GibbsVerdict classify(double beta, int q, double z, const SpinPartition& partition);

}  // namespace mfpotts
