#pragma once

// Exact finite-N computations over type classes (color-count vectors) and the
// single-site heat-bath sampler of the mean-field Potts measure.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mfpotts/fuzzy.hpp"
#include "mfpotts/model.hpp"
#include "mfpotts/rng.hpp"

namespace mfpotts {

inline constexpr std::uint64_t kDefaultTypeCap = 5'000'000;

/// Color counts (n_1, ..., n_q) of N spins.
struct TypeOccupancy {
    std::vector<int> counts;
    int N = 0;

    /// Throws DomainError unless all counts >= 0 and they sum to N.
    void validate() const;
};

/// Number of compositions of n into `parts` nonnegative parts, saturating at UINT64_MAX.
std::uint64_t composition_count(int n, int parts);

/// Calls visit(counts) for every composition of n into `parts` parts, in
/// lexicographically decreasing order of counts.
void for_each_composition(int n, int parts, const std::function<void(std::span<const int>)>& visit);

/// log of the multinomial coefficient (sum counts)! / prod counts_i!.
double log_multinomial(std::span<const int> counts);

struct TypeDistribution {
    int N = 0;
    int q = 0;
    std::vector<std::vector<int>> types;
    std::vector<double> probabilities;

    /// Probability of a given count vector; 0 if it is not a composition of N.
    double probability(std::span<const int> counts) const;
    /// Mean of L_N(color).
    double mean_fraction(int color) const;
};

/// Law of N L_N under the N-spin measure, normalized by log-sum-exp.
TypeDistribution exact_type_distribution(int N, const ModelParams& p, std::uint64_t cap = kDefaultTypeCap);

/// A(beta, r, M): expectation of exp(beta L_M(1)^{z-1}) under the M-spin,
/// r-state measure at inverse temperature beta. A(., ., 0) = 1.
double partition_expectation(double beta, int r, int M, double z, std::uint64_t cap = kDefaultTypeCap);

/// Conditioning counts (N-1) nu rounded by largest remainder.
std::vector<int> conditioning_counts(std::span<const double> nu, int N);

/// Finite-N kernel r_k A(beta_k, r_k, N_k) / sum_l r_l A(beta_l, r_l, N_l) for
/// class counts N_l of the other N-1 sites.
std::vector<double> qn_kernel_row(std::span<const int> class_counts, int N, double beta, double z,
                                  const SpinPartition& partition, std::uint64_t cap = kDefaultTypeCap);
double qn_kernel(std::size_t k, std::span<const int> class_counts, int N, double beta, double z,
                 const SpinPartition& partition, std::uint64_t cap = kDefaultTypeCap);

/// Exact conditional law of the fuzzy spin at one site given the fuzzy class
/// counts of the other sites (N = sum + 1), by per-class type enumeration.
std::vector<double> qn_exact_row(std::span<const int> class_counts, double beta, double z,
                                 const SpinPartition& partition, std::uint64_t cap = kDefaultTypeCap);
double qn_exact(std::size_t k, std::span<const int> class_counts, double beta, double z,
                const SpinPartition& partition, std::uint64_t cap = kDefaultTypeCap);

/// Single-site heat-bath dynamics for the N-spin measure. One sweep updates
/// every site once, in order. Starts from i.i.d. uniform colors.
class HeatBathSampler {
public:
    HeatBathSampler(int N, const ModelParams& p, RngSeed seed, std::uint64_t chain = 0);

    void sweep();

    const std::vector<int>& counts() const noexcept { return counts_; }
    const std::vector<int>& spins() const noexcept { return spins_; }
    int N() const noexcept { return static_cast<int>(spins_.size()); }

private:
    Engine rng_;
    std::vector<int> spins_;
    std::vector<int> counts_;
    std::vector<double> gain_;  // log-weight gained by adding a spin to a color holding n
    std::vector<double> scratch_;
};

/// Runs `sweeps` sweeps and calls record(sweep_index, counts) after each.
void run_heat_bath(int N, const ModelParams& p, RngSeed seed, int sweeps,
                   const std::function<void(int, std::span<const int>)>& record);

}  // namespace mfpotts
