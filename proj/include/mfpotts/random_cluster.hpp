#pragma once

// Clique random-cluster representation: the coupling of spins with open
// z-cliques, its connected components, and the identities it implies.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mfpotts/rng.hpp"

namespace mfpotts {

inline constexpr std::uint64_t kDefaultCliqueCap = 1'000'000;
inline constexpr std::uint64_t kDefaultCliqueStateCap = 1ULL << 22;

/// Open z-cliques on vertices {0, ..., N-1}.
struct CliqueConfig {
    int z = 2;
    int N = 0;
    std::vector<std::vector<int>> open_set;

    /// Throws DomainError unless every member has z distinct in-range vertices.
    void validate() const;
};

/// Vertex components induced by the open cliques, isolated vertices included.
struct ComponentReport {
    std::vector<int> component_sizes;  // descending
    int k_omega = 0;

    /// sum_i (|C_i| / N)^2
    double squared_fraction_sum() const;
    double max_fraction() const;
};

ComponentReport rcm_components(const CliqueConfig& omega);

/// C(N, z), saturating.
std::uint64_t clique_count(int N, int z);

/// Calls visit(subset) for every z-subset of `vertices` in lexicographic order.
void for_each_clique(std::span<const int> vertices, int z, const std::function<void(std::span<const int>)>& visit);

/// Number of monochromatic z-subsets, sum_c C(n_c, z).
double monochromatic_cliques(std::span<const int> counts, int z);

/// Clique coupling beta (z-1)! / N^{z-1} of the all-cliques Hamiltonian.
double clique_coupling(double beta, int N, int z);

/// Alternating conditional sampler of the spin / clique coupling.
class EdwardsSokalSampler {
public:
    EdwardsSokalSampler(int N, int z, int q, double p_open, RngSeed seed, std::uint64_t chain = 0,
                        std::uint64_t cap = kDefaultCliqueCap);

    /// Opens each monochromatic clique with probability p_open, then recolors
    /// every vertex component uniformly.
    void step();

    const std::vector<int>& spins() const noexcept { return spins_; }
    const CliqueConfig& cliques() const noexcept { return omega_; }
    const ComponentReport& components() const noexcept { return report_; }
    std::vector<int> color_counts() const;

private:
    int q_;
    double p_open_;
    Engine rng_;
    std::vector<int> spins_;
    CliqueConfig omega_;
    ComponentReport report_;
};

struct MarginalCheck {
    double spin_error = 0.0;    // max |sum_omega K - Potts|
    double clique_error = 0.0;  // max |sum_sigma K - RCM|
};

/// Brute-force marginals of the coupling over all (sigma, omega).
MarginalCheck coupling_marginal_check(int N, int z, int q, double p_open,
                                      std::uint64_t cap = kDefaultCliqueStateCap);

struct VarianceCheck {
    double lhs = 0.0;  // Var L_N(1) under the clique Potts measure
    double rhs = 0.0;  // (q-1)/q^2 E_RCM sum_i (|C_i|/N)^2
    double lhs_stderr = 0.0;
    double rhs_stderr = 0.0;
    bool exact = true;
};

/// Both sides by exact enumeration, with p = 1 - exp(-clique_coupling(beta, N, z)).
VarianceCheck variance_identity_exact(int N, int q, int z, double beta,
                                      std::uint64_t cap = kDefaultCliqueStateCap);

/// Both sides estimated from one coupled chain, with batch-means standard errors.
VarianceCheck variance_identity_mc(int N, int q, int z, double beta, RngSeed seed, int samples,
                                   int burn_in = 100);

struct PercolationPoint {
    double lambda = 0.0;
    double p_open = 0.0;
    double mean_max_fraction = 0.0;
    double stderr_max_fraction = 0.0;
};

/// E[max_i |C_i| / N] under p = lambda / N^{z-1}, one chain per lambda.
std::vector<PercolationPoint> percolation_scan(int N, int z, int q, std::span<const double> lambdas,
                                               RngSeed seed, int samples, int burn_in = 50,
                                               std::uint64_t cap = kDefaultCliqueCap);

}  // namespace mfpotts
