#pragma once

// Exact-oracle comparison suites shared by the verify command and the tests.

#include <string>
#include <vector>

#include "mfpotts/finite_volume.hpp"
#include "mfpotts/random_cluster.hpp"

namespace mfpotts {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;   // worst error observed
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyCaps {
    std::uint64_t types = kDefaultTypeCap;
    std::uint64_t clique_states = kDefaultCliqueStateCap;
};

/// Coupling marginals at N=5, q=2, z in {2,3}, p in {0.3, 0.7}; tolerance 1e-12.
SuiteResult verify_marginals(const VerifyCaps& caps = {});

/// Exact variance identity for N <= 6, (q,z) in {(2,2),(2,3),(3,2)},
/// beta in {0, 0.5, 1, 2}; tolerance 1e-10.
SuiteResult verify_variance(const VerifyCaps& caps = {});

/// qn_exact against q_infinity at N in {125, 250, 500}: error at 500 below
/// 0.05 and shrinking in N, at five continuity points for q=3, partition (1,2).
SuiteResult verify_kernel_convergence(const VerifyCaps& caps = {});

/// k' and k'' against central differences on u in {0.05, ..., 0.95} at 20
/// parameter points; relative tolerance 1e-6.
SuiteResult verify_gradients();

/// Suite names in default order.
std::vector<std::string> verify_suite_names();

/// Runs the named suites (all when empty); throws DomainError on an unknown name.
std::vector<SuiteResult> run_verify(const std::vector<std::string>& suites, const VerifyCaps& caps = {});

}  // namespace mfpotts
