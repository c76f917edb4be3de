#include "mfpotts/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "mfpotts/critical.hpp"
#include "mfpotts/errors.hpp"
#include "mfpotts/fuzzy.hpp"
#include "mfpotts/model.hpp"

namespace mfpotts {

namespace {

struct KernelPoint {
    double z;
    double beta;
    std::array<double, 2> nu;
};

constexpr std::array<KernelPoint, 5> kKernelPoints{{
    {2.5, 0.5, {0.5, 0.5}},
    {2.5, 1.0, {0.3, 0.7}},
    {3.0, 0.5, {0.6, 0.4}},
    {3.0, 1.0, {0.5, 0.5}},
    {3.0, 1.0, {0.2, 0.8}},
}};

/// Central difference with one Richardson step, O(h^4).
template <class F>
double derivative(F&& f, double u, double h) {
    const double d1 = (f(u + h) - f(u - h)) / (2 * h);
    const double d2 = (f(u + h / 2) - f(u - h / 2)) / h;
    return (4 * d2 - d1) / 3;
}

double relative_error(double approx, double exact) {
    return std::abs(approx - exact) / std::max(std::abs(exact), 1e-8);
}

}  // namespace

SuiteResult verify_marginals(const VerifyCaps& caps) {
    SuiteResult r{"marginal", true, 0.0, 1e-12, {}};
    for (int z : {2, 3}) {
        for (double p : {0.3, 0.7}) {
            const MarginalCheck c = coupling_marginal_check(5, z, 2, p, caps.clique_states);
            r.measured = std::max({r.measured, c.spin_error, c.clique_error});
        }
    }
    r.passed = r.measured <= r.tolerance;
    r.detail = "N=5 q=2 z={2,3} p={0.3,0.7}";
    return r;
}

SuiteResult verify_variance(const VerifyCaps& caps) {
    SuiteResult r{"variance", true, 0.0, 1e-10, {}};
    const std::array<std::pair<int, int>, 3> qz{{{2, 2}, {2, 3}, {3, 2}}};
    for (const auto& [q, z] : qz) {
        for (int N = z; N <= 6; ++N) {
            for (double beta : {0.0, 0.5, 1.0, 2.0}) {
                const VarianceCheck v = variance_identity_exact(N, q, z, beta, caps.clique_states);
                r.measured = std::max(r.measured, std::abs(v.lhs - v.rhs));
            }
        }
    }
    r.passed = r.measured <= r.tolerance;
    r.detail = "N<=6 (q,z)={(2,2),(2,3),(3,2)} beta={0,0.5,1,2}";
    return r;
}

SuiteResult verify_kernel_convergence(const VerifyCaps& caps) {
    SuiteResult r{"kernel-convergence", true, 0.0, 0.05, {}};
    const SpinPartition partition({1, 2});
    const std::array<int, 3> sizes{125, 250, 500};
    std::ostringstream detail;
    for (const auto& pt : kKernelPoints) {
        std::array<double, 3> errors{};
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            const int N = sizes[i];
            const auto counts = conditioning_counts(pt.nu, N);
            const auto exact = qn_exact_row(counts, pt.beta, pt.z, partition, caps.types);
            const std::array<double, 2> empirical{static_cast<double>(counts[0]) / (N - 1),
                                                  static_cast<double>(counts[1]) / (N - 1)};
            const auto limit = q_infinity_row(empirical, pt.beta, pt.z, partition);
            for (std::size_t k = 0; k < exact.size(); ++k) {
                errors[i] = std::max(errors[i], std::abs(exact[k] - limit[k]));
            }
        }
        const bool shrinking = errors[1] < errors[0] && errors[2] < errors[1];
        if (!shrinking) r.passed = false;
        r.measured = std::max(r.measured, errors[2]);
        detail << "z=" << pt.z << " beta=" << pt.beta << " err=" << errors[0] << ',' << errors[1] << ','
               << errors[2] << (shrinking ? "" : " (not shrinking)") << "; ";
    }
    r.passed = r.passed && r.measured < r.tolerance;
    r.detail = detail.str();
    return r;
}

SuiteResult verify_gradients() {
    SuiteResult r{"gradient", true, 0.0, 1e-6, {}};
    int points = 0;
    for (double q : {2.0, 3.0, 4.0, 6.0, 8.5}) {
        for (double z : {2.0, 2.5, 3.5, 5.0}) {
            const ModelParams p{q, z, 0.9 * beta_one(q, z)};
            ++points;
            for (int i = 1; i <= 19; ++i) {
                const double u = 0.05 * i;
                const double d1 = derivative([&](double v) { return k(v, p); }, u, 1e-3);
                const double d2 = derivative([&](double v) { return k_prime(v, p); }, u, 1e-3);
                r.measured = std::max({r.measured, relative_error(d1, k_prime(u, p)),
                                       relative_error(d2, k_double_prime(u, p))});
            }
        }
    }
    r.passed = r.measured <= r.tolerance;
    r.detail = std::to_string(points) + " parameter points x 19 u values";
    return r;
}

std::vector<std::string> verify_suite_names() {
    return {"marginal", "variance", "kernel-convergence", "gradient"};
}

std::vector<SuiteResult> run_verify(const std::vector<std::string>& suites, const VerifyCaps& caps) {
    const auto names = suites.empty() ? verify_suite_names() : suites;
    for (const auto& n : names) {
        const auto all = verify_suite_names();
        if (std::find(all.begin(), all.end(), n) == all.end()) throw DomainError("unknown verify suite: " + n);
    }
    std::vector<SuiteResult> out;
    for (const auto& n : names) {
        if (n == "marginal") out.push_back(verify_marginals(caps));
        else if (n == "variance") out.push_back(verify_variance(caps));
        else if (n == "kernel-convergence") out.push_back(verify_kernel_convergence(caps));
        else out.push_back(verify_gradients());
    }
    return out;
}

}  // namespace mfpotts
