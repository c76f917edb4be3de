#pragma once

// Scalar functions of the generalized mean-field Potts model: Hamiltonian,
// relative entropy, free energy on the simplex and along the symmetric
// one-parameter family, the mean-field equation and its inversion in beta.

#include <cstddef>
#include <span>
#include <vector>

namespace mfpotts {

/// (q, z, beta) of the q-state model with interaction exponent z.
///
/// q is a real >= 2 here; modules that enumerate colors require an integer.
struct ModelParams {
    double q = 2.0;
    double z = 2.0;
    double beta = 0.0;

    /// Throws DomainError unless q >= 2, z >= 2, beta >= 0, all finite.
    void validate() const;
};

/// Returns q as an int, throwing DomainError if it is not integral.
int integer_q(double q);

/// A distribution over colors {1, ..., m}.
class ProbabilityVector {
public:
    /// Throws DomainError on negative weights or a sum off by more than 1e-12.
    explicit ProbabilityVector(std::vector<double> weights);

    static ProbabilityVector uniform(std::size_t m);

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const noexcept { return weights_; }

private:
    std::vector<double> weights_;
};

/// -(beta/z) * sum_i nu_i^z.
double hamiltonian(const ProbabilityVector& nu, const ModelParams& p);

/// I(nu | uniform on m symbols) = sum_i nu_i log(m nu_i), with 0 log 0 = 0.
double relative_entropy(const ProbabilityVector& nu, std::size_t m);

/// hamiltonian + relative_entropy.
double free_energy(const ProbabilityVector& nu, const ModelParams& p);

/// ((1+(q-1)u)/q, (1-u)/q, ..., (1-u)/q) for integer q and u in [0, 1).
ProbabilityVector embed(double u, int q);

/// Free energy restricted to the symmetric family, as a function of u in [0, 1].
double k(double u, const ModelParams& p);
double k_prime(double u, const ModelParams& p);
double k_double_prime(double u, const ModelParams& p);

/// Exponent Delta(u) of the mean-field equation.
double mf_delta(double u, const ModelParams& p);
/// Right-hand side (1 - e^Delta) / (1 + (q-1) e^Delta) of u = mf_rhs(u).
double mf_rhs(double u, const ModelParams& p);

/// Inverse temperature at which u in (0, 1) solves the mean-field equation.
///
/// Below u = 1e-8 a second-order series around the limit q^{z-1}/(z-1) is
/// used; above, u is capped at 1 - 1e-12.
double beta_of_u(double u, double q, double z);

/// d/du beta_of_u, for u in (0, 1).
double beta_of_u_derivative(double u, double q, double z);

/// g(x) = beta x^{z-1} - log(q x) on (0, 1].
double aux_g(double x, const ModelParams& p);
/// The unique minimizer (beta (z-1))^{-1/(z-1)} of aux_g; beta must be > 0.
double tilde_u(const ModelParams& p);

}  // namespace mfpotts
