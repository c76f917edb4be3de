#include "mfpotts/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mfpotts/errors.hpp"

namespace mfpotts {

namespace {

constexpr double kSeriesCutoff = 1e-8;
constexpr double kUpperCap = 1.0 - 1e-12;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_dimension(const ProbabilityVector& nu, double q) {
    if (q == std::round(q) && nu.size() != static_cast<std::size_t>(q)) {
        throw DomainError("probability vector has " + std::to_string(nu.size()) +
                          " entries but q = " + std::to_string(static_cast<int>(q)));
    }
}

}  // namespace

void ModelParams::validate() const {
    if (!std::isfinite(q) || !std::isfinite(z) || !std::isfinite(beta)) {
        throw DomainError("model parameters must be finite");
    }
    if (q < 2.0) throw DomainError("q must be >= 2, got " + std::to_string(q));
    if (z < 2.0) throw DomainError("z must be >= 2, got " + std::to_string(z));
    if (beta < 0.0) throw DomainError("beta must be >= 0, got " + std::to_string(beta));
}

int integer_q(double q) {
    if (!std::isfinite(q) || q != std::round(q) || q < 1.0 || q > 1e6) {
        throw DomainError("integer number of colors required, got q = " + std::to_string(q));
    }
    return static_cast<int>(q);
}

ProbabilityVector::ProbabilityVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw DomainError("probability vector must be nonempty");
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("probability weights must be >= 0");
    }
    const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("probability weights sum to " + std::to_string(total));
    }
}

ProbabilityVector ProbabilityVector::uniform(std::size_t m) {
    return ProbabilityVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

double hamiltonian(const ProbabilityVector& nu, const ModelParams& p) {
    check_dimension(nu, p.q);
    double s = 0.0;
    for (double w : nu.weights()) s += std::pow(w, p.z);
    return -p.beta / p.z * s;
}

double relative_entropy(const ProbabilityVector& nu, std::size_t m) {
    if (nu.size() != m) {
        throw DomainError("relative entropy: vector length " + std::to_string(nu.size()) +
                          " differs from m = " + std::to_string(m));
    }
    const double md = static_cast<double>(m);
    double s = 0.0;
    for (double w : nu.weights()) {
        if (w > 0.0) s += w * std::log(md * w);
    }
    return s;
}

double free_energy(const ProbabilityVector& nu, const ModelParams& p) {
    return hamiltonian(nu, p) + relative_entropy(nu, nu.size());
}

ProbabilityVector embed(double u, int q) {
    if (q < 2) throw DomainError("embed needs q >= 2");
    if (!(u >= 0.0 && u < 1.0)) throw DomainError("magnetization must lie in [0, 1)");
    const double qd = q;
    std::vector<double> w(static_cast<std::size_t>(q), (1.0 - u) / qd);
    // (1 + (q-1)u)/q, written so the entries sum to 1 exactly.
    w[0] = 1.0 - (qd - 1.0) * w[1];
    return ProbabilityVector(std::move(w));
}

double k(double u, const ModelParams& p) {
    const double q = p.q;
    const double a = 1.0 + (q - 1.0) * u;
    const double b = 1.0 - u;
    const double entropy = (xlogx(a) + (q - 1.0) * xlogx(b)) / q;
    const double energy = p.beta / p.z * std::pow(q, -p.z) *
                          (std::pow(a, p.z) + (q - 1.0) * std::pow(b, p.z));
    return entropy - energy;
}

double k_prime(double u, const ModelParams& p) {
    const double q = p.q;
    const double m = p.z - 1.0;
    const double a = 1.0 + (q - 1.0) * u;
    const double b = 1.0 - u;
    const double energy = -(q - 1.0) / std::pow(q, p.z) * p.beta * (std::pow(a, m) - std::pow(b, m));
    const double entropy = (q - 1.0) / q * (std::log(a) - std::log(b));
    return energy + entropy;
}

double k_double_prime(double u, const ModelParams& p) {
    const double q = p.q;
    const double m = p.z - 1.0;
    const double a = 1.0 + (q - 1.0) * u;
    const double b = 1.0 - u;
    const double energy = -(q - 1.0) / std::pow(q, p.z) * p.beta * m *
                          ((q - 1.0) * std::pow(a, m - 1.0) + std::pow(b, m - 1.0));
    return energy + (q - 1.0) / (a * b);
}

double mf_delta(double u, const ModelParams& p) {
    const double q = p.q;
    const double m = p.z - 1.0;
    // a^m - b^m through expm1 keeps relative accuracy for small u.
    const double diff = std::expm1(m * std::log1p((q - 1.0) * u)) - std::expm1(m * std::log1p(-u));
    return -p.beta / std::pow(q, m) * diff;
}

double mf_rhs(double u, const ModelParams& p) {
    const double delta = mf_delta(u, p);
    const double e = std::exp(delta);
    return -std::expm1(delta) / (1.0 + (p.q - 1.0) * e);
}

double beta_of_u(double u, double q, double z) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("beta_of_u needs u in (0, 1)");
    const double m = z - 1.0;
    const double limit = std::pow(q, m) / m;
    if (u < kSeriesCutoff) {
        const double w = q * q - 3.0 * q + 3.0;
        const double c1 = -(q - 2.0) / 2.0;
        const double c2 = w / 3.0;
        const double d1 = (m - 1.0) * (q - 2.0) / 2.0;
        const double d2 = (m - 1.0) * (m - 2.0) * w / 6.0;
        const double first = c1 - d1;
        const double second = c2 - d2 - d1 * first;
        return limit * (1.0 + first * u + second * u * u);
    }
    u = std::min(u, kUpperCap);
    const double num = std::log1p((q - 1.0) * u) - std::log1p(-u);
    const double den = std::expm1(m * std::log1p((q - 1.0) * u)) - std::expm1(m * std::log1p(-u));
    return std::pow(q, m) * num / den;
}

double beta_of_u_derivative(double u, double q, double z) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("beta_of_u_derivative needs u in (0, 1)");
    u = std::min(u, kUpperCap);
    const double m = z - 1.0;
    const double a = 1.0 + (q - 1.0) * u;
    const double b = 1.0 - u;
    const double num = std::log1p((q - 1.0) * u) - std::log1p(-u);
    const double den = std::expm1(m * std::log1p((q - 1.0) * u)) - std::expm1(m * std::log1p(-u));
    const double dnum = q / (a * b);
    const double dden = m * ((q - 1.0) * std::pow(a, m - 1.0) + std::pow(b, m - 1.0));
    return std::pow(q, m) * (dnum * den - num * dden) / (den * den);
}

double aux_g(double x, const ModelParams& p) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("aux_g needs x in (0, 1]");
    return p.beta * std::pow(x, p.z - 1.0) - std::log(p.q * x);
}

double tilde_u(const ModelParams& p) {
    if (!(p.beta > 0.0)) throw DomainError("tilde_u is undefined for beta = 0");
    return std::pow(p.beta * (p.z - 1.0), -1.0 / (p.z - 1.0));
}

}  // namespace mfpotts
