#pragma once

// Solutions of the mean-field equation, the temperatures beta_0 <= beta_c <=
// beta_1 and the shape of the one-dimensional free-energy landscape.

#include <optional>
#include <string_view>
#include <vector>

#include "mfpotts/model.hpp"

namespace mfpotts {

enum class TransitionOrder { First, Second };

std::string_view to_string(TransitionOrder order);

struct SolverTolerances {
    double u = 1e-12;             // root and argmin width in u
    double beta = 1e-10;          // critical temperature bisection width
    double saddle = 1e-9;         // |k''| below this marks a saddle
    double critical_band = 1e-9;  // |beta - beta_c| below this is "at criticality"
};

struct CriticalTemperatures {
    std::optional<double> beta_zero;  // absent for a second-order transition
    double beta_one = 0.0;
    double beta_c = 0.0;
    TransitionOrder order = TransitionOrder::Second;
};

/// Solutions of the mean-field equation at fixed (q, z, beta), ascending.
/// Always starts with 0 and has at most two positive entries.
struct MfSolutionSet {
    std::vector<double> solutions;

    double largest() const { return solutions.back(); }
    std::size_t positive_count() const { return solutions.size() - 1; }
};

enum class PointKind { Min, Max, Saddle };

std::string_view to_string(PointKind kind);

struct StationaryPoint {
    double u = 0.0;
    double k = 0.0;
    PointKind kind = PointKind::Min;
};

struct LandscapeProfile {
    std::vector<StationaryPoint> points;  // ascending in u, points[0].u == 0
    double global_min_u = 0.0;
};

enum class LimitKind { Equidistribution, SymmetricMixture, Critical };

std::string_view to_string(LimitKind kind);

/// Weak limit of the empirical distribution. For SymmetricMixture, u_value is
/// the magnetization of each of the q permuted mixture components.
struct LimitDescription {
    LimitKind kind = LimitKind::Equidistribution;
    double u_value = 0.0;
};

/// Location and value of the interior minimum of beta_of_u.
struct BetaMinimum {
    double u = 0.0;
    double beta = 0.0;
};

/// q^{z-1} / (z-1): the limit of beta_of_u at u -> 0.
double beta_one(double q, double z);

/// The left bifurcation line, where k''(0) = 0. Same closed form as beta_one.
double spinodal_lower(double q, double z);

/// Second iff q == 2 (exactly) and 2 <= z <= 4.
TransitionOrder transition_order(double q, double z);

/// Interior minimum of beta_of_u; DomainError in the second-order region.
BetaMinimum beta_of_u_minimum(double q, double z, const SolverTolerances& tol = {});

double beta_zero(double q, double z, const SolverTolerances& tol = {});

MfSolutionSet mf_solutions(const ModelParams& p, const SolverTolerances& tol = {});

/// Largest solution of the mean-field equation (0 if there is none positive).
double largest_mf_solution(const ModelParams& p, const SolverTolerances& tol = {});

/// beta_0, beta_1, beta_c and the order of the transition for one (q, z).
CriticalTemperatures critical_temperatures(double q, double z, const SolverTolerances& tol = {});

LandscapeProfile landscape(const ModelParams& p, const SolverTolerances& tol = {});

LimitDescription limit_distribution(const ModelParams& p, const SolverTolerances& tol = {});

}  // namespace mfpotts
