#include "mfpotts/critical.hpp"

#include <cmath>
#include <vector>

#include "mfpotts/errors.hpp"

namespace mfpotts {

namespace {

constexpr double kUpperCap = 1.0 - 1e-12;

/// Bisection for a sign change of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
template <class F>
double bisect(F&& f, double lo, double hi, double tol) {
    const bool lo_negative = f(lo) < 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if ((f(mid) < 0.0) == lo_negative) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// beta_of_u extended continuously to u = 0.
double beta_at(double u, double q, double z) {
    return u > 0.0 ? beta_of_u(u, q, z) : beta_one(q, z);
}

std::vector<double> minimum_search_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 100; ++i) grid.push_back(1e-7 * std::pow(1e5, i / 100.0));
    for (int i = 0; i < 990; ++i) grid.push_back(0.01 + 0.001 * i);
    return grid;
}

/// Positive solutions given the already located minimum of beta_of_u.
std::vector<double> positive_roots_first_order(double beta, double q, double z, const BetaMinimum& mn,
                                               const SolverTolerances& tol) {
    if (beta < mn.beta) return {};
    if (beta == mn.beta) return {mn.u};
    std::vector<double> roots;
    const double b1 = beta_one(q, z);
    auto shifted = [&](double u) { return beta_at(u, q, z) - beta; };
    if (beta < b1) roots.push_back(bisect(shifted, 0.0, mn.u, tol.u));
    if (shifted(kUpperCap) <= 0.0) {
        roots.push_back(kUpperCap);
    } else {
        roots.push_back(bisect(shifted, mn.u, kUpperCap, tol.u));
    }
    return roots;
}

double largest_root_first_order(double beta, double q, double z, const BetaMinimum& mn,
                                const SolverTolerances& tol) {
    const auto roots = positive_roots_first_order(beta, q, z, mn, tol);
    return roots.empty() ? 0.0 : roots.back();
}

}  // namespace

std::string_view to_string(TransitionOrder order) {
    return order == TransitionOrder::First ? "first" : "second";
}

std::string_view to_string(PointKind kind) {
    switch (kind) {
        case PointKind::Min: return "min";
        case PointKind::Max: return "max";
        case PointKind::Saddle: return "saddle";
    }
    return "?";
}

std::string_view to_string(LimitKind kind) {
    switch (kind) {
        case LimitKind::Equidistribution: return "equidistribution";
        case LimitKind::SymmetricMixture: return "symmetric_mixture";
        case LimitKind::Critical: return "critical";
    }
    return "?";
}

double beta_one(double q, double z) { return std::pow(q, z - 1.0) / (z - 1.0); }

double spinodal_lower(double q, double z) { return beta_one(q, z); }

TransitionOrder transition_order(double q, double z) {
    return (q == 2.0 && z >= 2.0 && z <= 4.0) ? TransitionOrder::Second : TransitionOrder::First;
}

BetaMinimum beta_of_u_minimum(double q, double z, const SolverTolerances& tol) {
    ModelParams{q, z, 0.0}.validate();
    if (transition_order(q, z) == TransitionOrder::Second) {
        throw DomainError("beta_of_u has no interior minimum for q = 2, 2 <= z <= 4");
    }
    static const std::vector<double> grid = minimum_search_grid();
    std::size_t best = 0;
    double best_beta = beta_of_u(grid[0], q, z);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double b = beta_of_u(grid[i], q, z);
        if (b < best_beta) {
            best = i;
            best_beta = b;
        }
    }
    double lo = best > 0 ? grid[best - 1] : 1e-12;
    double hi = best + 1 < grid.size() ? grid[best + 1] : kUpperCap;

    auto slope = [&](double u) { return beta_of_u_derivative(u, q, z); };
    double u0 = 0.0;
    if (slope(lo) < 0.0 && slope(hi) > 0.0) {
        u0 = bisect(slope, lo, hi, tol.u);
    } else {
        // Derivative too flat to resolve its sign: golden-section on beta itself.
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = lo, b = hi;
        while (b - a > tol.u) {
            const double c = b - inv_phi * (b - a);
            const double d = a + inv_phi * (b - a);
            if (beta_of_u(c, q, z) < beta_of_u(d, q, z)) {
                b = d;
            } else {
                a = c;
            }
        }
        u0 = 0.5 * (a + b);
    }
    return {u0, beta_of_u(u0, q, z)};
}

double beta_zero(double q, double z, const SolverTolerances& tol) {
    return beta_of_u_minimum(q, z, tol).beta;
}

MfSolutionSet mf_solutions(const ModelParams& p, const SolverTolerances& tol) {
    p.validate();
    MfSolutionSet set{{0.0}};
    if (p.beta == 0.0) return set;
    if (transition_order(p.q, p.z) == TransitionOrder::Second) {
        if (p.beta <= beta_one(p.q, p.z)) return set;
        auto shifted = [&](double u) { return beta_at(u, p.q, p.z) - p.beta; };
        set.solutions.push_back(shifted(kUpperCap) <= 0.0 ? kUpperCap
                                                          : bisect(shifted, 0.0, kUpperCap, tol.u));
        return set;
    }
    const BetaMinimum mn = beta_of_u_minimum(p.q, p.z, tol);
    for (double u : positive_roots_first_order(p.beta, p.q, p.z, mn, tol)) set.solutions.push_back(u);
    return set;
}

double largest_mf_solution(const ModelParams& p, const SolverTolerances& tol) {
    return mf_solutions(p, tol).largest();
}

CriticalTemperatures critical_temperatures(double q, double z, const SolverTolerances& tol) {
    ModelParams{q, z, 0.0}.validate();
    CriticalTemperatures out;
    out.beta_one = beta_one(q, z);
    out.order = transition_order(q, z);
    if (out.order == TransitionOrder::Second) {
        out.beta_c = out.beta_one;
        return out;
    }
    const BetaMinimum mn = beta_of_u_minimum(q, z, tol);
    out.beta_zero = mn.beta;

    // phi decreases in beta: the free energy at u2 falls faster than at 0.
    auto phi = [&](double beta) {
        const ModelParams p{q, z, beta};
        const double u2 = largest_root_first_order(beta, q, z, mn, tol);
        return k(u2, p) - k(0.0, p);
    };
    double lo = mn.beta;
    double hi = out.beta_one;
    if (phi(hi) >= 0.0) {
        out.beta_c = hi;
        return out;
    }
    while (hi - lo > tol.beta) {
        const double mid = 0.5 * (lo + hi);
        if (phi(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.beta_c = 0.5 * (lo + hi);
    return out;
}

LandscapeProfile landscape(const ModelParams& p, const SolverTolerances& tol) {
    const MfSolutionSet set = mf_solutions(p, tol);
    LandscapeProfile profile;
    for (double u : set.solutions) {
        const double curvature = k_double_prime(u, p);
        PointKind kind = PointKind::Saddle;
        if (curvature > tol.saddle) {
            kind = PointKind::Min;
        } else if (curvature < -tol.saddle) {
            kind = PointKind::Max;
        }
        profile.points.push_back({u, k(u, p), kind});
    }
    const double k0 = profile.points.front().k;
    const StationaryPoint* best = &profile.points.front();
    for (const auto& pt : profile.points) {
        if (pt.k < best->k) best = &pt;
    }
    profile.global_min_u = best->u;
    if (best->u > 0.0 && std::abs(best->k - k0) < 1e-6) {
        const CriticalTemperatures ct = critical_temperatures(p.q, p.z, tol);
        if (std::abs(p.beta - ct.beta_c) <= tol.critical_band) profile.global_min_u = 0.0;
    }
    return profile;
}

LimitDescription limit_distribution(const ModelParams& p, const SolverTolerances& tol) {
    p.validate();
    const CriticalTemperatures ct = critical_temperatures(p.q, p.z, tol);
    if (std::abs(p.beta - ct.beta_c) <= tol.critical_band) return {LimitKind::Critical, 0.0};
    if (p.beta < ct.beta_c) return {LimitKind::Equidistribution, 0.0};
    return {LimitKind::SymmetricMixture, largest_mf_solution(p, tol)};
}

}  // namespace mfpotts
