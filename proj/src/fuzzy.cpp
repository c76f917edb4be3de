#include "mfpotts/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <string>
#include <utility>

#include "mfpotts/critical.hpp"
#include "mfpotts/errors.hpp"
#include "mfpotts/model.hpp"

namespace mfpotts {

namespace {

constexpr double kDiscontinuityBand = 1e-9;

class CriticalBetaCache {
public:
    double get(int r, double z) {
        const std::pair<int, long long> key{r, std::llround(z * 1e12)};
        {
            std::shared_lock lock(mutex_);
            if (auto it = values_.find(key); it != values_.end()) return it->second;
        }
        const double value = critical_temperatures(r, z).beta_c;
        std::unique_lock lock(mutex_);
        values_.emplace(key, value);
        return value;
    }

private:
    std::shared_mutex mutex_;
    std::map<std::pair<int, long long>, double> values_;
};

CriticalBetaCache& cache() {
    static CriticalBetaCache instance;
    return instance;
}

double log_sum_exp(double a, double b) {
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

/// log C(x, r); throws AtDiscontinuity tagged with class_index.
double log_c_factor(double x, int r, double z, std::size_t class_index) {
    if (x < 0.0 || r < 1 || z < 2.0) throw DomainError("c_factor needs x >= 0, r >= 1, z >= 2");
    if (r == 1) return x;
    const double bc = class_critical_beta(r, z);
    if (std::abs(x - bc) <= kDiscontinuityBand) throw AtDiscontinuity(class_index, x, bc);
    const double rd = r;
    if (x < bc) return std::log(rd) + x / std::pow(rd, z - 1.0);
    const double u = largest_mf_solution({rd, z, x});
    const double minor = std::log(rd - 1.0) + x * std::pow((1.0 - u) / rd, z - 1.0);
    const double major = x * std::pow(((rd - 1.0) * u + 1.0) / rd, z - 1.0);
    return log_sum_exp(minor, major);
}

}  // namespace

SpinPartition::SpinPartition(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw DomainError("spin partition needs at least one class");
    for (int r : sizes_) {
        if (r < 1) throw DomainError("spin partition class sizes must be >= 1");
    }
    q_ = std::accumulate(sizes_.begin(), sizes_.end(), 0);
}

void SpinPartition::require_proper() const {
    if (classes() < 2 || static_cast<int>(classes()) >= q_) {
        throw DomainError("fuzzy partition needs 1 < s < q, got s = " + std::to_string(classes()) +
                          ", q = " + std::to_string(q_));
    }
}

std::string_view to_string(GibbsRegime regime) {
    switch (regime) {
        case GibbsRegime::AllSmallClasses: return "all_small_classes";
        case GibbsRegime::ZAboveFour: return "z_above_four";
        case GibbsRegime::ZTwoToFour: return "z_two_to_four";
    }
    return "?";
}

double class_critical_beta(int r, double z) {
    if (r < 1) throw DomainError("class size must be >= 1");
    if (r == 1) return std::numeric_limits<double>::infinity();
    return cache().get(r, z);
}

double c_factor(double x, int r, double z) { return std::exp(log_c_factor(x, r, z, 0)); }

std::vector<double> q_infinity_row(std::span<const double> nu, double beta, double z,
                                   const SpinPartition& partition) {
    if (nu.size() != partition.classes()) {
        throw DomainError("conditioning distribution has " + std::to_string(nu.size()) +
                          " entries for " + std::to_string(partition.classes()) + " classes");
    }
    const ProbabilityVector checked(std::vector<double>(nu.begin(), nu.end()));
    if (beta < 0.0 || z < 2.0) throw DomainError("q_infinity needs beta >= 0 and z >= 2");

    std::vector<double> logs(nu.size());
    for (std::size_t l = 0; l < nu.size(); ++l) {
        logs[l] = log_c_factor(beta * std::pow(checked[l], z - 1.0), partition[l], z, l);
    }
    const double top = *std::max_element(logs.begin(), logs.end());
    double total = 0.0;
    for (double& v : logs) {
        v = std::exp(v - top);
        total += v;
    }
    for (double& v : logs) v /= total;
    return logs;
}

double q_infinity(std::size_t k, std::span<const double> nu, double beta, double z,
                  const SpinPartition& partition) {
    if (k >= partition.classes()) throw DomainError("class index out of range");
    return q_infinity_row(nu, beta, z, partition)[k];
}

std::optional<int> r_hash(const SpinPartition& partition) {
    std::optional<int> best;
    for (int r : partition.sizes()) {
        if (r >= 2 && (!best || r < *best)) best = r;
    }
    return best;
}

std::optional<int> r_star(const SpinPartition& partition, double z) {
    const int lower = z > 4.0 ? 2 : 3;
    std::optional<int> best;
    for (int r : partition.sizes()) {
        if (r >= lower && (!best || r < *best)) best = r;
    }
    return best;
}

GibbsVerdict classify(double beta, int q, double z, const SpinPartition& partition) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and >= 0");
    if (!(z >= 2.0) || !std::isfinite(z)) throw DomainError("z must be finite and >= 2");
    if (partition.q() != q) {
        throw DomainError("partition sizes sum to " + std::to_string(partition.q()) +
                          ", expected q = " + std::to_string(q));
    }
    partition.require_proper();

    GibbsVerdict verdict;
    verdict.inherited_quadratic_case = (z == 2.0);
    const bool high_exponent = z > 4.0;
    if (high_exponent) {
        verdict.regime = GibbsRegime::ZAboveFour;
        verdict.governing_class_size = r_hash(partition);
    } else {
        verdict.governing_class_size = r_star(partition, z);
        verdict.regime = verdict.governing_class_size ? GibbsRegime::ZTwoToFour
                                                      : GibbsRegime::AllSmallClasses;
    }
    if (!verdict.governing_class_size) {
        verdict.gibbs_for_all_beta = true;
        return verdict;
    }
    verdict.threshold_beta = class_critical_beta(*verdict.governing_class_size, z);
    verdict.non_gibbs = beta >= *verdict.threshold_beta;

    const int lower = high_exponent ? 2 : 3;
    if (beta > 0.0) {
        for (std::size_t l = 0; l < partition.classes(); ++l) {
            if (partition[l] < lower) continue;
            const double ratio = class_critical_beta(partition[l], z) / beta;
            if (ratio <= 1.0) verdict.discontinuities.push_back({l, std::pow(ratio, 1.0 / (z - 1.0))});
        }
    }
    return verdict;
}

}  // namespace mfpotts
