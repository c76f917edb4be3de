#include "mfpotts/finite_volume.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mfpotts/errors.hpp"

namespace mfpotts {

namespace {

void require_cap(int n, int parts, std::uint64_t cap) {
    const std::uint64_t count = composition_count(n, parts);
    if (count > cap) {
        throw CapExceeded(std::to_string(count) + " type classes exceed the cap of " + std::to_string(cap));
    }
}

/// Running log-sum-exp accumulator.
class LogSum {
public:
    void add(double v) {
        if (v == -std::numeric_limits<double>::infinity()) return;
        if (v > max_) {
            sum_ = sum_ * std::exp(max_ - v) + 1.0;
            max_ = v;
        } else {
            sum_ += std::exp(v - max_);
        }
    }
    double value() const { return max_ + std::log(sum_); }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

/// log Boltzmann weight (beta/z) N^{1-z} sum_i n_i^z of a count vector.
double log_energy_weight(std::span<const int> counts, double beta, double z, int N) {
    double s = 0.0;
    for (int n : counts) s += std::pow(static_cast<double>(n), z);
    return beta / z * std::pow(static_cast<double>(N), 1.0 - z) * s;
}

/// log of the partition sum over colorings of M sites with r colors, energies
/// measured with the global system size N.
double log_class_sum(int M, int r, double beta, double z, int N, std::uint64_t cap) {
    if (M == 0) return 0.0;
    require_cap(M, r, cap);
    LogSum acc;
    for_each_composition(M, r, [&](std::span<const int> c) {
        acc.add(log_multinomial(c) + log_energy_weight(c, beta, z, N));
    });
    return acc.value();
}

std::vector<double> normalize_logs(std::vector<double> logs) {
    const double top = *std::max_element(logs.begin(), logs.end());
    double total = 0.0;
    for (double& v : logs) {
        v = std::exp(v - top);
        total += v;
    }
    for (double& v : logs) v /= total;
    return logs;
}

void check_class_counts(std::span<const int> class_counts, const SpinPartition& partition) {
    if (class_counts.size() != partition.classes()) {
        throw DomainError("class counts have " + std::to_string(class_counts.size()) + " entries for " +
                          std::to_string(partition.classes()) + " classes");
    }
    for (int c : class_counts) {
        if (c < 0) throw DomainError("class counts must be nonnegative");
    }
}

}  // namespace

void TypeOccupancy::validate() const {
    if (N < 1) throw DomainError("N must be positive");
    long long total = 0;
    for (int c : counts) {
        if (c < 0) throw DomainError("occupancy counts must be nonnegative");
        total += c;
    }
    if (total != N) throw DomainError("occupancy counts sum to " + std::to_string(total) + ", not N");
}

std::uint64_t composition_count(int n, int parts) {
    if (parts <= 0 || n < 0) return 0;
    unsigned __int128 result = 1;
    const auto saturated = std::numeric_limits<std::uint64_t>::max();
    for (int i = 1; i < parts; ++i) {
        result = result * static_cast<unsigned>(n + i) / static_cast<unsigned>(i);
        if (result > saturated) return saturated;
    }
    return static_cast<std::uint64_t>(result);
}

void for_each_composition(int n, int parts, const std::function<void(std::span<const int>)>& visit) {
    if (parts <= 0 || n < 0) return;
    std::vector<int> c(static_cast<std::size_t>(parts), 0);
    const std::function<void(int, int)> fill = [&](int idx, int left) {
        if (idx == parts - 1) {
            c[static_cast<std::size_t>(idx)] = left;
            visit(c);
            return;
        }
        for (int v = left; v >= 0; --v) {
            c[static_cast<std::size_t>(idx)] = v;
            fill(idx + 1, left - v);
        }
    };
    fill(0, n);
}

double log_multinomial(std::span<const int> counts) {
    int total = 0;
    double denom = 0.0;
    for (int c : counts) {
        total += c;
        denom += std::lgamma(c + 1.0);
    }
    return std::lgamma(total + 1.0) - denom;
}

double TypeDistribution::probability(std::span<const int> counts) const {
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (std::equal(types[i].begin(), types[i].end(), counts.begin(), counts.end())) return probabilities[i];
    }
    return 0.0;
}

double TypeDistribution::mean_fraction(int color) const {
    double m = 0.0;
    for (std::size_t i = 0; i < types.size(); ++i) {
        m += probabilities[i] * types[i][static_cast<std::size_t>(color)];
    }
    return m / N;
}

TypeDistribution exact_type_distribution(int N, const ModelParams& p, std::uint64_t cap) {
    p.validate();
    if (N < 1) throw DomainError("N must be positive");
    const int q = integer_q(p.q);
    require_cap(N, q, cap);

    TypeDistribution dist;
    dist.N = N;
    dist.q = q;
    std::vector<double> logs;
    for_each_composition(N, q, [&](std::span<const int> c) {
        dist.types.emplace_back(c.begin(), c.end());
        logs.push_back(log_multinomial(c) + log_energy_weight(c, p.beta, p.z, N));
    });
    dist.probabilities = normalize_logs(std::move(logs));
    return dist;
}

double partition_expectation(double beta, int r, int M, double z, std::uint64_t cap) {
    if (r < 1 || M < 0) throw DomainError("partition_expectation needs r >= 1, M >= 0");
    if (!(beta >= 0.0) || !(z >= 2.0)) throw DomainError("partition_expectation needs beta >= 0, z >= 2");
    if (M == 0) return 1.0;
    require_cap(M, r, cap);
    LogSum weighted;
    LogSum plain;
    for_each_composition(M, r, [&](std::span<const int> c) {
        const double w = log_multinomial(c) + log_energy_weight(c, beta, z, M);
        plain.add(w);
        weighted.add(w + beta * std::pow(static_cast<double>(c[0]) / M, z - 1.0));
    });
    return std::exp(weighted.value() - plain.value());
}

std::vector<int> conditioning_counts(std::span<const double> nu, int N) {
    if (N < 1) throw DomainError("N must be positive");
    const ProbabilityVector checked(std::vector<double>(nu.begin(), nu.end()));
    const int total = N - 1;
    std::vector<int> counts(nu.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    int used = 0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        const double exact = checked[i] * total;
        counts[i] = static_cast<int>(std::floor(exact));
        used += counts[i];
        remainders.emplace_back(exact - counts[i], i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t j = 0; used < total; ++j, ++used) ++counts[remainders[j % remainders.size()].second];
    return counts;
}

std::vector<double> qn_kernel_row(std::span<const int> class_counts, int N, double beta, double z,
                                  const SpinPartition& partition, std::uint64_t cap) {
    check_class_counts(class_counts, partition);
    if (std::accumulate(class_counts.begin(), class_counts.end(), 0) != N - 1) {
        throw DomainError("class counts must sum to N - 1");
    }
    std::vector<double> logs;
    for (std::size_t l = 0; l < partition.classes(); ++l) {
        const int M = class_counts[l];
        const double beta_l = beta * std::pow(static_cast<double>(M) / N, z - 1.0);
        logs.push_back(std::log(static_cast<double>(partition[l])) +
                       std::log(partition_expectation(beta_l, partition[l], M, z, cap)));
    }
    return normalize_logs(std::move(logs));
}

double qn_kernel(std::size_t k, std::span<const int> class_counts, int N, double beta, double z,
                 const SpinPartition& partition, std::uint64_t cap) {
    if (k >= partition.classes()) throw DomainError("class index out of range");
    return qn_kernel_row(class_counts, N, beta, z, partition, cap)[k];
}

std::vector<double> qn_exact_row(std::span<const int> class_counts, double beta, double z,
                                 const SpinPartition& partition, std::uint64_t cap) {
    check_class_counts(class_counts, partition);
    const int N = std::accumulate(class_counts.begin(), class_counts.end(), 0) + 1;
    // Given the fuzzy configuration, colors in different classes decouple, so the
    // weight of placing the site in class l is Z_l(m_l + 1) / Z_l(m_l).
    std::vector<double> logs;
    for (std::size_t l = 0; l < partition.classes(); ++l) {
        const int m = class_counts[l];
        logs.push_back(log_class_sum(m + 1, partition[l], beta, z, N, cap) -
                       log_class_sum(m, partition[l], beta, z, N, cap));
    }
    return normalize_logs(std::move(logs));
}

double qn_exact(std::size_t k, std::span<const int> class_counts, double beta, double z,
                const SpinPartition& partition, std::uint64_t cap) {
    if (k >= partition.classes()) throw DomainError("class index out of range");
    return qn_exact_row(class_counts, beta, z, partition, cap)[k];
}

HeatBathSampler::HeatBathSampler(int N, const ModelParams& p, RngSeed seed, std::uint64_t chain)
    : rng_(make_stream(seed, chain)) {
    p.validate();
    if (N < 1) throw DomainError("N must be positive");
    const int q = integer_q(p.q);
    spins_.resize(static_cast<std::size_t>(N));
    counts_.assign(static_cast<std::size_t>(q), 0);
    for (int& s : spins_) {
        s = uniform_below(rng_, q);
        ++counts_[static_cast<std::size_t>(s)];
    }
    const double scale = p.beta / p.z * std::pow(static_cast<double>(N), 1.0 - p.z);
    gain_.resize(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        gain_[static_cast<std::size_t>(n)] = scale * (std::pow(n + 1.0, p.z) - std::pow(static_cast<double>(n), p.z));
    }
    scratch_.resize(static_cast<std::size_t>(q));
}

void HeatBathSampler::sweep() {
    const std::size_t q = counts_.size();
    for (int& s : spins_) {
        --counts_[static_cast<std::size_t>(s)];
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < q; ++a) {
            scratch_[a] = gain_[static_cast<std::size_t>(counts_[a])];
            top = std::max(top, scratch_[a]);
        }
        double total = 0.0;
        for (std::size_t a = 0; a < q; ++a) {
            scratch_[a] = std::exp(scratch_[a] - top);
            total += scratch_[a];
        }
        double draw = uniform01(rng_) * total;
        std::size_t pick = q - 1;
        for (std::size_t a = 0; a < q; ++a) {
            draw -= scratch_[a];
            if (draw < 0.0) {
                pick = a;
                break;
            }
        }
        s = static_cast<int>(pick);
        ++counts_[pick];
    }
}

void run_heat_bath(int N, const ModelParams& p, RngSeed seed, int sweeps,
                   const std::function<void(int, std::span<const int>)>& record) {
    HeatBathSampler sampler(N, p, seed);
    for (int s = 0; s < sweeps; ++s) {
        sampler.sweep();
        record(s, sampler.counts());
    }
}

}  // namespace mfpotts
