#include "mfpotts/random_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/pending/disjoint_sets.hpp>

#include "mfpotts/errors.hpp"
#include "mfpotts/finite_volume.hpp"
#include "mfpotts/parallel.hpp"

namespace mfpotts {

namespace {

using DisjointSets = boost::disjoint_sets_with_storage<>;

ComponentReport components_of(int N, const std::vector<std::vector<int>>& open_set,
                              std::vector<int>* root_of = nullptr) {
    DisjointSets sets(static_cast<std::size_t>(N));
    for (int v = 0; v < N; ++v) sets.make_set(v);
    for (const auto& clique : open_set) {
        for (std::size_t i = 1; i < clique.size(); ++i) sets.union_set(clique[0], clique[i]);
    }
    std::vector<int> size_by_root(static_cast<std::size_t>(N), 0);
    if (root_of) root_of->resize(static_cast<std::size_t>(N));
    for (int v = 0; v < N; ++v) {
        const int r = static_cast<int>(sets.find_set(v));
        ++size_by_root[static_cast<std::size_t>(r)];
        if (root_of) (*root_of)[static_cast<std::size_t>(v)] = r;
    }
    ComponentReport report;
    for (int s : size_by_root) {
        if (s > 0) report.component_sizes.push_back(s);
    }
    std::sort(report.component_sizes.begin(), report.component_sizes.end(), std::greater<>());
    report.k_omega = static_cast<int>(report.component_sizes.size());
    return report;
}

std::vector<std::vector<int>> all_cliques(int N, int z) {
    std::vector<int> vertices(static_cast<std::size_t>(N));
    std::iota(vertices.begin(), vertices.end(), 0);
    std::vector<std::vector<int>> out;
    for_each_clique(vertices, z, [&](std::span<const int> c) { out.emplace_back(c.begin(), c.end()); });
    return out;
}

void require_clique_params(int N, int z, int q) {
    if (N < 1) throw DomainError("N must be positive");
    if (z < 2) throw DomainError("clique size z must be an integer >= 2");
    if (q < 1) throw DomainError("q must be a positive integer");
}

/// log of p^open (1-p)^closed with 0 log 0 = 0.
double log_bond_weight(int open, int closed, double p) {
    double w = 0.0;
    if (open > 0) w += open * std::log(p);
    if (closed > 0) w += closed * std::log1p(-p);
    return w;
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Mean with a batch-means standard error (20 batches when there is enough data).
MeanStderr batch_mean(const std::vector<double>& xs) {
    MeanStderr out;
    if (xs.empty()) return out;
    const double n = static_cast<double>(xs.size());
    out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() < 2) return out;
    const std::size_t batches = xs.size() >= 40 ? 20 : xs.size();
    const std::size_t per = xs.size() / batches;
    std::vector<double> means;
    for (std::size_t b = 0; b < batches; ++b) {
        double s = 0.0;
        for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += xs[i];
        means.push_back(s / static_cast<double>(per));
    }
    const double bm = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(batches);
    double var = 0.0;
    for (double m : means) var += (m - bm) * (m - bm);
    var /= static_cast<double>(batches - 1);
    out.stderr_ = std::sqrt(var / static_cast<double>(batches));
    return out;
}

}  // namespace

void CliqueConfig::validate() const {
    if (z < 2) throw DomainError("clique size must be >= 2");
    if (N < 0) throw DomainError("N must be nonnegative");
    for (const auto& clique : open_set) {
        if (static_cast<int>(clique.size()) != z) throw DomainError("clique with wrong number of vertices");
        std::vector<int> sorted = clique;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw DomainError("clique with repeated vertex");
        }
        if (sorted.front() < 0 || sorted.back() >= N) throw DomainError("clique vertex out of range");
    }
}

double ComponentReport::squared_fraction_sum() const {
    const double n = std::accumulate(component_sizes.begin(), component_sizes.end(), 0.0);
    double s = 0.0;
    for (int c : component_sizes) s += (c / n) * (c / n);
    return s;
}

double ComponentReport::max_fraction() const {
    if (component_sizes.empty()) return 0.0;
    const double n = std::accumulate(component_sizes.begin(), component_sizes.end(), 0.0);
    return component_sizes.front() / n;
}

ComponentReport rcm_components(const CliqueConfig& omega) {
    omega.validate();
    return components_of(omega.N, omega.open_set);
}

std::uint64_t clique_count(int N, int z) {
    if (z < 0 || N < 0 || z > N) return 0;
    unsigned __int128 result = 1;
    const auto saturated = std::numeric_limits<std::uint64_t>::max();
    for (int i = 1; i <= z; ++i) {
        result = result * static_cast<unsigned>(N - z + i) / static_cast<unsigned>(i);
        if (result > saturated) return saturated;
    }
    return static_cast<std::uint64_t>(result);
}

void for_each_clique(std::span<const int> vertices, int z, const std::function<void(std::span<const int>)>& visit) {
    const int n = static_cast<int>(vertices.size());
    if (z < 1 || z > n) return;
    std::vector<int> idx(static_cast<std::size_t>(z));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> chosen(static_cast<std::size_t>(z));
    while (true) {
        for (int i = 0; i < z; ++i) chosen[static_cast<std::size_t>(i)] = vertices[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        visit(chosen);
        int i = z - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - z + i) --i;
        if (i < 0) return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < z; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

double monochromatic_cliques(std::span<const int> counts, int z) {
    double total = 0.0;
    for (int n : counts) total += static_cast<double>(clique_count(n, z));
    return total;
}

double clique_coupling(double beta, int N, int z) {
    return beta * std::tgamma(static_cast<double>(z)) / std::pow(static_cast<double>(N), z - 1.0);
}

EdwardsSokalSampler::EdwardsSokalSampler(int N, int z, int q, double p_open, RngSeed seed,
                                         std::uint64_t chain, std::uint64_t cap)
    : q_(q), p_open_(p_open), rng_(make_stream(seed, chain)) {
    require_clique_params(N, z, q);
    if (!(p_open >= 0.0 && p_open <= 1.0)) throw DomainError("p_open must lie in [0, 1]");
    const std::uint64_t cliques = clique_count(N, z);
    if (cliques > cap) {
        throw CapExceeded(std::to_string(cliques) + " cliques exceed the cap of " + std::to_string(cap));
    }
    spins_.resize(static_cast<std::size_t>(N));
    for (int& s : spins_) s = uniform_below(rng_, q_);
    omega_.z = z;
    omega_.N = N;
    report_ = components_of(N, omega_.open_set);
}

void EdwardsSokalSampler::step() {
    const int N = omega_.N;
    omega_.open_set.clear();
    if (p_open_ > 0.0) {
        std::vector<std::vector<int>> by_color(static_cast<std::size_t>(q_));
        for (int v = 0; v < N; ++v) by_color[static_cast<std::size_t>(spins_[static_cast<std::size_t>(v)])].push_back(v);
        for (const auto& members : by_color) {
            for_each_clique(members, omega_.z, [&](std::span<const int> c) {
                if (uniform01(rng_) < p_open_) omega_.open_set.emplace_back(c.begin(), c.end());
            });
        }
    }
    std::vector<int> root_of;
    report_ = components_of(N, omega_.open_set, &root_of);
    std::vector<int> color_of_root(static_cast<std::size_t>(N), -1);
    for (int v = 0; v < N; ++v) {
        int& c = color_of_root[static_cast<std::size_t>(root_of[static_cast<std::size_t>(v)])];
        if (c < 0) c = uniform_below(rng_, q_);
        spins_[static_cast<std::size_t>(v)] = c;
    }
}

std::vector<int> EdwardsSokalSampler::color_counts() const {
    std::vector<int> counts(static_cast<std::size_t>(q_), 0);
    for (int s : spins_) ++counts[static_cast<std::size_t>(s)];
    return counts;
}

MarginalCheck coupling_marginal_check(int N, int z, int q, double p_open, std::uint64_t cap) {
    require_clique_params(N, z, q);
    if (!(p_open >= 0.0 && p_open < 1.0)) throw DomainError("p_open must lie in [0, 1)");
    const auto cliques = all_cliques(N, z);
    const std::size_t n_cliques = cliques.size();
    const double spin_states = std::pow(static_cast<double>(q), N);
    if (n_cliques >= 63 || spin_states * std::ldexp(1.0, static_cast<int>(n_cliques)) > static_cast<double>(cap)) {
        throw CapExceeded("coupling state space exceeds the cap of " + std::to_string(cap));
    }
    const std::size_t n_spin = static_cast<std::size_t>(spin_states);
    const std::size_t n_omega = std::size_t{1} << n_cliques;

    std::vector<int> sigma(static_cast<std::size_t>(N));
    auto decode = [&](std::size_t code) {
        for (int v = 0; v < N; ++v) {
            sigma[static_cast<std::size_t>(v)] = static_cast<int>(code % static_cast<std::size_t>(q));
            code /= static_cast<std::size_t>(q);
        }
    };
    auto constant_on = [&](const std::vector<int>& clique) {
        for (int v : clique) {
            if (sigma[static_cast<std::size_t>(v)] != sigma[static_cast<std::size_t>(clique[0])]) return false;
        }
        return true;
    };

    std::vector<double> joint_spin(n_spin, 0.0);
    std::vector<double> joint_omega(n_omega, 0.0);
    std::vector<double> potts(n_spin, 0.0);
    double total = 0.0;
    for (std::size_t s = 0; s < n_spin; ++s) {
        decode(s);
        std::vector<bool> constant(n_cliques);
        int non_constant = 0;
        for (std::size_t d = 0; d < n_cliques; ++d) {
            constant[d] = constant_on(cliques[d]);
            if (!constant[d]) ++non_constant;
        }
        potts[s] = std::pow(1.0 - p_open, non_constant);
        for (std::size_t w = 0; w < n_omega; ++w) {
            double weight = 1.0;
            for (std::size_t d = 0; d < n_cliques && weight != 0.0; ++d) {
                const bool open = (w >> d) & 1U;
                weight *= open ? (constant[d] ? p_open : 0.0) : (1.0 - p_open);
            }
            joint_spin[s] += weight;
            joint_omega[w] += weight;
            total += weight;
        }
    }

    std::vector<double> rcm(n_omega, 0.0);
    for (std::size_t w = 0; w < n_omega; ++w) {
        std::vector<std::vector<int>> open_set;
        for (std::size_t d = 0; d < n_cliques; ++d) {
            if ((w >> d) & 1U) open_set.push_back(cliques[d]);
        }
        const int open = static_cast<int>(open_set.size());
        const int k_omega = components_of(N, open_set).k_omega;
        rcm[w] = std::exp(log_bond_weight(open, static_cast<int>(n_cliques) - open, p_open) +
                          k_omega * std::log(static_cast<double>(q)));
    }
    const double potts_total = std::accumulate(potts.begin(), potts.end(), 0.0);
    const double rcm_total = std::accumulate(rcm.begin(), rcm.end(), 0.0);

    MarginalCheck check;
    for (std::size_t s = 0; s < n_spin; ++s) {
        check.spin_error = std::max(check.spin_error, std::abs(joint_spin[s] / total - potts[s] / potts_total));
    }
    for (std::size_t w = 0; w < n_omega; ++w) {
        check.clique_error = std::max(check.clique_error, std::abs(joint_omega[w] / total - rcm[w] / rcm_total));
    }
    return check;
}

VarianceCheck variance_identity_exact(int N, int q, int z, double beta, std::uint64_t cap) {
    require_clique_params(N, z, q);
    if (!(beta >= 0.0)) throw DomainError("beta must be >= 0");
    const std::uint64_t n_cliques = clique_count(N, z);
    if (n_cliques >= 63 || (std::uint64_t{1} << n_cliques) > cap) {
        throw CapExceeded("2^" + std::to_string(n_cliques) + " clique configurations exceed the cap of " +
                          std::to_string(cap));
    }
    const double coupling = clique_coupling(beta, N, z);
    const double p_open = -std::expm1(-coupling);
    const double qd = q;

    // Spin side: the clique Potts measure over type classes.
    std::vector<double> logs;
    std::vector<double> deviations;
    for_each_composition(N, q, [&](std::span<const int> c) {
        logs.push_back(log_multinomial(c) + coupling * monochromatic_cliques(c, z));
        const double d = static_cast<double>(c[0]) / N - 1.0 / qd;
        deviations.push_back(d * d);
    });
    const double top = *std::max_element(logs.begin(), logs.end());
    double norm = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        const double w = std::exp(logs[i] - top);
        norm += w;
        acc += w * deviations[i];
    }

    // Cluster side: every clique configuration with its random-cluster weight.
    const auto cliques = all_cliques(N, z);
    const std::size_t n_omega = std::size_t{1} << n_cliques;
    std::vector<double> rcm_logs(n_omega);
    std::vector<double> stats(n_omega);
    std::vector<std::vector<int>> open_set;
    for (std::size_t w = 0; w < n_omega; ++w) {
        open_set.clear();
        for (std::size_t d = 0; d < cliques.size(); ++d) {
            if ((w >> d) & 1U) open_set.push_back(cliques[d]);
        }
        const int open = static_cast<int>(open_set.size());
        if (open > 0 && p_open == 0.0) {
            rcm_logs[w] = -std::numeric_limits<double>::infinity();
            continue;
        }
        const ComponentReport rep = components_of(N, open_set);
        rcm_logs[w] = log_bond_weight(open, static_cast<int>(cliques.size()) - open, p_open) +
                      rep.k_omega * std::log(qd);
        stats[w] = rep.squared_fraction_sum();
    }
    const double rtop = *std::max_element(rcm_logs.begin(), rcm_logs.end());
    double rnorm = 0.0, racc = 0.0;
    for (std::size_t w = 0; w < n_omega; ++w) {
        const double wt = std::exp(rcm_logs[w] - rtop);
        rnorm += wt;
        racc += wt * stats[w];
    }

    VarianceCheck out;
    out.lhs = acc / norm;
    out.rhs = (qd - 1.0) / (qd * qd) * racc / rnorm;
    return out;
}

VarianceCheck variance_identity_mc(int N, int q, int z, double beta, RngSeed seed, int samples, int burn_in) {
    if (samples < 2) throw DomainError("need at least two samples");
    const double p_open = -std::expm1(-clique_coupling(beta, N, z));
    EdwardsSokalSampler chain(N, z, q, p_open, seed);
    for (int i = 0; i < burn_in; ++i) chain.step();
    std::vector<double> spin_side, cluster_side;
    const double qd = q;
    for (int i = 0; i < samples; ++i) {
        chain.step();
        const double d = static_cast<double>(chain.color_counts()[0]) / N - 1.0 / qd;
        spin_side.push_back(d * d);
        cluster_side.push_back((qd - 1.0) / (qd * qd) * chain.components().squared_fraction_sum());
    }
    const MeanStderr lhs = batch_mean(spin_side);
    const MeanStderr rhs = batch_mean(cluster_side);
    return {lhs.mean, rhs.mean, lhs.stderr_, rhs.stderr_, false};
}

std::vector<PercolationPoint> percolation_scan(int N, int z, int q, std::span<const double> lambdas,
                                               RngSeed seed, int samples, int burn_in, std::uint64_t cap) {
    require_clique_params(N, z, q);
    if (samples < 1) throw DomainError("need at least one sample");
    for (double l : lambdas) {
        if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("lambda must be finite and >= 0");
    }
    if (clique_count(N, z) > cap) {
        throw CapExceeded(std::to_string(clique_count(N, z)) + " cliques exceed the cap of " + std::to_string(cap));
    }
    return parallel_map(lambdas.size(), [&](std::size_t i) {
        PercolationPoint pt;
        pt.lambda = lambdas[i];
        pt.p_open = std::min(1.0, lambdas[i] / std::pow(static_cast<double>(N), z - 1.0));
        EdwardsSokalSampler chain(N, z, q, pt.p_open, seed, i, cap);
        for (int s = 0; s < burn_in; ++s) chain.step();
        std::vector<double> fractions;
        for (int s = 0; s < samples; ++s) {
            chain.step();
            fractions.push_back(chain.components().max_fraction());
        }
        const MeanStderr m = batch_mean(fractions);
        pt.mean_max_fraction = m.mean;
        pt.stderr_max_fraction = m.stderr_;
        return pt;
    });
}

}  // namespace mfpotts
