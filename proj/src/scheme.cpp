#include "mfpotts/scheme.hpp"

#include <algorithm>
#include <cmath>

#include "mfpotts/errors.hpp"
#include "mfpotts/fuzzy.hpp"

namespace mfpotts {

Partition::Partition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
    for (auto& b : blocks_) std::sort(b.begin(), b.end());
    std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) {
        if (a.empty() || b.empty()) return a.size() < b.size();
        return a.front() < b.front();
    });
}

std::vector<int> Partition::block_sizes() const {
    std::vector<int> sizes;
    sizes.reserve(blocks_.size());
    for (const auto& b : blocks_) sizes.push_back(static_cast<int>(b.size()));
    return sizes;
}

bool Partition::is_refinement_of(const Partition& coarser) const {
    for (const auto& block : blocks_) {
        const bool contained = std::any_of(coarser.blocks().begin(), coarser.blocks().end(),
                                           [&](const std::vector<int>& big) {
                                               return std::includes(big.begin(), big.end(),
                                                                    block.begin(), block.end());
                                           });
        if (!contained) return false;
    }
    return true;
}

namespace {

void check_partition(const Partition& part, int q, int t) {
    std::vector<int> seen(static_cast<std::size_t>(q) + 1, 0);
    for (const auto& block : part.blocks()) {
        if (block.empty()) throw SchemeError(SchemeError::Kind::InvalidPartition, t, "empty block");
        for (int c : block) {
            if (c < 1 || c > q) {
                throw SchemeError(SchemeError::Kind::InvalidPartition, t,
                                  "color " + std::to_string(c) + " outside 1.." + std::to_string(q));
            }
            if (seen[static_cast<std::size_t>(c)]++) {
                throw SchemeError(SchemeError::Kind::InvalidPartition, t,
                                  "color " + std::to_string(c) + " appears twice");
            }
        }
    }
    for (int c = 1; c <= q; ++c) {
        if (!seen[static_cast<std::size_t>(c)]) {
            throw SchemeError(SchemeError::Kind::InvalidPartition, t,
                              "color " + std::to_string(c) + " is not covered");
        }
    }
}

std::optional<int> r_star_of(const Partition& part, double z) {
    return r_star(SpinPartition(part.block_sizes()), z);
}

}  // namespace

void validate(const CollapsingScheme& scheme) {
    if (scheme.q < 2) throw SchemeError(SchemeError::Kind::InvalidPartition, 0, "q must be >= 2");
    if (scheme.partitions.size() < 2) {
        throw SchemeError(SchemeError::Kind::TooShort, 0, "a scheme needs at least A_0 and A_T");
    }
    for (std::size_t t = 0; t < scheme.partitions.size(); ++t) {
        check_partition(scheme.partitions[t], scheme.q, static_cast<int>(t));
    }
    if (scheme.partitions.front().size() != static_cast<std::size_t>(scheme.q)) {
        throw SchemeError(SchemeError::Kind::WrongInitial, 0, "A_0 must consist of singletons");
    }
    if (scheme.partitions.back().size() != 1) {
        throw SchemeError(SchemeError::Kind::WrongFinal, scheme.horizon(), "A_T must be a single block");
    }
    for (std::size_t t = 1; t < scheme.partitions.size(); ++t) {
        const auto& prev = scheme.partitions[t - 1];
        const auto& next = scheme.partitions[t];
        if (!prev.is_refinement_of(next)) {
            throw SchemeError(SchemeError::Kind::NonCoarsening, static_cast<int>(t),
                              "partition splits a block of A_" + std::to_string(t - 1));
        }
        if (next.size() >= prev.size()) {
            throw SchemeError(SchemeError::Kind::NonStrict, static_cast<int>(t),
                              "partition does not strictly coarsen A_" + std::to_string(t - 1));
        }
    }
}

std::vector<std::optional<int>> r_star_trajectory(const CollapsingScheme& scheme, double z) {
    validate(scheme);
    std::vector<std::optional<int>> out;
    for (int t = 1; t < scheme.horizon(); ++t) {
        out.push_back(r_star_of(scheme.partitions[static_cast<std::size_t>(t)], z));
    }
    return out;
}

bool is_regular(const CollapsingScheme& scheme, double z) {
    if (scheme.horizon() < 2) {
        validate(scheme);
        return false;
    }
    const auto traj = r_star_trajectory(scheme, z);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if (!traj[i]) continue;
        if (!traj[i - 1] || *traj[i - 1] > *traj[i]) return false;
    }
    return true;
}

std::string_view to_string(TrajectoryStatus status) {
    switch (status) {
        case TrajectoryStatus::Gibbs: return "gibbs";
        case TrajectoryStatus::NonGibbs: return "non_gibbs";
        case TrajectoryStatus::TrivialEndpoint: return "trivial_endpoint";
    }
    return "?";
}

std::string_view to_string(RegularRegime regime) {
    switch (regime) {
        case RegularRegime::StaysGibbs: return "stays_gibbs";
        case RegularRegime::AlwaysNonGibbs: return "always_non_gibbs";
        case RegularRegime::Transition: return "transition";
    }
    return "?";
}

Trajectory gibbs_trajectory(double beta, const CollapsingScheme& scheme, double z) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and >= 0");
    if (!(z >= 2.0) || !std::isfinite(z)) throw DomainError("z must be finite and >= 2");
    validate(scheme);

    Trajectory traj;
    const int horizon = scheme.horizon();
    for (int t = 0; t <= horizon; ++t) {
        const auto& part = scheme.partitions[static_cast<std::size_t>(t)];
        TrajectoryPoint pt;
        pt.t = t;
        pt.block_sizes = part.block_sizes();
        if (t > 0 && t < horizon) {
            pt.r_star = r_star_of(part, z);
            if (pt.r_star) {
                pt.threshold = class_critical_beta(*pt.r_star, z);
                pt.status = beta >= *pt.threshold ? TrajectoryStatus::NonGibbs : TrajectoryStatus::Gibbs;
            } else {
                pt.status = TrajectoryStatus::Gibbs;
            }
        }
        traj.points.push_back(std::move(pt));
    }
    for (int t = 2; t < horizon; ++t) {
        if (traj.points[static_cast<std::size_t>(t)].status != traj.points[static_cast<std::size_t>(t - 1)].status) {
            traj.switches.push_back(t);
        }
    }

    traj.regular = is_regular(scheme, z);
    if (traj.regular) {
        const auto& first = traj.points[1];
        const auto& last = traj.points[static_cast<std::size_t>(horizon - 1)];
        if (first.status == TrajectoryStatus::Gibbs) {
            traj.regime = RegularRegime::StaysGibbs;
        } else if (last.status == TrajectoryStatus::NonGibbs) {
            traj.regime = RegularRegime::AlwaysNonGibbs;
        } else {
            traj.regime = RegularRegime::Transition;
            traj.t_gibbs = traj.switches.front();
        }
    }
    return traj;
}

}  // namespace mfpotts
