#pragma once

// Collapsing schemes: strictly coarsening sequences of partitions of the
// colors {1, ..., q}, and the Gibbs status of the fuzzy model along them.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mfpotts {

/// A partition of {1, ..., q} into blocks of 1-based colors.
class Partition {
public:
    Partition() = default;
    /// Stores the blocks canonicalized: each sorted, blocks ordered by smallest element.
    explicit Partition(std::vector<std::vector<int>> blocks);

    const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }
    std::size_t size() const noexcept { return blocks_.size(); }
    std::vector<int> block_sizes() const;

    /// Every block of this partition lies inside some block of `coarser`.
    bool is_refinement_of(const Partition& coarser) const;

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::vector<int>> blocks_;
};

struct CollapsingScheme {
    int q = 0;
    std::vector<Partition> partitions;  // A_0 ... A_T

    int horizon() const { return static_cast<int>(partitions.size()) - 1; }
};

class SchemeError : public std::invalid_argument {
public:
    enum class Kind { InvalidPartition, WrongInitial, WrongFinal, NonCoarsening, NonStrict, TooShort };

    SchemeError(Kind kind, int t, const std::string& what)
        : std::invalid_argument("t = " + std::to_string(t) + ": " + what), kind_(kind), t_(t) {}

    Kind kind() const noexcept { return kind_; }
    int t() const noexcept { return t_; }

private:
    Kind kind_;
    int t_;
};

/// Throws SchemeError naming the first offending time index.
void validate(const CollapsingScheme& scheme);

/// r_* of the block sizes at t = 1, ..., T-1.
std::vector<std::optional<int>> r_star_trajectory(const CollapsingScheme& scheme, double z);

/// T >= 2 and the r_* trajectory is non-decreasing, with a missing r_*
/// ordered above every integer.
bool is_regular(const CollapsingScheme& scheme, double z);

enum class TrajectoryStatus { Gibbs, NonGibbs, TrivialEndpoint };

std::string_view to_string(TrajectoryStatus status);

struct TrajectoryPoint {
    int t = 0;
    TrajectoryStatus status = TrajectoryStatus::TrivialEndpoint;
    std::optional<int> r_star;
    std::optional<double> threshold;  // beta_c(r_star, z)
    std::vector<int> block_sizes;
};

enum class RegularRegime { StaysGibbs, AlwaysNonGibbs, Transition };

std::string_view to_string(RegularRegime regime);

struct Trajectory {
    std::vector<TrajectoryPoint> points;  // t = 0 ... T
    std::vector<int> switches;            // t in 2..T-1 whose status differs from t-1
    bool regular = false;
    std::optional<RegularRegime> regime;  // regular schemes only
    std::optional<int> t_gibbs;           // first Gibbs time after non-Gibbs, regular only
};

Trajectory gibbs_trajectory(double beta, const CollapsingScheme& scheme, double z);

}  // namespace mfpotts
