#pragma once

#include "dnabrick/canvas.hpp"
#include "dnabrick/layout.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dnabrick {

/// An 8-mer packed two bits per base (A=0, C=1, G=2, T=3), first base in the
/// high bits.
using PackedDomain = std::uint16_t;

inline constexpr std::string_view kProtectorSequence = "TTTTTTTT";

PackedDomain pack_domain(std::string_view seq);
std::string unpack_domain(PackedDomain d);

/// Reverse complement of an 8-mer over {A,C,G,T}. Throws invalid_sequence on
/// any other character or length.
std::string reverse_complement(std::string_view seq);
PackedDomain reverse_complement(PackedDomain d) noexcept;

int hamming_distance(PackedDomain a, PackedDomain b) noexcept;
int gc_count(PackedDomain d) noexcept;
int longest_run(PackedDomain d) noexcept;
int longest_run(std::string_view seq) noexcept;

struct ConstraintConfig {
    double gc_min = 0.40;
    double gc_max = 0.60;
    int max_run = 4;
    int target_hamming = 6;
    int retry_budget = 1000;
    bool check_complements = false;

    /// Integer G/C window for an 8-mer: [ceil(8*gc_min), floor(8*gc_max)].
    int gc_count_min() const;
    int gc_count_max() const;

    friend bool operator==(const ConstraintConfig&, const ConstraintConfig&) = default;
};

/// Throws infeasible_config when the values are out of range or no 8-mer can
/// satisfy the hard constraints.
void validate(const ConstraintConfig& config);

/// True when `d` satisfies the GC window and run limit.
bool meets_hard_constraints(PackedDomain d, const ConstraintConfig& config);

struct HammingViolation {
    DomainId domain; // always plus side
    int best_min_distance = 0;

    friend bool operator==(const HammingViolation&, const HammingViolation&) = default;
};

/// Plus-side 8-mer for every voxel of a canvas; minus sides are the reverse
/// complements. Index order is (x, y, k) lexicographic.
class DomainAssignment {
public:
    DomainAssignment() = default;
    DomainAssignment(CanvasSpec spec, std::uint64_t seed, ConstraintConfig config,
                     std::vector<PackedDomain> plus, std::vector<HammingViolation> violations);

    const CanvasSpec& spec() const noexcept { return spec_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const ConstraintConfig& config() const noexcept { return config_; }
    std::span<const PackedDomain> plus_domains() const noexcept { return plus_; }
    const std::vector<HammingViolation>& violations() const noexcept { return violations_; }

    PackedDomain packed(const DomainId& d) const;
    std::string sequence(const DomainId& d) const { return unpack_domain(packed(d)); }

    friend bool operator==(const DomainAssignment&, const DomainAssignment&) = default;

private:
    CanvasSpec spec_;
    std::uint64_t seed_ = 0;
    ConstraintConfig config_;
    std::vector<PackedDomain> plus_;
    std::vector<HammingViolation> violations_;
};

/// Seed of the private candidate stream for one voxel.
std::uint64_t domain_stream_seed(std::uint64_t seed, const VoxelCoord& v) noexcept;

/// Draws plus-side domains voxel by voxel in (x, y, k) order. Each voxel has
/// its own random stream, so the result depends only on (spec, seed, config).
/// A candidate is accepted once it is at least `target_hamming` away from
/// every earlier domain; after `retry_budget` misses the farthest candidate
/// seen is taken and a violation is recorded. Duplicates are never accepted.
DomainAssignment generate_domains(const CanvasSpec& spec, std::uint64_t seed,
                                  const ConstraintConfig& config);

struct Strand {
    std::string id;
    BrickKind kind = BrickKind::full;
    Orientation orientation = Orientation::x;
    std::vector<DomainId> domains;
    std::string sequence;

    friend bool operator==(const Strand&, const Strand&) = default;
};

/// "s<x>_<y>_<k><p|m>" from the 5'-most domain.
std::string strand_id(const DomainId& first);

std::vector<Strand> assemble_strands(const StrandPlan& plan, const DomainAssignment& assignment);

/// Domain sequences read off the strands, both sides, protected domains
/// skipped.
std::vector<std::string> analysis_domains(const std::vector<Strand>& strands,
                                          const StrandPlan& plan);

struct JunctionRun {
    std::string strand_id;
    std::size_t position = 0; // 0-based offset of the run in the strand
    std::size_t length = 0;
};

/// Homopolymer runs longer than `max_run` anywhere in a strand, including
/// across domain junctions.
std::vector<JunctionRun> find_long_runs(const std::vector<Strand>& strands, int max_run);

struct SimilarityHistogram {
    std::size_t pairs_8 = 0;
    std::size_t pairs_7 = 0;
    std::size_t pairs_6 = 0;
    std::size_t total_domains = 0;

    friend bool operator==(const SimilarityHistogram&, const SimilarityHistogram&) = default;
};

/// Counts unordered domain pairs sharing 8, 7 or 6 positions.
SimilarityHistogram similarity_histogram(std::span<const std::string> domains);

struct CostConfig {
    double rate_usd_per_base = 0.004;
};

struct CostReport {
    std::size_t total_nt = 0;
    double rate_usd_per_base = 0;
    double total_usd = 0;     // unrounded
    std::int64_t total_cents = 0;

    std::string formatted() const; // "16.38"
};

CostReport estimate_cost(std::size_t total_nt, const CostConfig& config);

} // namespace dnabrick
