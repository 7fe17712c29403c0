#include "dnabrick/seqgen.hpp"

#include "dnabrick/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <random>

namespace dnabrick {

namespace {

constexpr char kBases[4] = {'A', 'C', 'G', 'T'};
constexpr std::size_t kAllDomains = 1u << 16;

int base_code(char c)
{
    switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1;
    }
}

int base_at(PackedDomain d, int i) noexcept
{
    return (d >> (2 * (7 - i))) & 3;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

PackedDomain pack_domain(std::string_view seq)
{
    if (seq.size() != 8)
        throw Error(ErrorKind::invalid_sequence,
                    "domain must be 8 nt, got " + std::to_string(seq.size()));
    PackedDomain d = 0;
    for (char c : seq) {
        const int b = base_code(c);
        if (b < 0)
            throw Error(ErrorKind::invalid_sequence,
                        std::string("invalid base '") + c + "' in domain " + std::string(seq));
        d = static_cast<PackedDomain>((d << 2) | b);
    }
    return d;
}

std::string unpack_domain(PackedDomain d)
{
    std::string s(8, 'A');
    for (int i = 0; i < 8; ++i)
        s[i] = kBases[base_at(d, i)];
    return s;
}

PackedDomain reverse_complement(PackedDomain d) noexcept
{
    PackedDomain out = 0;
    for (int i = 0; i < 8; ++i)
        out = static_cast<PackedDomain>((out << 2) | (3 - ((d >> (2 * i)) & 3)));
    return out;
}

std::string reverse_complement(std::string_view seq)
{
    return unpack_domain(reverse_complement(pack_domain(seq)));
}

int hamming_distance(PackedDomain a, PackedDomain b) noexcept
{
    const unsigned x = a ^ b;
    return std::popcount((x | (x >> 1)) & 0x5555u);
}

int gc_count(PackedDomain d) noexcept
{
    int n = 0;
    for (int i = 0; i < 8; ++i) {
        const int b = base_at(d, i);
        n += (b == 1 || b == 2) ? 1 : 0;
    }
    return n;
}

int longest_run(PackedDomain d) noexcept
{
    int best = 1;
    int cur = 1;
    for (int i = 1; i < 8; ++i) {
        cur = base_at(d, i) == base_at(d, i - 1) ? cur + 1 : 1;
        best = std::max(best, cur);
    }
    return best;
}

int longest_run(std::string_view seq) noexcept
{
    int best = 0;
    int cur = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        cur = (i > 0 && seq[i] == seq[i - 1]) ? cur + 1 : 1;
        best = std::max(best, cur);
    }
    return best;
}

int ConstraintConfig::gc_count_min() const
{
    // Nudge before rounding so 8 * 0.40 = 3.2000000000000002 stays 4 and
    // 8 * 0.375 = 3 stays 3.
    return static_cast<int>(std::ceil(8.0 * gc_min - 1e-9));
}

int ConstraintConfig::gc_count_max() const
{
    return static_cast<int>(std::floor(8.0 * gc_max + 1e-9));
}

bool meets_hard_constraints(PackedDomain d, const ConstraintConfig& config)
{
    const int gc = gc_count(d);
    return gc >= config.gc_count_min() && gc <= config.gc_count_max() &&
           longest_run(d) <= config.max_run;
}

void validate(const ConstraintConfig& config)
{
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::infeasible_config, msg); };
    if (!(config.gc_min >= 0.0 && config.gc_min <= config.gc_max && config.gc_max <= 1.0))
        fail("GC bounds must satisfy 0 <= gc_min <= gc_max <= 1");
    if (config.max_run < 1)
        fail("max_run must be at least 1");
    if (config.target_hamming < 0 || config.target_hamming > 8)
        fail("target_hamming must lie in [0, 8]");
    if (config.retry_budget < 0)
        fail("retry_budget must be nonnegative");
    if (config.gc_count_min() > config.gc_count_max())
        fail("GC window admits no integer G/C count for an 8-mer");
}

DomainAssignment::DomainAssignment(CanvasSpec spec, std::uint64_t seed, ConstraintConfig config,
                                   std::vector<PackedDomain> plus,
                                   std::vector<HammingViolation> violations)
    : spec_(spec), seed_(seed), config_(config), plus_(std::move(plus)),
      violations_(std::move(violations))
{
}

PackedDomain DomainAssignment::packed(const DomainId& d) const
{
    if (!in_range(spec_, d.voxel))
        throw Error(ErrorKind::spec_mismatch, "domain " + format_domain(d) +
                                                  " is not covered by this assignment");
    const auto slot = domain_slot(spec_, d) / 2;
    const auto p = plus_[slot];
    return d.side == Side::plus ? p : reverse_complement(p);
}

std::uint64_t domain_stream_seed(std::uint64_t seed, const VoxelCoord& v) noexcept
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint32_t>(v.x));
    h = splitmix64(h ^ static_cast<std::uint32_t>(v.y));
    h = splitmix64(h ^ static_cast<std::uint32_t>(v.k));
    return h;
}

namespace {

// Yields hard-constraint-satisfying 8-mers from one voxel's private stream.
class CandidateStream {
public:
    CandidateStream(std::uint64_t seed, const std::vector<std::uint8_t>& valid)
        : engine_(seed), valid_(valid)
    {
    }

    PackedDomain next()
    {
        for (;;) {
            if (left_ == 0) {
                bits_ = engine_();
                left_ = 4;
            }
            const auto d = static_cast<PackedDomain>(bits_ & 0xffffu);
            bits_ >>= 16;
            --left_;
            if (valid_[d])
                return d;
        }
    }

private:
    std::mt19937_64 engine_;
    const std::vector<std::uint8_t>& valid_;
    std::uint64_t bits_ = 0;
    int left_ = 0;
};

// Minimum distance from `c` to the accepted set, abandoning the scan as soon
// as it drops to `floor` or below.
int min_distance(PackedDomain c, std::span<const PackedDomain> accepted,
                 std::span<const PackedDomain> complements, int floor)
{
    int best = 8;
    for (auto a : accepted) {
        best = std::min(best, hamming_distance(c, a));
        if (best <= floor)
            return best;
    }
    for (auto a : complements) {
        best = std::min(best, hamming_distance(c, a));
        if (best <= floor)
            return best;
    }
    return best;
}

} // namespace

DomainAssignment generate_domains(const CanvasSpec& spec, std::uint64_t seed,
                                  const ConstraintConfig& config)
{
    validate(spec);
    validate(config);

    std::vector<std::uint8_t> valid(kAllDomains, 0);
    std::size_t valid_count = 0;
    for (std::size_t d = 0; d < kAllDomains; ++d) {
        valid[d] = meets_hard_constraints(static_cast<PackedDomain>(d), config) ? 1 : 0;
        valid_count += valid[d];
    }
    const auto n = spec.voxel_count();
    if (valid_count < n) {
        throw Error(ErrorKind::infeasible_config,
                    "only " + std::to_string(valid_count) +
                        " 8-mers satisfy the GC/run constraints, canvas needs " +
                        std::to_string(n) + " distinct domains");
    }

    const int threshold = std::max(config.target_hamming, 1);
    const int attempts = std::max(config.retry_budget, 1);
    // Upper bound on draws for one voxel before declaring the set exhausted.
    const std::size_t give_up = 64 * valid_count + static_cast<std::size_t>(attempts);

    std::vector<PackedDomain> plus;
    std::vector<PackedDomain> complements;
    std::vector<HammingViolation> violations;
    plus.reserve(n);

    for (int x = 0; x < spec.width_helices; ++x) {
        for (int y = 0; y < spec.height_helices; ++y) {
            for (int k = 0; k < spec.layers(); ++k) {
                const VoxelCoord v{x, y, k};
                CandidateStream stream(domain_stream_seed(seed, v), valid);
                std::span<const PackedDomain> comp;
                if (config.check_complements)
                    comp = complements;

                // Candidates must beat `best_distance`; starting at 0 keeps
                // duplicates out.
                int best_distance = 0;
                PackedDomain best = 0;
                int misses = 0;
                std::size_t draws = 0;
                bool accepted = false;
                while (!accepted) {
                    const auto c = stream.next();
                    ++draws;
                    const int d = min_distance(c, plus, comp, best_distance);
                    if (d >= threshold) {
                        best = c;
                        best_distance = d;
                        accepted = true;
                        break;
                    }
                    if (d > best_distance) {
                        best = c;
                        best_distance = d;
                    }
                    ++misses;
                    if (misses >= attempts && best_distance >= 1)
                        accepted = true;
                    else if (draws > give_up)
                        throw Error(ErrorKind::infeasible_config,
                                    "could not find a distinct domain for voxel " +
                                        format_domain({v, Side::plus}));
                }
                if (best_distance < config.target_hamming)
                    violations.push_back({{v, Side::plus}, best_distance});
                plus.push_back(best);
                if (config.check_complements)
                    complements.push_back(reverse_complement(best));
            }
        }
    }
    return DomainAssignment(spec, seed, config, std::move(plus), std::move(violations));
}

std::string strand_id(const DomainId& first)
{
    return "s" + std::to_string(first.voxel.x) + "_" + std::to_string(first.voxel.y) + "_" +
           std::to_string(first.voxel.k) + (first.side == Side::plus ? "p" : "m");
}

std::vector<Strand> assemble_strands(const StrandPlan& plan, const DomainAssignment& assignment)
{
    if (!(plan.spec == assignment.spec()))
        throw Error(ErrorKind::spec_mismatch,
                    "strand plan and domain assignment were built for different canvases");
    std::vector<Strand> strands;
    strands.reserve(plan.bricks.size());
    for (const auto& b : plan.bricks) {
        Strand s;
        s.id = strand_id(b.domains.front());
        s.kind = b.kind;
        s.orientation = b.orientation;
        s.domains = b.domains;
        s.sequence.reserve(b.length_nt());
        for (const auto& d : b.domains) {
            if (plan.is_protected(d))
                s.sequence += kProtectorSequence;
            else
                s.sequence += assignment.sequence(d);
        }
        strands.push_back(std::move(s));
    }
    return strands;
}

std::vector<std::string> analysis_domains(const std::vector<Strand>& strands,
                                          const StrandPlan& plan)
{
    std::vector<std::string> out;
    for (const auto& s : strands) {
        for (std::size_t i = 0; i < s.domains.size(); ++i) {
            if (plan.is_protected(s.domains[i]))
                continue;
            out.push_back(s.sequence.substr(i * kBasesPerLayer, kBasesPerLayer));
        }
    }
    return out;
}

std::vector<JunctionRun> find_long_runs(const std::vector<Strand>& strands, int max_run)
{
    std::vector<JunctionRun> out;
    for (const auto& s : strands) {
        const auto& q = s.sequence;
        std::size_t i = 0;
        while (i < q.size()) {
            std::size_t j = i + 1;
            while (j < q.size() && q[j] == q[i])
                ++j;
            if (j - i > static_cast<std::size_t>(max_run))
                out.push_back({s.id, i, j - i});
            i = j;
        }
    }
    return out;
}

SimilarityHistogram similarity_histogram(std::span<const std::string> domains)
{
    std::vector<PackedDomain> packed;
    packed.reserve(domains.size());
    for (const auto& d : domains) {
        if (d.size() != 8)
            throw Error(ErrorKind::length_mismatch,
                        "similarity analysis needs 8-nt domains, got '" + d + "'");
        packed.push_back(pack_domain(d));
    }

    // Bucket equal sequences first so identical pairs are counted in O(n).
    std::sort(packed.begin(), packed.end());
    std::vector<std::pair<PackedDomain, std::size_t>> uniq;
    for (auto d : packed) {
        if (!uniq.empty() && uniq.back().first == d)
            ++uniq.back().second;
        else
            uniq.emplace_back(d, 1);
    }

    SimilarityHistogram h;
    h.total_domains = domains.size();
    for (std::size_t i = 0; i < uniq.size(); ++i) {
        const auto ni = uniq[i].second;
        h.pairs_8 += ni * (ni - 1) / 2;
        for (std::size_t j = i + 1; j < uniq.size(); ++j) {
            const int dist = hamming_distance(uniq[i].first, uniq[j].first);
            if (dist == 1)
                h.pairs_7 += ni * uniq[j].second;
            else if (dist == 2)
                h.pairs_6 += ni * uniq[j].second;
        }
    }
    return h;
}

std::string CostReport::formatted() const
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%lld.%02lld", static_cast<long long>(total_cents / 100),
                  static_cast<long long>(total_cents % 100));
    return buf;
}

CostReport estimate_cost(std::size_t total_nt, const CostConfig& config)
{
    if (!(config.rate_usd_per_base >= 0.0) || !std::isfinite(config.rate_usd_per_base))
        throw Error(ErrorKind::negative_rate, "cost rate must be a nonnegative finite number");
    CostReport r;
    r.total_nt = total_nt;
    r.rate_usd_per_base = config.rate_usd_per_base;
    r.total_usd = static_cast<double>(total_nt) * config.rate_usd_per_base;
    r.total_cents = std::llround(r.total_usd * 100.0);
    return r;
}

} // namespace dnabrick
