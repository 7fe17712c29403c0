#pragma once

#include "dnabrick/canvas.hpp"

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dnabrick {

/// Strand side of a voxel duplex. Plus strands run 5'->3' toward increasing
/// layer index, minus strands toward decreasing layer index.
enum class Side : std::uint8_t { plus, minus };

enum class BrickKind : std::uint8_t { full, half, boundary, fragment };
enum class Orientation : std::uint8_t { x, y };
enum class ProtectorPolicy : std::uint8_t { emit_fragments, suppress_and_protect };

const char* to_string(Side side);
const char* to_string(BrickKind kind);
const char* to_string(Orientation o);
const char* to_string(ProtectorPolicy policy);
ProtectorPolicy parse_protector_policy(const std::string& text);

inline Side opposite(Side s) noexcept { return s == Side::plus ? Side::minus : Side::plus; }

/// One 8-nt single-stranded domain.
struct DomainId {
    VoxelCoord voxel;
    Side side = Side::plus;

    friend auto operator<=>(const DomainId&, const DomainId&) = default;
};

/// "x:y:k:plus" / "x:y:k:minus"
std::string format_domain(const DomainId& d);

inline DomainId partner(const DomainId& d) noexcept { return {d.voxel, opposite(d.side)}; }

/// True when `next` directly continues `prev` along one strand backbone.
bool continues(const DomainId& prev, const DomainId& next) noexcept;

/// Dense index of a domain within a canvas; two slots per voxel.
std::size_t domain_slot(const CanvasSpec& spec, const DomainId& d) noexcept;

struct Anchor {
    int helix_x = 0;
    int helix_y = 0;
    int pair_index = 0;

    friend auto operator<=>(const Anchor&, const Anchor&) = default;
};

struct Brick {
    BrickKind kind = BrickKind::full;
    Orientation orientation = Orientation::x;
    std::vector<DomainId> domains; // 5' -> 3'
    Anchor anchor;

    std::size_t length_nt() const noexcept { return domains.size() * kBasesPerLayer; }

    friend bool operator==(const Brick&, const Brick&) = default;
};

/// Orientation of the bricks occupying layer pair `pair_index`.
inline Orientation pair_orientation(int pair_index) noexcept
{
    return pair_index % 2 == 0 ? Orientation::x : Orientation::y;
}

struct BrickLayout {
    CanvasSpec spec;
    std::vector<Brick> bricks;
};

struct StrandPlan {
    CanvasSpec spec;
    std::vector<Brick> bricks;
    std::vector<DomainId> protected_domains; // sorted, unique
    std::vector<std::string> warnings;

    bool is_protected(const DomainId& d) const;
};

struct BrickCounts {
    std::size_t full = 0;
    std::size_t half = 0;
    std::size_t boundary = 0;
    std::size_t fragment = 0;
    std::size_t domains = 0;
    std::size_t nucleotides = 0;

    std::size_t strands() const noexcept { return full + half + boundary + fragment; }
};

BrickCounts count_bricks(std::span<const Brick> bricks);

/// Full/half tiling of every domain of the canvas. Layers are grouped into
/// 16-bp slabs; slab p joins neighbouring helices along x when p is even and
/// along y when p is odd. A full brick is the minus segment of one helix
/// followed by the plus segment of the next helix; the two segments left over
/// at the row ends become half bricks.
BrickLayout canonical_layout(const CanvasSpec& spec);

/// Bricks owning a domain complementary to one of `brick`'s domains, in
/// layout order.
std::vector<Brick> neighbors(const BrickLayout& layout, const Brick& brick);

/// Restricts every canonical brick to the selected voxels. Each maximal run
/// of surviving consecutive domains becomes a brick: four domains stay full,
/// a two-domain run on one helix is a half brick, anything else is a
/// fragment and gets a warning.
StrandPlan sculpt(const BrickLayout& layout, const Canvas& canvas);

/// Joins half bricks onto a full brick whose backbone they continue, giving
/// 48-nt boundary bricks. Halves are visited in (pair, y, x, side) order and
/// each full absorbs at most one half.
StrandPlan merge_boundary_bricks(StrandPlan plan);

/// Under suppress_and_protect, single-domain fragments are dropped and the
/// complementary domains they leave exposed are marked for T8 protection.
StrandPlan apply_protector_policy(StrandPlan plan, ProtectorPolicy policy);

struct PlanOptions {
    bool boundary_merge = false;
    ProtectorPolicy protector_policy = ProtectorPolicy::emit_fragments;

    friend bool operator==(const PlanOptions&, const PlanOptions&) = default;
};

/// sculpt -> optional merge -> protector policy.
StrandPlan build_plan(const Canvas& canvas, const PlanOptions& options);

} // namespace dnabrick
