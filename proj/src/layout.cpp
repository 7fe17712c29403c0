#include "dnabrick/layout.hpp"

#include "dnabrick/error.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace dnabrick {

const char* to_string(Side side)
{
    return side == Side::plus ? "plus" : "minus";
}

const char* to_string(BrickKind kind)
{
    switch (kind) {
    case BrickKind::full: return "full";
    case BrickKind::half: return "half";
    case BrickKind::boundary: return "boundary";
    case BrickKind::fragment: return "fragment";
    }
    return "?";
}

const char* to_string(Orientation o)
{
    return o == Orientation::x ? "x" : "y";
}

const char* to_string(ProtectorPolicy policy)
{
    return policy == ProtectorPolicy::emit_fragments ? "emit_fragments" : "suppress_and_protect";
}

ProtectorPolicy parse_protector_policy(const std::string& text)
{
    if (text == "emit_fragments")
        return ProtectorPolicy::emit_fragments;
    if (text == "suppress_and_protect")
        return ProtectorPolicy::suppress_and_protect;
    throw Error(ErrorKind::malformed, "unknown protector policy '" + text + "'");
}

std::string format_domain(const DomainId& d)
{
    return std::to_string(d.voxel.x) + ":" + std::to_string(d.voxel.y) + ":" +
           std::to_string(d.voxel.k) + ":" + to_string(d.side);
}

bool continues(const DomainId& prev, const DomainId& next) noexcept
{
    if (prev.side != next.side || prev.voxel.x != next.voxel.x || prev.voxel.y != next.voxel.y)
        return false;
    const int step = prev.side == Side::plus ? 1 : -1;
    return next.voxel.k == prev.voxel.k + step;
}

std::size_t domain_slot(const CanvasSpec& spec, const DomainId& d) noexcept
{
    const auto voxel = (static_cast<std::size_t>(d.voxel.x) * spec.height_helices + d.voxel.y) *
                           spec.layers() +
                       d.voxel.k;
    return 2 * voxel + (d.side == Side::minus ? 1 : 0);
}

bool StrandPlan::is_protected(const DomainId& d) const
{
    return std::binary_search(protected_domains.begin(), protected_domains.end(), d);
}

BrickCounts count_bricks(std::span<const Brick> bricks)
{
    BrickCounts c;
    for (const auto& b : bricks) {
        switch (b.kind) {
        case BrickKind::full: ++c.full; break;
        case BrickKind::half: ++c.half; break;
        case BrickKind::boundary: ++c.boundary; break;
        case BrickKind::fragment: ++c.fragment; break;
        }
        c.domains += b.domains.size();
    }
    c.nucleotides = c.domains * kBasesPerLayer;
    return c;
}

namespace {

// Segment of helix (x, y) in slab p, listed 5' -> 3'.
std::vector<DomainId> segment(int x, int y, int pair, Side side)
{
    const int lower = 2 * pair;
    const int upper = lower + 1;
    if (side == Side::plus)
        return {{{x, y, lower}, Side::plus}, {{x, y, upper}, Side::plus}};
    return {{{x, y, upper}, Side::minus}, {{x, y, lower}, Side::minus}};
}

Anchor anchor_of(const DomainId& first)
{
    return {first.voxel.x, first.voxel.y, first.voxel.k / 2};
}

Brick make_brick(BrickKind kind, Orientation o, std::vector<DomainId> domains)
{
    Brick b;
    b.kind = kind;
    b.orientation = o;
    b.anchor = anchor_of(domains.front());
    b.domains = std::move(domains);
    return b;
}

// Sort key shared by the canonical layout and the merge scan.
auto scan_key(const Brick& b)
{
    const auto& d = b.domains.front();
    return std::make_tuple(b.anchor.pair_index, d.voxel.y, d.voxel.x, d.side);
}

std::vector<Brick> partners_of(const CanvasSpec& spec, std::span<const Brick> bricks,
                               const Brick& brick)
{
    std::vector<std::size_t> owner(2 * spec.voxel_count(), bricks.size());
    std::optional<std::size_t> self;
    for (std::size_t i = 0; i < bricks.size(); ++i) {
        if (!self && bricks[i] == brick)
            self = i;
        for (const auto& d : bricks[i].domains)
            owner[domain_slot(spec, d)] = i;
    }
    if (!self)
        throw Error(ErrorKind::unknown_brick, "brick is not part of this layout");

    std::vector<std::size_t> found;
    for (const auto& d : brick.domains) {
        const auto o = owner[domain_slot(spec, partner(d))];
        if (o != bricks.size() && o != *self)
            found.push_back(o);
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());

    std::vector<Brick> out;
    out.reserve(found.size());
    for (auto i : found)
        out.push_back(bricks[i]);
    return out;
}

} // namespace

BrickLayout canonical_layout(const CanvasSpec& spec)
{
    validate(spec);
    BrickLayout layout;
    layout.spec = spec;
    const int w = spec.width_helices;
    const int h = spec.height_helices;

    for (int p = 0; p < spec.layer_pairs(); ++p) {
        const auto o = pair_orientation(p);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                // Position of this helix along the joining direction.
                const int along = o == Orientation::x ? x : y;
                const int extent = o == Orientation::x ? w : h;
                if (along == 0)
                    layout.bricks.push_back(
                        make_brick(BrickKind::half, o, segment(x, y, p, Side::plus)));
                if (along + 1 < extent) {
                    auto domains = segment(x, y, p, Side::minus);
                    const int nx = o == Orientation::x ? x + 1 : x;
                    const int ny = o == Orientation::x ? y : y + 1;
                    auto tail = segment(nx, ny, p, Side::plus);
                    domains.insert(domains.end(), tail.begin(), tail.end());
                    layout.bricks.push_back(make_brick(BrickKind::full, o, std::move(domains)));
                } else {
                    layout.bricks.push_back(
                        make_brick(BrickKind::half, o, segment(x, y, p, Side::minus)));
                }
            }
        }
    }
    std::stable_sort(layout.bricks.begin(), layout.bricks.end(),
                     [](const Brick& a, const Brick& b) { return scan_key(a) < scan_key(b); });
    return layout;
}

std::vector<Brick> neighbors(const BrickLayout& layout, const Brick& brick)
{
    return partners_of(layout.spec, layout.bricks, brick);
}

StrandPlan sculpt(const BrickLayout& layout, const Canvas& canvas)
{
    if (!(layout.spec == canvas.spec()))
        throw Error(ErrorKind::spec_mismatch, "layout and canvas have different dimensions");

    StrandPlan plan;
    plan.spec = layout.spec;
    for (const auto& brick : layout.bricks) {
        const auto& ds = brick.domains;
        std::size_t i = 0;
        while (i < ds.size()) {
            if (!canvas.selected(ds[i].voxel)) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < ds.size() && canvas.selected(ds[j].voxel))
                ++j;
            std::vector<DomainId> run(ds.begin() + i, ds.begin() + j);
            const auto len = run.size();
            BrickKind kind = BrickKind::fragment;
            if (len == ds.size() && brick.kind == BrickKind::full)
                kind = BrickKind::full;
            else if (len == 2 && i % 2 == 0)
                kind = BrickKind::half;
            if (kind == BrickKind::fragment) {
                plan.warnings.push_back("irregular " + std::to_string(len * kBasesPerLayer) +
                                        "-nt fragment starting at " + format_domain(run.front()));
            }
            plan.bricks.push_back(make_brick(kind, brick.orientation, std::move(run)));
            i = j;
        }
    }
    return plan;
}

StrandPlan merge_boundary_bricks(StrandPlan plan)
{
    auto& bricks = plan.bricks;
    std::map<DomainId, std::size_t> full_by_first;
    std::map<DomainId, std::size_t> full_by_last;
    std::vector<std::size_t> halves;
    for (std::size_t i = 0; i < bricks.size(); ++i) {
        if (bricks[i].kind == BrickKind::full) {
            full_by_first.emplace(bricks[i].domains.front(), i);
            full_by_last.emplace(bricks[i].domains.back(), i);
        } else if (bricks[i].kind == BrickKind::half) {
            halves.push_back(i);
        }
    }
    std::stable_sort(halves.begin(), halves.end(), [&](std::size_t a, std::size_t b) {
        return scan_key(bricks[a]) < scan_key(bricks[b]);
    });

    auto step = [](DomainId d, int dir) {
        d.voxel.k += d.side == Side::plus ? dir : -dir;
        return d;
    };

    std::vector<bool> absorbed(bricks.size(), false);
    std::vector<bool> consumed(bricks.size(), false);
    for (auto hi : halves) {
        const auto& half = bricks[hi];
        // full ++ half
        if (auto it = full_by_last.find(step(half.domains.front(), -1));
            it != full_by_last.end() && !absorbed[it->second]) {
            auto& full = bricks[it->second];
            full.domains.insert(full.domains.end(), half.domains.begin(), half.domains.end());
            full.kind = BrickKind::boundary;
            absorbed[it->second] = true;
            consumed[hi] = true;
            continue;
        }
        // half ++ full
        if (auto it = full_by_first.find(step(half.domains.back(), +1));
            it != full_by_first.end() && !absorbed[it->second]) {
            auto& full = bricks[it->second];
            full.domains.insert(full.domains.begin(), half.domains.begin(), half.domains.end());
            full.kind = BrickKind::boundary;
            absorbed[it->second] = true;
            consumed[hi] = true;
        }
    }

    std::vector<Brick> out;
    out.reserve(bricks.size());
    for (std::size_t i = 0; i < bricks.size(); ++i)
        if (!consumed[i])
            out.push_back(std::move(bricks[i]));
    bricks = std::move(out);
    return plan;
}

StrandPlan apply_protector_policy(StrandPlan plan, ProtectorPolicy policy)
{
    if (policy == ProtectorPolicy::emit_fragments)
        return plan;

    std::vector<DomainId> dropped;
    std::vector<Brick> kept;
    kept.reserve(plan.bricks.size());
    for (auto& b : plan.bricks) {
        if (b.kind == BrickKind::fragment && b.length_nt() < kBasesPerSlab)
            dropped.insert(dropped.end(), b.domains.begin(), b.domains.end());
        else
            kept.push_back(std::move(b));
    }
    plan.bricks = std::move(kept);
    if (dropped.empty())
        return plan;

    std::vector<std::uint8_t> present(2 * plan.spec.voxel_count(), 0);
    for (const auto& b : plan.bricks)
        for (const auto& d : b.domains)
            present[domain_slot(plan.spec, d)] = 1;

    for (const auto& d : dropped) {
        const auto p = partner(d);
        if (present[domain_slot(plan.spec, p)])
            plan.protected_domains.push_back(p);
    }
    std::sort(plan.protected_domains.begin(), plan.protected_domains.end());
    plan.protected_domains.erase(
        std::unique(plan.protected_domains.begin(), plan.protected_domains.end()),
        plan.protected_domains.end());

    plan.warnings.push_back("dropped " + std::to_string(dropped.size()) +
                            " single-domain fragment(s); " +
                            std::to_string(plan.protected_domains.size()) +
                            " exposed domain(s) protected with TTTTTTTT");
    return plan;
}

StrandPlan build_plan(const Canvas& canvas, const PlanOptions& options)
{
    auto plan = sculpt(canonical_layout(canvas.spec()), canvas);
    if (options.boundary_merge)
        plan = merge_boundary_bricks(std::move(plan));
    return apply_protector_policy(std::move(plan), options.protector_policy);
}

} // namespace dnabrick
