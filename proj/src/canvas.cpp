#include "dnabrick/canvas.hpp"

#include "dnabrick/error.hpp"

#include <algorithm>
#include <string>

namespace dnabrick {

void validate(const CanvasSpec& spec)
{
    if (spec.width_helices < 2 || spec.height_helices < 2) {
        throw Error(ErrorKind::dimension_invalid,
                    "width and height must each be at least 2 helices (got " +
                        std::to_string(spec.width_helices) + "x" +
                        std::to_string(spec.height_helices) + ")");
    }
    if (spec.depth_bp <= 0 || spec.depth_bp % kBasesPerLayer != 0) {
        throw Error(ErrorKind::dimension_invalid,
                    "depth must be a positive multiple of 8 bp (got " +
                        std::to_string(spec.depth_bp) + ")");
    }
    if (spec.depth_bp % kBasesPerSlab != 0) {
        throw Error(ErrorKind::dimension_invalid,
                    "depth must give an even layer count, i.e. a multiple of 16 bp (got " +
                        std::to_string(spec.depth_bp) + ")");
    }
}

bool in_range(const CanvasSpec& spec, const VoxelCoord& v) noexcept
{
    return v.x >= 0 && v.x < spec.width_helices && v.y >= 0 && v.y < spec.height_helices &&
           v.k >= 0 && v.k < spec.layers();
}

Canvas::Canvas(const CanvasSpec& spec) : spec_(spec)
{
    validate(spec);
    bits_.assign(spec.voxel_count(), 1);
    selected_count_ = bits_.size();
}

void Canvas::check(const VoxelCoord& v) const
{
    if (!in_range(spec_, v)) {
        throw Error(ErrorKind::out_of_range,
                    "voxel (" + std::to_string(v.x) + "," + std::to_string(v.y) + "," +
                        std::to_string(v.k) + ") is outside the " +
                        std::to_string(spec_.width_helices) + "x" +
                        std::to_string(spec_.height_helices) + "x" +
                        std::to_string(spec_.layers()) + " grid");
    }
}

bool Canvas::selected(const VoxelCoord& v) const
{
    check(v);
    return bits_[index(v)] != 0;
}

void Canvas::set(const VoxelCoord& v, bool present)
{
    check(v);
    auto& bit = bits_[index(v)];
    if ((bit != 0) == present)
        return;
    bit = present ? 1 : 0;
    if (present)
        ++selected_count_;
    else
        --selected_count_;
}

void Canvas::remove_box(const VoxelCoord& lo, const VoxelCoord& hi)
{
    check(lo);
    check(hi);
    if (lo.x > hi.x || lo.y > hi.y || lo.k > hi.k)
        throw Error(ErrorKind::inverted_box, "box corner lo must not exceed hi on any axis");
    for (int x = lo.x; x <= hi.x; ++x)
        for (int y = lo.y; y <= hi.y; ++y)
            for (int k = lo.k; k <= hi.k; ++k)
                set({x, y, k}, false);
}

std::vector<VoxelCoord> Canvas::removed_voxels() const
{
    std::vector<VoxelCoord> out;
    for (int x = 0; x < spec_.width_helices; ++x)
        for (int y = 0; y < spec_.height_helices; ++y)
            for (int k = 0; k < spec_.layers(); ++k)
                if (bits_[index({x, y, k})] == 0)
                    out.push_back({x, y, k});
    return out;
}

Canvas new_canvas(const CanvasSpec& spec)
{
    return Canvas(spec);
}

Canvas set_voxel(Canvas canvas, const VoxelCoord& v, bool present)
{
    canvas.set(v, present);
    return canvas;
}

Canvas remove_box(Canvas canvas, const VoxelCoord& lo, const VoxelCoord& hi)
{
    canvas.remove_box(lo, hi);
    return canvas;
}

CanvasStats stats(const Canvas& canvas)
{
    const auto& spec = canvas.spec();
    CanvasStats s;
    s.selected_voxels = canvas.selected_count();
    s.domain_count = 2 * s.selected_voxels;
    s.physical_size = {kVoxelWidthNm * spec.width_helices, kVoxelWidthNm * spec.height_helices,
                       kVoxelDepthNm * spec.layers()};
    return s;
}

Canvas resize_canvas(const Canvas& canvas, const CanvasSpec& new_spec)
{
    Canvas out(new_spec);
    for (const auto& v : canvas.removed_voxels())
        if (in_range(new_spec, v))
            out.set(v, false);
    return out;
}

} // namespace dnabrick
