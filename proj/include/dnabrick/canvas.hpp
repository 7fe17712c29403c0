#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace dnabrick {

/// Edge length of one molecular voxel across the helix axis, in nm.
inline constexpr double kVoxelWidthNm = 2.5;
/// Length of one 8-bp voxel along the helix axis, in nm.
inline constexpr double kVoxelDepthNm = 2.7;
inline constexpr int kBasesPerLayer = 8;
inline constexpr int kBasesPerSlab = 16;

/// Grid dimensions of a canvas: helices along x and y, base pairs along z.
struct CanvasSpec {
    int width_helices = 0;
    int height_helices = 0;
    int depth_bp = 0;

    int layers() const noexcept { return depth_bp / kBasesPerLayer; }
    int layer_pairs() const noexcept { return depth_bp / kBasesPerSlab; }
    std::size_t voxel_count() const noexcept
    {
        return static_cast<std::size_t>(width_helices) * height_helices * layers();
    }

    friend bool operator==(const CanvasSpec&, const CanvasSpec&) = default;
};

/// Throws Error(dimension_invalid) naming the first rule the spec breaks.
void validate(const CanvasSpec& spec);

struct VoxelCoord {
    int x = 0;
    int y = 0;
    int k = 0;

    friend auto operator<=>(const VoxelCoord&, const VoxelCoord&) = default;
};

bool in_range(const CanvasSpec& spec, const VoxelCoord& v) noexcept;

struct PhysicalSize {
    double x_nm = 0;
    double y_nm = 0;
    double z_nm = 0;
};

struct CanvasStats {
    std::size_t selected_voxels = 0;
    std::size_t domain_count = 0;
    PhysicalSize physical_size;
};

/// A cuboid voxel grid with a per-voxel selection flag. Plain value type.
class Canvas {
public:
    explicit Canvas(const CanvasSpec& spec);

    const CanvasSpec& spec() const noexcept { return spec_; }

    bool selected(const VoxelCoord& v) const;
    std::size_t selected_count() const noexcept { return selected_count_; }

    void set(const VoxelCoord& v, bool present);
    void remove_box(const VoxelCoord& lo, const VoxelCoord& hi);

    /// Deselected voxels in ascending (x, y, k) order.
    std::vector<VoxelCoord> removed_voxels() const;

    friend bool operator==(const Canvas& a, const Canvas& b)
    {
        return a.spec_ == b.spec_ && a.bits_ == b.bits_;
    }

private:
    std::size_t index(const VoxelCoord& v) const noexcept
    {
        return (static_cast<std::size_t>(v.x) * spec_.height_helices + v.y) * spec_.layers() + v.k;
    }
    void check(const VoxelCoord& v) const;

    CanvasSpec spec_;
    std::vector<std::uint8_t> bits_;
    std::size_t selected_count_ = 0;
};

Canvas new_canvas(const CanvasSpec& spec);
Canvas set_voxel(Canvas canvas, const VoxelCoord& v, bool present);
Canvas remove_box(Canvas canvas, const VoxelCoord& lo, const VoxelCoord& hi);
CanvasStats stats(const Canvas& canvas);

/// Copies selection where old and new grids overlap; voxels new to the grid
/// start selected.
Canvas resize_canvas(const Canvas& canvas, const CanvasSpec& new_spec);

} // namespace dnabrick
