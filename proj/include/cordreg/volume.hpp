#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cordreg/errors.hpp"

namespace cordreg {

/// Axis-aligned sampling grid in the canonical world frame
/// (x = right-left, y = anterior-posterior, z = superior-inferior,
/// +z pointing superior). World position of voxel (i,j,k) is
/// origin + spacing .* (i,j,k); voxel (0,0,0) sits at `origin`.
struct GridSpec {
    std::array<int, 3> dims{0, 0, 0};
    Eigen::Vector3d spacing{1.0, 1.0, 1.0};
    Eigen::Vector3d origin{0.0, 0.0, 0.0};

    std::size_t num_voxels() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    std::size_t slice_size() const {
        return static_cast<std::size_t>(dims[0]) * dims[1];
    }
    Eigen::Vector3d voxel_center(double i, double j, double k) const {
        return origin + Eigen::Vector3d(i * spacing.x(), j * spacing.y(), k * spacing.z());
    }
    Eigen::Vector3d voxel_from_world(const Eigen::Vector3d& w) const {
        return (w - origin).cwiseQuotient(spacing);
    }
    double z_of_slice(int k) const { return origin.z() + k * spacing.z(); }
    /// Continuous slice coordinate of a world z (not rounded).
    double slice_of_z(double z) const { return (z - origin.z()) / spacing.z(); }

    /// Voxel-index -> world-mm homogeneous matrix.
    Eigen::Matrix4d affine() const;

    bool approx_equal(const GridSpec& other, double tol = 1e-6) const;
    void validate() const; // throws DataError on non-positive dims/spacing
};

enum class VoxelKind { intensity, label };

/// Scalar 3D image on a GridSpec. Stores samples as float32 regardless of
/// the on-disk datatype (uint8 and int16 are exactly representable).
/// Immutable by convention once constructed/filled; all samplers are const.
class Volume3D {
public:
    Volume3D() = default;
    Volume3D(GridSpec grid, VoxelKind kind, float fill = 0.0f);

    const GridSpec& grid() const { return grid_; }
    const std::array<int, 3>& dims() const { return grid_.dims; }
    const Eigen::Vector3d& spacing() const { return grid_.spacing; }
    const Eigen::Vector3d& origin() const { return grid_.origin; }
    Eigen::Matrix4d affine() const { return grid_.affine(); }
    VoxelKind kind() const { return kind_; }
    void set_kind(VoxelKind k) { kind_ = k; }

    std::size_t num_voxels() const { return data_.size(); }
    float& at(int i, int j, int k) { return data_[index_of(i, j, k)]; }
    float at(int i, int j, int k) const { return data_[index_of(i, j, k)]; }
    float& operator()(int i, int j, int k) { return at(i, j, k); }
    float operator()(int i, int j, int k) const { return at(i, j, k); }
    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }
    const float* slice_ptr(int k) const { return data_.data() + static_cast<std::size_t>(k) * grid_.slice_size(); }
    float* slice_ptr(int k) { return data_.data() + static_cast<std::size_t>(k) * grid_.slice_size(); }

    std::size_t index_of(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * grid_.dims[1] + j) * grid_.dims[0] + i;
    }
    bool in_bounds(int i, int j, int k) const {
        return i >= 0 && i < grid_.dims[0] && j >= 0 && j < grid_.dims[1] && k >= 0 && k < grid_.dims[2];
    }

    /// Trilinear interpolation at a world point. Points outside the hull of
    /// voxel centers return 0 (background convention).
    float sample_trilinear(const Eigen::Vector3d& world) const;

    /// Nearest-neighbor label lookup at a world point; out of bounds -> 0.
    /// Labels are never blended.
    int sample_nearest_label(const Eigen::Vector3d& world) const;

    Eigen::Vector3d world_from_voxel(double i, double j, double k) const {
        return grid_.voxel_center(i, j, k);
    }

private:
    GridSpec grid_;
    VoxelKind kind_ = VoxelKind::intensity;
    std::vector<float> data_;
};

/// World-space world = A * voxel for a 4x4 homogeneous affine; used as the
/// independent oracle in tests and by the NIfTI reorientation code.
Eigen::Vector3d apply_affine(const Eigen::Matrix4d& a, const Eigen::Vector3d& p);

} // namespace cordreg
