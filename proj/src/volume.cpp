#include "cordreg/volume.hpp"

#include <cmath>

namespace cordreg {

Eigen::Matrix4d GridSpec::affine() const {
    Eigen::Matrix4d a = Eigen::Matrix4d::Identity();
    a(0, 0) = spacing.x();
    a(1, 1) = spacing.y();
    a(2, 2) = spacing.z();
    a.block<3, 1>(0, 3) = origin;
    return a;
}

bool GridSpec::approx_equal(const GridSpec& other, double tol) const {
    return dims == other.dims && (spacing - other.spacing).cwiseAbs().maxCoeff() <= tol &&
           (origin - other.origin).cwiseAbs().maxCoeff() <= tol;
}

void GridSpec::validate() const {
    if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1)
        throw DataError("grid: all dims must be >= 1");
    if (!(spacing.x() > 0.0 && spacing.y() > 0.0 && spacing.z() > 0.0))
        throw DataError("grid: all spacings must be > 0");
}

Volume3D::Volume3D(GridSpec grid, VoxelKind kind, float fill) : grid_(grid), kind_(kind) {
    grid_.validate();
    data_.assign(grid_.num_voxels(), fill);
}

float Volume3D::sample_trilinear(const Eigen::Vector3d& world) const {
    const Eigen::Vector3d v = grid_.voxel_from_world(world);
    const int nx = grid_.dims[0], ny = grid_.dims[1], nz = grid_.dims[2];
    if (v.x() < 0.0 || v.x() > nx - 1 || v.y() < 0.0 || v.y() > ny - 1 || v.z() < 0.0 ||
        v.z() > nz - 1)
        return 0.0f;
    const int i0 = static_cast<int>(std::floor(v.x()));
    const int j0 = static_cast<int>(std::floor(v.y()));
    const int k0 = static_cast<int>(std::floor(v.z()));
    const int i1 = std::min(i0 + 1, nx - 1);
    const int j1 = std::min(j0 + 1, ny - 1);
    const int k1 = std::min(k0 + 1, nz - 1);
    const float fx = static_cast<float>(v.x() - i0);
    const float fy = static_cast<float>(v.y() - j0);
    const float fz = static_cast<float>(v.z() - k0);

    const float c000 = at(i0, j0, k0), c100 = at(i1, j0, k0);
    const float c010 = at(i0, j1, k0), c110 = at(i1, j1, k0);
    const float c001 = at(i0, j0, k1), c101 = at(i1, j0, k1);
    const float c011 = at(i0, j1, k1), c111 = at(i1, j1, k1);

    const float c00 = c000 + fx * (c100 - c000);
    const float c10 = c010 + fx * (c110 - c010);
    const float c01 = c001 + fx * (c101 - c001);
    const float c11 = c011 + fx * (c111 - c011);
    const float c0 = c00 + fy * (c10 - c00);
    const float c1 = c01 + fy * (c11 - c01);
    return c0 + fz * (c1 - c0);
}

int Volume3D::sample_nearest_label(const Eigen::Vector3d& world) const {
    const Eigen::Vector3d v = grid_.voxel_from_world(world);
    const int i = static_cast<int>(std::lround(v.x()));
    const int j = static_cast<int>(std::lround(v.y()));
    const int k = static_cast<int>(std::lround(v.z()));
    if (!in_bounds(i, j, k)) return 0;
    return static_cast<int>(std::lround(at(i, j, k)));
}

Eigen::Vector3d apply_affine(const Eigen::Matrix4d& a, const Eigen::Vector3d& p) {
    Eigen::Vector4d h(p.x(), p.y(), p.z(), 1.0);
    Eigen::Vector4d r = a * h;
    return r.head<3>();
}

} // namespace cordreg
