#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <vector>

namespace filament {

using Vec3 = Eigen::Vector3d;

/// Curvature below which the normal direction is considered undefined.
inline constexpr double kCurvatureFloor = 1e-8;
/// Largest fraction of nodes allowed below the floor before frames are refused.
inline constexpr double kMaxDegenerateFraction = 0.01;

/// Periodic sampled space curve on a uniform grid s_j = j L / N.
///
/// A closed curve has zero period shift. Helical curves are supported by
/// a nonzero shift: gamma(s + L) = gamma(s) + period_shift.
class DiscreteCurve {
public:
    DiscreteCurve(std::vector<Vec3> points, double length, Vec3 period_shift = Vec3::Zero());

    const std::vector<Vec3>& points() const { return points_; }
    const Vec3& operator[](std::size_t j) const { return points_[j]; }
    std::size_t size() const { return points_.size(); }
    double length() const { return length_; }
    double spacing() const { return length_ / static_cast<double>(points_.size()); }
    const Vec3& period_shift() const { return shift_; }

private:
    std::vector<Vec3> points_;
    double length_;
    Vec3 shift_;
};

struct FrenetFrame {
    std::vector<Vec3> T;
    std::vector<Vec3> N;
    std::vector<Vec3> B;
};

/// Intrinsic description: curvature and torsion sampled on the grid.
class GeometryProfile {
public:
    GeometryProfile(std::vector<double> curvature, std::vector<double> torsion, double length,
                    std::vector<std::size_t> continued_nodes = {});

    const std::vector<double>& curvature() const { return k_; }
    const std::vector<double>& torsion() const { return tau_; }
    double length() const { return length_; }
    std::size_t size() const { return k_.size(); }
    double spacing() const { return length_ / static_cast<double>(k_.size()); }
    /// Nodes below the curvature floor whose torsion was copied from a neighbour.
    const std::vector<std::size_t>& continued_nodes() const { return continued_; }

private:
    std::vector<double> k_;
    std::vector<double> tau_;
    double length_;
    std::vector<std::size_t> continued_;
};

/// Frames and profile from a single pass over the curve derivatives.
struct CurveGeometry {
    FrenetFrame frame;
    GeometryProfile profile;
    std::vector<double> speed;  ///< |d gamma / d s| at the nodes; 1 under arclength parameterization
};

CurveGeometry analyze_curve(const DiscreteCurve& curve);
FrenetFrame frames_from_curve(const DiscreteCurve& curve);
GeometryProfile profile_from_curve(const DiscreteCurve& curve);

/// Spectral first derivative of positions with respect to the grid parameter.
std::vector<Vec3> curve_derivative(const DiscreteCurve& curve, int order = 1);

struct OrthonormalFrame {
    Vec3 T = Vec3::UnitX();
    Vec3 N = Vec3::UnitY();
    Vec3 B = Vec3::UnitZ();
};

struct Reconstruction {
    DiscreteCurve curve;
    Vec3 end_point;             ///< integrated gamma(L)
    OrthonormalFrame end_frame; ///< integrated frame at s = L
    double closure_defect;      ///< |gamma(L) - gamma(0)|
};

/// Integrate the Frenet-Serret system from (initial_point, initial_frame) with
/// classical RK4 and Gram-Schmidt re-orthonormalization after every step.
///
/// Closure is not enforced. When the integrated frame returns to the initial
/// frame (within 1e-6) the curve is given the period shift gamma(L) - gamma(0),
/// which makes helical profiles round-trip through the spectral routines.
Reconstruction reconstruct_curve(const GeometryProfile& profile, const Vec3& initial_point,
                                 const OrthonormalFrame& initial_frame);

/// Resample at N nodes equally spaced in arclength and update L.
DiscreteCurve reparameterize(const DiscreteCurve& curve);

/// Rigid alignment of b onto a (Kabsch). Returns max |a_j - (R b_j + t)|.
double rigid_alignment_error(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

}  // namespace filament
