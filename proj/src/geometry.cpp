#include "filament/geometry.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

#include "filament/errors.hpp"
#include "filament/spectral.hpp"

namespace filament {

namespace {

void check_grid(std::size_t n, double length) {
    if (n < 8 || !spectral::is_power_of_two(n)) {
        throw InvalidInput("grid size must be a power of two >= 8, got " + std::to_string(n));
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw InvalidInput("domain length must be positive and finite");
    }
}

std::vector<double> component(const std::vector<Vec3>& pts, int c) {
    std::vector<double> out(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) out[j] = pts[j][c];
    return out;
}

std::size_t periodic_distance(std::size_t a, std::size_t b, std::size_t n) {
    const std::size_t d = a > b ? a - b : b - a;
    return std::min(d, n - d);
}

OrthonormalFrame gram_schmidt(const Vec3& t, const Vec3& n) {
    OrthonormalFrame f;
    f.T = t.normalized();
    f.N = (n - n.dot(f.T) * f.T).normalized();
    f.B = f.T.cross(f.N);
    return f;
}

}  // namespace

DiscreteCurve::DiscreteCurve(std::vector<Vec3> points, double length, Vec3 period_shift)
    : points_(std::move(points)), length_(length), shift_(std::move(period_shift)) {
    check_grid(points_.size(), length_);
    for (const auto& p : points_) {
        if (!p.allFinite()) throw InvalidInput("curve contains non-finite coordinates");
    }
}

GeometryProfile::GeometryProfile(std::vector<double> curvature, std::vector<double> torsion,
                                 double length, std::vector<std::size_t> continued_nodes)
    : k_(std::move(curvature)),
      tau_(std::move(torsion)),
      length_(length),
      continued_(std::move(continued_nodes)) {
    check_grid(k_.size(), length_);
    if (tau_.size() != k_.size()) throw InvalidInput("curvature and torsion sizes differ");
    for (std::size_t j = 0; j < k_.size(); ++j) {
        if (!(k_[j] >= 0.0) || !std::isfinite(k_[j]) || !std::isfinite(tau_[j])) {
            throw InvalidInput("profile requires finite k >= 0 and finite tau (node " +
                               std::to_string(j) + ")");
        }
    }
}

std::vector<Vec3> curve_derivative(const DiscreteCurve& curve, int order) {
    const std::size_t n = curve.size();
    const double len = curve.length();
    const auto s = spectral::nodes(n, len);
    const Vec3 slope = curve.period_shift() / len;
    std::vector<Vec3> out(n, Vec3::Zero());
    for (int c = 0; c < 3; ++c) {
        auto periodic = component(curve.points(), c);
        for (std::size_t j = 0; j < n; ++j) periodic[j] -= slope[c] * s[j];
        const auto d = spectral::derivative(periodic, len, order);
        for (std::size_t j = 0; j < n; ++j) out[j][c] = d[j] + (order == 1 ? slope[c] : 0.0);
    }
    return out;
}

CurveGeometry analyze_curve(const DiscreteCurve& curve) {
    const std::size_t n = curve.size();
    const auto d1 = curve_derivative(curve, 1);
    const auto d2 = curve_derivative(curve, 2);
    const auto d3 = curve_derivative(curve, 3);

    FrenetFrame frame{std::vector<Vec3>(n), std::vector<Vec3>(n), std::vector<Vec3>(n)};
    std::vector<double> k(n), tau(n), speed(n);
    std::vector<bool> good(n, false);
    std::size_t degenerate = 0;

    for (std::size_t j = 0; j < n; ++j) {
        const Vec3 c = d1[j].cross(d2[j]);
        const double sp = d1[j].norm();
        const double cn = c.norm();
        speed[j] = sp;
        if (sp <= 0.0) {
            k[j] = 0.0;
            frame.T[j] = Vec3::UnitX();
            ++degenerate;
            continue;
        }
        k[j] = cn / (sp * sp * sp);
        frame.T[j] = d1[j] / sp;
        if (k[j] < kCurvatureFloor) {
            ++degenerate;
            continue;
        }
        good[j] = true;
        frame.B[j] = c / cn;
        frame.N[j] = frame.B[j].cross(frame.T[j]);
        tau[j] = c.dot(d3[j]) / (cn * cn);
    }

    if (degenerate > 0 &&
        static_cast<double>(degenerate) > kMaxDegenerateFraction * static_cast<double>(n)) {
        throw DegenerateFrame(degenerate, n);
    }

    std::vector<std::size_t> continued;
    for (std::size_t j = 0; j < n; ++j) {
        if (good[j]) continue;
        std::size_t nearest = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (good[i] && (nearest == n || periodic_distance(i, j, n) <
                                                periodic_distance(nearest, j, n))) {
                nearest = i;
            }
        }
        // Transport the normal from the nearest regular node by the minimal
        // rotation carrying its tangent onto this one.
        const Eigen::Quaterniond rot =
            Eigen::Quaterniond::FromTwoVectors(frame.T[nearest], frame.T[j]);
        const auto f = gram_schmidt(frame.T[j], rot * frame.N[nearest]);
        frame.N[j] = f.N;
        frame.B[j] = f.B;
        tau[j] = tau[nearest];
        continued.push_back(j);
    }

    return CurveGeometry{std::move(frame),
                         GeometryProfile(std::move(k), std::move(tau), curve.length(),
                                         std::move(continued)),
                         std::move(speed)};
}

FrenetFrame frames_from_curve(const DiscreteCurve& curve) { return analyze_curve(curve).frame; }

GeometryProfile profile_from_curve(const DiscreteCurve& curve) {
    return analyze_curve(curve).profile;
}

Reconstruction reconstruct_curve(const GeometryProfile& profile, const Vec3& initial_point,
                                 const OrthonormalFrame& initial_frame) {
    const std::size_t n = profile.size();
    const double ds = profile.spacing();
    const auto& k = profile.curvature();
    const auto& tau = profile.torsion();
    const auto k_half = spectral::translate(k, profile.length(), 0.5 * ds);
    const auto tau_half = spectral::translate(tau, profile.length(), 0.5 * ds);

    struct State {
        Vec3 x, t, nrm, b;
    };
    auto rhs = [](const State& y, double kk, double tt) {
        return State{y.t, kk * y.nrm, -kk * y.t + tt * y.b, -tt * y.nrm};
    };
    auto axpy = [](const State& y, double h, const State& d) {
        return State{y.x + h * d.x, y.t + h * d.t, y.nrm + h * d.nrm, y.b + h * d.b};
    };

    const auto f0 = gram_schmidt(initial_frame.T, initial_frame.N);
    State y{initial_point, f0.T, f0.N, f0.B};
    std::vector<Vec3> pts(n);
    for (std::size_t j = 0; j < n; ++j) {
        pts[j] = y.x;
        const std::size_t next = (j + 1) % n;
        const State s1 = rhs(y, k[j], tau[j]);
        const State s2 = rhs(axpy(y, 0.5 * ds, s1), k_half[j], tau_half[j]);
        const State s3 = rhs(axpy(y, 0.5 * ds, s2), k_half[j], tau_half[j]);
        const State s4 = rhs(axpy(y, ds, s3), k[next], tau[next]);
        State z;
        z.x = y.x + ds / 6.0 * (s1.x + 2.0 * s2.x + 2.0 * s3.x + s4.x);
        z.t = y.t + ds / 6.0 * (s1.t + 2.0 * s2.t + 2.0 * s3.t + s4.t);
        z.nrm = y.nrm + ds / 6.0 * (s1.nrm + 2.0 * s2.nrm + 2.0 * s3.nrm + s4.nrm);
        const auto f = gram_schmidt(z.t, z.nrm);
        y = State{z.x, f.T, f.N, f.B};
    }

    const double frame_gap = std::max({(y.t - f0.T).cwiseAbs().maxCoeff(),
                                       (y.nrm - f0.N).cwiseAbs().maxCoeff(),
                                       (y.b - f0.B).cwiseAbs().maxCoeff()});
    const Vec3 shift = frame_gap < 1e-6 ? Vec3(y.x - pts[0]) : Vec3::Zero();
    const double defect = (y.x - pts[0]).norm();
    return Reconstruction{DiscreteCurve(std::move(pts), profile.length(), shift), y.x,
                          OrthonormalFrame{y.t, y.nrm, y.b}, defect};
}

DiscreteCurve reparameterize(const DiscreteCurve& curve) {
    const std::size_t n = curve.size();
    const double old_len = curve.length();
    const auto u = spectral::nodes(n, old_len);

    for (std::size_t j = 0; j < n; ++j) {
        const Vec3 next = j + 1 < n ? curve[j + 1] : Vec3(curve[0] + curve.period_shift());
        const double chord = (next - curve[j]).norm();
        if (!(chord > 0.0) || !std::isfinite(chord)) {
            throw SelfIntersectionSuspected("cumulative chord length is not strictly increasing at node " +
                                            std::to_string(j));
        }
    }

    const auto d1 = curve_derivative(curve, 1);
    std::vector<double> speed(n);
    for (std::size_t j = 0; j < n; ++j) speed[j] = d1[j].norm();
    const double mean_speed = spectral::mean(speed);
    const double new_len = mean_speed * old_len;
    const auto arclength = spectral::antiderivative(speed, old_len);
    for (std::size_t j = 1; j < n; ++j) {
        if (!(arclength[j] > arclength[j - 1])) {
            throw SelfIntersectionSuspected("arclength is not monotone at node " + std::to_string(j));
        }
    }
    if (!(new_len > arclength[n - 1]) || !std::isfinite(new_len)) {
        throw SelfIntersectionSuspected("arclength is not monotone at the periodic seam");
    }

    std::vector<double> periodic_arc(n);
    for (std::size_t j = 0; j < n; ++j) periodic_arc[j] = arclength[j] - mean_speed * u[j];
    const spectral::TrigInterpolant arc_interp(periodic_arc, old_len);
    auto arc_at = [&](double x) { return mean_speed * x + arc_interp.value(x); };
    auto speed_at = [&](double x) { return mean_speed + arc_interp.derivative(x); };

    const Vec3 slope = curve.period_shift() / old_len;
    std::vector<spectral::TrigInterpolant> pos;
    for (int c = 0; c < 3; ++c) {
        auto p = component(curve.points(), c);
        for (std::size_t j = 0; j < n; ++j) p[j] -= slope[c] * u[j];
        pos.emplace_back(p, old_len);
    }

    std::vector<Vec3> out(n);
    std::size_t bracket = 0;
    const double du = old_len / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double target = new_len * static_cast<double>(m) / static_cast<double>(n);
        while (bracket + 1 < n && arclength[bracket + 1] <= target) ++bracket;
        const double lo = arclength[bracket];
        const double hi = bracket + 1 < n ? arclength[bracket + 1] : new_len;
        double x = u[bracket] + du * (target - lo) / (hi - lo);
        for (int it = 0; it < 30; ++it) {
            const double step = (arc_at(x) - target) / speed_at(x);
            x -= step;
            if (std::abs(step) < 1e-15 * old_len) break;
        }
        for (int c = 0; c < 3; ++c) out[m][c] = pos[c].value(x) + slope[c] * x;
    }
    return DiscreteCurve(std::move(out), new_len, curve.period_shift());
}

double rigid_alignment_error(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    if (a.size() != b.size() || a.empty()) throw InvalidInput("alignment needs equal, non-empty point sets");
    Vec3 ca = Vec3::Zero(), cb = Vec3::Zero();
    for (std::size_t j = 0; j < a.size(); ++j) {
        ca += a[j];
        cb += b[j];
    }
    ca /= static_cast<double>(a.size());
    cb /= static_cast<double>(b.size());
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (std::size_t j = 0; j < a.size(); ++j) h += (b[j] - cb) * (a[j] - ca).transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
    const Eigen::Matrix3d r = svd.matrixV() * d * svd.matrixU().transpose();
    double err = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        err = std::max(err, (a[j] - ca - r * (b[j] - cb)).norm());
    }
    return err;
}

}  // namespace filament
