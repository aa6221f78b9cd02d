#pragma once

// DH forward kinematics of the 7-DOF arm (first six joints locate the
// end-effector), workspace sampling, reachability queries, a damped
// least-squares IK solver, and a box-chassis clearance check.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "karo/spec.hpp"

namespace karo {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

// 4x4 homogeneous transform with orthonormal rotation block.
class Pose {
public:
    Pose() {
        m_.fill(0.0);
        m_[0] = m_[5] = m_[10] = m_[15] = 1.0;
    }

    double& at(int r, int c) { return m_[r * 4 + c]; }
    double at(int r, int c) const { return m_[r * 4 + c]; }

    Vec3 translation() const { return {at(0, 3), at(1, 3), at(2, 3)}; }

    Pose operator*(const Pose& o) const {
        Pose out;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                double s = 0.0;
                for (int k = 0; k < 4; ++k) s += at(r, k) * o.at(k, c);
                out.at(r, c) = s;
            }
        return out;
    }

    // Max deviation of the rotation block from orthonormality plus the
    // bottom-row constraint; 0 for an exact rigid transform.
    double rigidity_defect() const {
        double defect = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += at(k, i) * at(k, j);
                defect = std::max(defect, std::abs(s - (i == j ? 1.0 : 0.0)));
            }
        double det =
            at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
            at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
            at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
        defect = std::max(defect, std::abs(det - 1.0));
        for (int c = 0; c < 3; ++c) defect = std::max(defect, std::abs(at(3, c)));
        defect = std::max(defect, std::abs(at(3, 3) - 1.0));
        return defect;
    }

private:
    std::array<double, 16> m_;
};

struct JointVector {
    std::array<double, 6> q{};  // theta1..theta3, d4, theta5, theta6

    double& operator[](size_t i) { return q[i]; }
    double operator[](size_t i) const { return q[i]; }
};

struct JointRangeError : std::domain_error {
    JointRangeError(size_t joint, double value)
        : std::domain_error("joint " + std::to_string(joint + 1) + " value " +
                            std::to_string(value) + " out of range") {}
};

inline bool in_range(const DHRow& row, double q) {
    return q >= row.range_min - 1e-12 && q <= row.range_max + 1e-12;
}

inline bool in_range(const ManipulatorSpec& spec, const JointVector& q) {
    for (size_t i = 0; i < spec.dh_rows.size(); ++i)
        if (!in_range(spec.dh_rows[i], q[i])) return false;
    return true;
}

// Single-row DH transform: theta varies for revolute rows, d for prismatic.
inline Pose dh_transform(const DHRow& row, double q) {
    if (!in_range(row, q)) {
        size_t idx = 0;  // row index unknown here; report joint 1-relative value
        throw JointRangeError(idx, q);
    }
    double theta = row.theta_offset + (row.kind == JointKind::Revolute ? q : 0.0);
    double d = row.d + (row.kind == JointKind::Prismatic ? q : 0.0);
    double ct = std::cos(theta), st = std::sin(theta);
    double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
    Pose a;
    a.at(0, 0) = ct;  a.at(0, 1) = -st * ca; a.at(0, 2) = st * sa;   a.at(0, 3) = row.r * ct;
    a.at(1, 0) = st;  a.at(1, 1) = ct * ca;  a.at(1, 2) = -ct * sa;  a.at(1, 3) = row.r * st;
    a.at(2, 0) = 0.0; a.at(2, 1) = sa;       a.at(2, 2) = ca;        a.at(2, 3) = d;
    a.at(3, 0) = 0.0; a.at(3, 1) = 0.0;      a.at(3, 2) = 0.0;       a.at(3, 3) = 1.0;
    return a;
}

// Product A1*A2*...*A6; the translation is the end-effector position in
// the arm base frame.
inline Pose fk_pose(const ManipulatorSpec& spec, const JointVector& q) {
    Pose t;
    for (size_t i = 0; i < spec.dh_rows.size(); ++i) {
        if (!in_range(spec.dh_rows[i], q[i])) throw JointRangeError(i, q[i]);
        t = t * dh_transform(spec.dh_rows[i], q[i]);
    }
    return t;
}

// Positions of each joint-frame origin (base first, end-effector last);
// consecutive pairs form the line-segment skeleton of the arm.
inline std::vector<Vec3> fk_skeleton(const ManipulatorSpec& spec, const JointVector& q) {
    std::vector<Vec3> pts;
    Pose t;
    pts.push_back(t.translation());
    for (size_t i = 0; i < spec.dh_rows.size(); ++i) {
        if (!in_range(spec.dh_rows[i], q[i])) throw JointRangeError(i, q[i]);
        t = t * dh_transform(spec.dh_rows[i], q[i]);
        pts.push_back(t.translation());
    }
    return pts;
}

enum class SampleStrategy { Grid, Random };

struct WorkspaceCloud {
    std::vector<Vec3> points;  // end-effector positions, arm base frame
    std::vector<JointVector> joints;
    SampleStrategy strategy = SampleStrategy::Grid;
    int density = 0;  // per-revolute-joint resolution (grid) or sample count (random)
    uint64_t seed = 0;
};

// Grid resolution for the prismatic joint when `density` applies to the
// revolute joints; keeps the default 15-per-revolute cloud tractable.
inline int prismatic_resolution(int revolute_resolution) {
    return std::max(2, (revolute_resolution * 3 + 2) / 5);
}

// Deterministic cloud: grid strategy uses `density` samples per revolute
// joint (9-per-prismatic at the default 15); random strategy draws
// `density` joint vectors from a seeded generator.
inline WorkspaceCloud workspace_sample(const ManipulatorSpec& spec, SampleStrategy strategy,
                                       int density, uint64_t seed = 0) {
    if (density <= 0) throw std::invalid_argument("workspace density must be positive");
    WorkspaceCloud cloud;
    cloud.strategy = strategy;
    cloud.density = density;
    cloud.seed = seed;

    const size_t n = spec.dh_rows.size();
    if (strategy == SampleStrategy::Grid) {
        std::vector<int> res(n);
        size_t total = 1;
        for (size_t i = 0; i < n; ++i) {
            res[i] = spec.dh_rows[i].kind == JointKind::Prismatic ? prismatic_resolution(density)
                                                                  : density;
            if (spec.dh_rows[i].range_max == spec.dh_rows[i].range_min) res[i] = 1;
            total *= size_t(res[i]);
        }
        cloud.points.reserve(total);
        cloud.joints.reserve(total);
        std::vector<int> idx(n, 0);
        JointVector q;
        for (size_t flat = 0; flat < total; ++flat) {
            size_t rem = flat;
            for (size_t i = 0; i < n; ++i) {
                idx[i] = int(rem % size_t(res[i]));
                rem /= size_t(res[i]);
                const auto& row = spec.dh_rows[i];
                q[i] = res[i] == 1 ? row.range_min
                                   : row.range_min + (row.range_max - row.range_min) *
                                                         double(idx[i]) / double(res[i] - 1);
            }
            cloud.joints.push_back(q);
            cloud.points.push_back(fk_pose(spec, q).translation());
        }
    } else {
        // Seeded per-sample so the cloud is identical regardless of how the
        // sample index range is partitioned across workers.
        for (int s = 0; s < density; ++s) {
            std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * uint64_t(s + 1)));
            JointVector q;
            for (size_t i = 0; i < n; ++i) {
                const auto& row = spec.dh_rows[i];
                double u = double(rng()) / double(std::mt19937_64::max());
                q[i] = row.range_min + (row.range_max - row.range_min) * u;
            }
            cloud.joints.push_back(q);
            cloud.points.push_back(fk_pose(spec, q).translation());
        }
    }
    return cloud;
}

// True iff some cloud point lies within tol of the query point.
inline bool reachability_query(const WorkspaceCloud& cloud, const Vec3& point, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("reachability tolerance must be positive");
    double tol2 = tol * tol;
    for (const auto& p : cloud.points) {
        Vec3 d = p - point;
        if (d.dot(d) <= tol2) return true;
    }
    return false;
}

struct IkResult {
    bool converged = false;
    JointVector q;
    double residual = 0.0;  // |fk(q).position - target|, m
    int iterations = 0;
};

namespace detail {

// Damped least-squares position IK on a finite-difference Jacobian from a
// single start.  The damping adapts Levenberg-Marquardt style: shrink on an
// accepted step, grow and retry on a rejected one.  Deterministic.
inline IkResult ik_descend(const ManipulatorSpec& spec, const Vec3& target, const JointVector& q0,
                           double tol, int max_iters) {
    constexpr double kDampingInit = 0.02;
    constexpr double kDampingMin = 1e-4;
    constexpr double kDampingMax = 10.0;
    constexpr double kFdStep = 1e-6;
    const size_t n = spec.dh_rows.size();
    if (!in_range(spec, q0)) throw JointRangeError(0, q0[0]);

    auto clamp_q = [&](JointVector& q) {
        for (size_t i = 0; i < n; ++i) {
            const auto& row = spec.dh_rows[i];
            q[i] = std::clamp(q[i], row.range_min, row.range_max);
        }
    };

    IkResult best;
    best.q = q0;
    Vec3 err = target - fk_pose(spec, q0).translation();
    best.residual = err.norm();
    if (best.residual <= tol) {
        best.converged = true;
        return best;
    }

    JointVector q = q0;
    double damping = kDampingInit;
    double current_res = best.residual;
    for (int iter = 1; iter <= max_iters; ++iter) {
        // 3 x n Jacobian by central differences, respecting joint limits.
        double jac[3][6];
        for (size_t j = 0; j < n; ++j) {
            const auto& row = spec.dh_rows[j];
            double lo = std::max(row.range_min, q[j] - kFdStep);
            double hi = std::min(row.range_max, q[j] + kFdStep);
            double span = hi - lo;
            JointVector qa = q, qb = q;
            qa[j] = lo;
            qb[j] = hi;
            Vec3 pa = fk_pose(spec, qa).translation();
            Vec3 pb = fk_pose(spec, qb).translation();
            if (span <= 0.0) span = 1.0;
            jac[0][j] = (pb.x - pa.x) / span;
            jac[1][j] = (pb.y - pa.y) / span;
            jac[2][j] = (pb.z - pa.z) / span;
        }

        // dq = J^T (J J^T + lambda^2 I)^-1 err   (3x3 solve)
        double a[3][3];
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                double s = 0.0;
                for (size_t k = 0; k < n; ++k) s += jac[r][k] * jac[c][k];
                a[r][c] = s + (r == c ? damping * damping : 0.0);
            }
        double e[3] = {err.x, err.y, err.z};
        // Gaussian elimination with partial pivoting on the 3x3 system.
        int piv[3] = {0, 1, 2};
        for (int col = 0; col < 3; ++col) {
            int p = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::abs(a[r][col]) > std::abs(a[p][col])) p = r;
            if (p != col) {
                for (int cc = 0; cc < 3; ++cc) std::swap(a[col][cc], a[p][cc]);
                std::swap(e[col], e[p]);
                std::swap(piv[col], piv[p]);
            }
            for (int r = col + 1; r < 3; ++r) {
                double f = a[r][col] / a[col][col];
                for (int cc = col; cc < 3; ++cc) a[r][cc] -= f * a[col][cc];
                e[r] -= f * e[col];
            }
        }
        double y[3];
        for (int r = 2; r >= 0; --r) {
            double s = e[r];
            for (int cc = r + 1; cc < 3; ++cc) s -= a[r][cc] * y[cc];
            y[r] = s / a[r][r];
        }

        JointVector qn = q;
        for (size_t j = 0; j < n; ++j) {
            double dq = 0.0;
            for (int r = 0; r < 3; ++r) dq += jac[r][j] * y[r];
            qn[j] += dq;
        }
        clamp_q(qn);

        Vec3 err_n = target - fk_pose(spec, qn).translation();
        double res = err_n.norm();
        best.iterations = iter;
        if (res < current_res) {
            q = qn;
            err = err_n;
            current_res = res;
            damping = std::max(damping * 0.5, kDampingMin);
            if (res < best.residual) {
                best.residual = res;
                best.q = q;
            }
            if (res <= tol) {
                best.converged = true;
                return best;
            }
        } else {
            damping = damping * 4.0;  // reject: stay put, damp harder
            if (damping > kDampingMax) break;  // fully damped and still stuck
        }
    }
    return best;  // best residual achieved; converged stays false
}

}  // namespace detail

// Position IK: damped least-squares descent from the caller's start.  If
// that stalls in a local minimum (typically against a joint limit), restart
// from the nearest entries of a coarse deterministic workspace atlas.
inline IkResult ik_solve(const ManipulatorSpec& spec, const Vec3& target, const JointVector& q0,
                         double tol = 1e-4, int max_iters = 400) {
    IkResult best = detail::ik_descend(spec, target, q0, tol, max_iters);
    if (best.converged) return best;

    constexpr int kAtlasResolution = 7;
    constexpr size_t kRestarts = 32;
    WorkspaceCloud atlas = workspace_sample(spec, SampleStrategy::Grid, kAtlasResolution);
    std::vector<size_t> order(atlas.points.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto dist2 = [&](size_t i) {
        Vec3 d = atlas.points[i] - target;
        return d.dot(d);
    };
    size_t take = std::min(kRestarts, order.size());
    std::partial_sort(order.begin(), order.begin() + take, order.end(),
                      [&](size_t a, size_t b) { return dist2(a) < dist2(b); });
    for (size_t k = 0; k < take; ++k) {
        IkResult r = detail::ik_descend(spec, target, atlas.joints[order[k]], tol, max_iters);
        r.iterations += best.iterations;
        if (r.residual < best.residual) best = r;
        if (best.converged) return best;
    }
    return best;
}

inline IkResult ik_solve(const ManipulatorSpec& spec, const Pose& target, const JointVector& q0,
                         double tol = 1e-4, int max_iters = 400) {
    return ik_solve(spec, target.translation(), q0, tol, max_iters);
}

// Axis-aligned chassis box in ground coordinates: x along travel, z up,
// origin at chassis center on the ground plane.
struct ChassisBox {
    Vec3 min, max;
};

inline ChassisBox chassis_box(const RobotSpec& spec) {
    const auto& f = spec.footprint;
    double top = spec.manipulator.mount_height_m;  // arm mounts flush with the box top
    return {{-f.length_m / 2.0, -f.width_m / 2.0, 0.0}, {f.length_m / 2.0, f.width_m / 2.0, top}};
}

inline double point_box_signed_distance(const Vec3& p, const ChassisBox& box) {
    double dx = std::max({box.min.x - p.x, 0.0, p.x - box.max.x});
    double dy = std::max({box.min.y - p.y, 0.0, p.y - box.max.y});
    double dz = std::max({box.min.z - p.z, 0.0, p.z - box.max.z});
    double outside = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (outside > 0.0) return outside;
    double inside = std::min({p.x - box.min.x, box.max.x - p.x, p.y - box.min.y, box.max.y - p.y,
                              p.z - box.min.z, box.max.z - p.z});
    return -inside;
}

inline Vec3 arm_base_offset(const RobotSpec& spec) {
    return {spec.manipulator.mount_forward_m, 0.0, spec.manipulator.mount_height_m};
}

// Signed clearance of the arm's line-segment skeleton against the chassis
// box, ground coordinates.  Negative iff some sampled skeleton point
// penetrates the box.  The first skeleton segment (base mast) is skipped:
// it passes through the mount by construction.
inline double body_clearance(const RobotSpec& spec, const JointVector& q) {
    constexpr int kSamplesPerSegment = 16;
    ChassisBox box = chassis_box(spec);
    Vec3 base = arm_base_offset(spec);
    auto skeleton = fk_skeleton(spec.manipulator, q);
    double clearance = std::numeric_limits<double>::infinity();
    for (size_t s = 1; s + 1 < skeleton.size(); ++s) {
        Vec3 a = skeleton[s] + base;
        Vec3 b = skeleton[s + 1] + base;
        for (int k = 0; k <= kSamplesPerSegment; ++k) {
            Vec3 p = a + (b - a) * (double(k) / kSamplesPerSegment);
            clearance = std::min(clearance, point_box_signed_distance(p, box));
        }
    }
    return clearance;
}

}  // namespace karo
