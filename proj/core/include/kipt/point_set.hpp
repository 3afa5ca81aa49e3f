#pragma once

#include <Eigen/Core>
#include <span>

#include "kipt/errors.hpp"

namespace kipt {

/// Axis-aligned box domain with componentwise lower < upper.
class Box {
public:
    Box(Eigen::VectorXd lower, Eigen::VectorXd upper);

    /// Cube [lo, hi]^dim.
    static Box cube(double lo, double hi, int dim);

    int dim() const { return static_cast<int>(lower_.size()); }
    const Eigen::VectorXd& lower() const { return lower_; }
    const Eigen::VectorXd& upper() const { return upper_; }

    bool contains(Eigen::Ref<const Eigen::VectorXd> z) const;

    /// Affine map of a unit-cube coordinate into the box; exact at both endpoints,
    /// clamped so the closed-box invariant survives rounding.
    double map_unit(double u, int coord) const;

private:
    Eigen::VectorXd lower_, upper_;
};

/// Ordered list of d-dimensional points inside a box, stored as matrix columns.
class PointSet {
public:
    PointSet(Eigen::MatrixXd points, Box box);

    int dim() const { return static_cast<int>(points_.rows()); }
    int size() const { return static_cast<int>(points_.cols()); }
    const Eigen::MatrixXd& points() const { return points_; }
    const Box& box() const { return box_; }

    Eigen::MatrixXd::ConstColXpr point(int i) const { return points_.col(i); }

    /// The subset at the given indices, in the given order.
    PointSet subset(std::span<const int> indices) const;

private:
    Eigen::MatrixXd points_;  // dim x size
    Box box_;
};

}  // namespace kipt
