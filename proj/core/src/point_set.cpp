#include "kipt/point_set.hpp"

#include <algorithm>

namespace kipt {

Box::Box(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size() || lower_.size() == 0)
        throw UsageError("Box: bounds must be nonempty and of equal dimension");
    for (Eigen::Index i = 0; i < lower_.size(); ++i)
        if (!(lower_[i] < upper_[i])) throw UsageError("Box: lower must be below upper");
}

Box Box::cube(double lo, double hi, int dim) {
    if (dim < 1) throw UsageError("Box: dimension must be positive");
    return Box(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
}

bool Box::contains(Eigen::Ref<const Eigen::VectorXd> z) const {
    if (z.size() != lower_.size()) return false;
    for (Eigen::Index i = 0; i < z.size(); ++i)
        if (z[i] < lower_[i] || z[i] > upper_[i]) return false;
    return true;
}

double Box::map_unit(double u, int coord) const {
    const double x = lower_[coord] * (1.0 - u) + upper_[coord] * u;
    return std::clamp(x, lower_[coord], upper_[coord]);
}

PointSet::PointSet(Eigen::MatrixXd points, Box box)
    : points_(std::move(points)), box_(std::move(box)) {
    if (points_.rows() != box_.dim())
        throw UsageError("PointSet: point dimension does not match box");
    for (Eigen::Index c = 0; c < points_.cols(); ++c)
        if (!box_.contains(points_.col(c)))
            throw UsageError("PointSet: point outside box at index " + std::to_string(c));
}

PointSet PointSet::subset(std::span<const int> indices) const {
    Eigen::MatrixXd sub(dim(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const int i = indices[k];
        if (i < 0 || i >= size()) throw UsageError("PointSet::subset: index out of range");
        sub.col(static_cast<Eigen::Index>(k)) = points_.col(i);
    }
    return PointSet(std::move(sub), box_);
}

}  // namespace kipt
