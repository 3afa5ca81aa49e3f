#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "kipt/errors.hpp"

namespace kipt {

enum class Family { Gaussian, IMQ, WendlandCS };

Family family_from_name(const std::string& name);
std::string family_name(Family family);

/// Radial kernel K(z, z') = Phi(eps * ||z - z'||), normalized so Phi(0) = 1.
///
/// All evaluation goes through the squared-distance profile g(s) := Phi(eps * sqrt(s)),
/// which is twice continuously differentiable at s = 0 for every supported family; this
/// keeps derivative values finite at coincident points.
class KernelSpec {
public:
    KernelSpec(Family family, double epsilon, int dim);

    Family family() const { return family_; }
    double epsilon() const { return epsilon_; }
    int dim() const { return dim_; }

    /// Wendland smoothness integer l = floor(dim/2) + 4 (meaningful for WendlandCS only).
    int wendland_l() const { return dim_ / 2 + 4; }

private:
    Family family_;
    double epsilon_;
    int dim_;

    // Compactly supported profile, kept in two forms (see kernel.cpp): the expanded
    // series in r for small r where the factored form divides by r, and the factored
    // (1-r)^k * polynomial form elsewhere, which stays accurate up to the support edge.
    std::vector<double> cs_p_, cs_c1_, cs_c2_;
    std::vector<double> cs_cubic_, cs_q_, cs_s_;

    friend double profile_eval(const KernelSpec&, double, int);
};

/// g^(order)(s) where g(s) = Phi(eps * sqrt(s)). order in {0, 1, 2}.
double profile_eval(const KernelSpec& spec, double s, int order);

/// K(z, zp) = g(||z - zp||^2).
double kernel_eval(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> z,
                   Eigen::Ref<const Eigen::VectorXd> zp);

/// d/dz^(m) K(z, zp), m is a 0-based coordinate index. Finite everywhere, including z = zp.
double kernel_grad1(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> z,
                    Eigen::Ref<const Eigen::VectorXd> zp, int m);

/// d^2/(dz^(m) dzp^(n)) K(z, zp), mixed partial across the two arguments (0-based indices).
double kernel_hess12(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> z,
                     Eigen::Ref<const Eigen::VectorXd> zp, int m, int n);

namespace detail {

// Shared scalar expressions so that every assembly path produces bit-identical entries.
inline double grad_component(double g1, double dm) { return 2.0 * dm * g1; }

inline double hess_component(double g1, double g2, double dm, double dn, bool diagonal) {
    double cross = -4.0 * dm * dn * g2;
    return diagonal ? -2.0 * g1 + cross : cross;
}

inline double squared_distance(Eigen::Ref<const Eigen::VectorXd> z,
                               Eigen::Ref<const Eigen::VectorXd> zp) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double d = z[i] - zp[i];
        s += d * d;
    }
    return s;
}

}  // namespace detail

}  // namespace kipt
