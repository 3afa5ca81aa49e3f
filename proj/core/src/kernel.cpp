#include "kipt/kernel.hpp"

#include <cmath>
#include <cstdint>

namespace kipt {

namespace {

// Binomial coefficient as an exact integer (arguments stay small: n <= ~20 here).
std::int64_t binomial(int n, int k) {
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Expanded coefficients p_k of the compactly supported profile
//   Phi(r) = (1-r)_+^{l+3} * (a r^3 + b r^2 + c r + 15) / 15,
//   a = l^3 + 9l^2 + 23l + 15, b = 6l^2 + 36l + 45, c = 15l + 45,
// normalized by its value at r = 0. The profile is C^6 as a radial function, so the
// odd coefficients p_1, p_3, p_5 cancel exactly and the s-derivatives below are
// plain polynomials in r.
std::vector<double> cs_coefficients(int l) {
    const int deg = l + 6;
    const std::int64_t a = std::int64_t(l) * l * l + 9 * l * l + 23 * l + 15;
    const std::int64_t b = 6 * l * l + 36 * l + 45;
    const std::int64_t c = 15 * l + 45;
    const std::int64_t e = 15;

    std::vector<std::int64_t> p(deg + 1, 0);
    const std::int64_t cubic[4] = {e, c, b, a};
    for (int i = 0; i <= l + 3; ++i) {
        const std::int64_t binom = binomial(l + 3, i) * ((i % 2 == 0) ? 1 : -1);
        for (int j = 0; j <= 3; ++j) p[i + j] += binom * cubic[j];
    }

    std::vector<double> out(deg + 1);
    const double scale = static_cast<double>(p[0]);  // value at r = 0 (equals 15/15 * 15 = 15)
    for (int k = 0; k <= deg; ++k) out[k] = static_cast<double>(p[k]) / scale;
    return out;
}

double poly_eval(const std::vector<double>& coef, double r) {
    double acc = 0.0;
    for (std::size_t k = coef.size(); k-- > 0;) acc = acc * r + coef[k];
    return acc;
}

// coefficients of (1-r) * p'(r) - m * p(r)
std::vector<double> factored_step(const std::vector<double>& p, int m) {
    std::vector<double> out(p.size(), 0.0);
    for (std::size_t k = 1; k < p.size(); ++k) {
        out[k - 1] += static_cast<double>(k) * p[k];
        out[k] -= static_cast<double>(k) * p[k];
    }
    for (std::size_t k = 0; k < p.size(); ++k) out[k] -= m * p[k];
    return out;
}

double powi(double x, int n) {
    double acc = 1.0;
    for (int i = 0; i < n; ++i) acc *= x;
    return acc;
}

// Below this radius the expanded series is used; the factored form divides by r^3.
constexpr double kCsSeriesRadius = 0.2;

}  // namespace

Family family_from_name(const std::string& name) {
    if (name == "gaussian") return Family::Gaussian;
    if (name == "imq") return Family::IMQ;
    if (name == "wendland") return Family::WendlandCS;
    throw UsageError("unknown kernel family: " + name);
}

std::string family_name(Family family) {
    switch (family) {
        case Family::Gaussian: return "gaussian";
        case Family::IMQ: return "imq";
        case Family::WendlandCS: return "wendland";
    }
    throw UsageError("invalid kernel family value");
}

KernelSpec::KernelSpec(Family family, double epsilon, int dim)
    : family_(family), epsilon_(epsilon), dim_(dim) {
    if (!(epsilon > 0.0)) throw UsageError("kernel shape parameter must be positive");
    if (dim < 1) throw UsageError("kernel dimension must be at least 1");
    if (family_ == Family::WendlandCS) {
        cs_p_ = cs_coefficients(wendland_l());
        // g'(s)  = (eps^2 / 2) * sum_k (k+2) p_{k+2} r^k
        // g''(s) = (eps^4 / 4) * sum_k (k+4)(k+2) p_{k+4} r^k
        const int deg = static_cast<int>(cs_p_.size()) - 1;
        cs_c1_.assign(deg - 1, 0.0);
        cs_c2_.assign(deg - 3, 0.0);
        for (int k = 0; k + 2 <= deg; ++k) cs_c1_[k] = (k + 2) * cs_p_[k + 2];
        for (int k = 0; k + 4 <= deg; ++k) cs_c2_[k] = double(k + 4) * (k + 2) * cs_p_[k + 4];

        // factored form: Phi = (1-r)^L P(r), Phi' = (1-r)^{L-1} Q(r),
        // Phi'' = (1-r)^{L-2} S(r), with Q = (1-r)P' - L P and S = (1-r)Q' - (L-1)Q
        const int l = wendland_l();
        cs_cubic_ = {1.0, (15.0 * l + 45.0) / 15.0, (6.0 * l * l + 36.0 * l + 45.0) / 15.0,
                     (static_cast<double>(l) * l * l + 9.0 * l * l + 23.0 * l + 15.0) / 15.0};
        cs_q_ = factored_step(cs_cubic_, l + 3);
        cs_s_ = factored_step(cs_q_, l + 2);
    }
}

double profile_eval(const KernelSpec& spec, double s, int order) {
    if (s < 0.0) throw DomainError("profile_eval: negative squared distance");
    if (order < 0 || order > 2) throw UsageError("profile_eval: order must be 0, 1 or 2");

    const double eps = spec.epsilon();
    const double e2 = eps * eps;
    switch (spec.family()) {
        case Family::Gaussian: {
            const double g = std::exp(-e2 * s);
            if (order == 0) return g;
            if (order == 1) return -e2 * g;
            return e2 * e2 * g;
        }
        case Family::IMQ: {
            const double t = 1.0 + e2 * s;
            if (order == 0) return 1.0 / std::sqrt(t);
            if (order == 1) return -0.5 * e2 / (t * std::sqrt(t));
            return 0.75 * e2 * e2 / (t * t * std::sqrt(t));
        }
        case Family::WendlandCS: {
            if (e2 * s >= 1.0) return 0.0;  // support radius 1/eps
            const double r = eps * std::sqrt(s);
            if (r <= kCsSeriesRadius) {
                if (order == 0) return poly_eval(spec.cs_p_, r);
                if (order == 1) return 0.5 * e2 * poly_eval(spec.cs_c1_, r);
                return 0.25 * e2 * e2 * poly_eval(spec.cs_c2_, r);
            }
            const int big_l = spec.wendland_l() + 3;
            const double u = 1.0 - r;
            if (order == 0) return powi(u, big_l) * poly_eval(spec.cs_cubic_, r);
            const double dphi = powi(u, big_l - 1) * poly_eval(spec.cs_q_, r);
            if (order == 1) return 0.5 * e2 * dphi / r;
            const double d2phi = powi(u, big_l - 2) * poly_eval(spec.cs_s_, r);
            return 0.25 * e2 * e2 * (d2phi * r - dphi) / (r * r * r);
        }
    }
    throw UsageError("invalid kernel family value");
}

double kernel_eval(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> z,
                   Eigen::Ref<const Eigen::VectorXd> zp) {
    if (z.size() != spec.dim() || zp.size() != spec.dim())
        throw UsageError("kernel_eval: point dimension mismatch");
    return profile_eval(spec, detail::squared_distance(z, zp), 0);
}

double kernel_grad1(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> z,
                    Eigen::Ref<const Eigen::VectorXd> zp, int m) {
    if (z.size() != spec.dim() || zp.size() != spec.dim())
        throw UsageError("kernel_grad1: point dimension mismatch");
    if (m < 0 || m >= spec.dim()) throw UsageError("kernel_grad1: coordinate index out of range");
    const double s = detail::squared_distance(z, zp);
    return detail::grad_component(profile_eval(spec, s, 1), z[m] - zp[m]);
}

double kernel_hess12(const KernelSpec& spec, Eigen::Ref<const Eigen::VectorXd> z,
                     Eigen::Ref<const Eigen::VectorXd> zp, int m, int n) {
    if (z.size() != spec.dim() || zp.size() != spec.dim())
        throw UsageError("kernel_hess12: point dimension mismatch");
    if (m < 0 || m >= spec.dim() || n < 0 || n >= spec.dim())
        throw UsageError("kernel_hess12: coordinate index out of range");
    const double s = detail::squared_distance(z, zp);
    return detail::hess_component(profile_eval(spec, s, 1), profile_eval(spec, s, 2),
                                  z[m] - zp[m], z[n] - zp[n], m == n);
}

}  // namespace kipt
