#ifndef FMAGENT_WORKLOADS_HERMITE_HPP
#define FMAGENT_WORKLOADS_HERMITE_HPP

#include <fmagent/workloads/optimize.hpp>

#include <Eigen/Core>

#include <array>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace fmagent::workloads {

    inline constexpr double kHermitePenalty = 1e12;

    /// Physicists' Hermite polynomial H_n, exact integer coefficients in
    /// degree-descending order. n in [0, 20].
    std::vector<std::int64_t> hermite_coefficients(int n);

    /// P = c0 H0 + c1 H4 + c2 H8 + c3 H12 with c3 chosen so that P(0) = 0.
    struct HermiteCoeffs {
        double c0 = 0.0;
        double c1 = 0.0;
        double c2 = 0.0;

        double c3() const;
        Eigen::Vector3d vector() const { return {c0, c1, c2}; }
        static HermiteCoeffs from(const Eigen::Ref<const Eigen::VectorXd>& v) { return {v[0], v[1], v[2]}; }
    };

    /// Search box for (c0, c1, c2).
    std::array<std::pair<double, double>, 3> hermite_bounds();

    /// Coefficients of the published optimum.
    HermiteCoeffs published_hermite_coeffs();

    /// Degree-12 polynomial P, degree-descending.
    Eigen::VectorXd hermite_polynomial(const HermiteCoeffs& c);

    struct HermiteQuotient {
        Eigen::VectorXd gq; ///< P(x)/x^2, 11 coefficients, degree-descending
        double leading_p = 0.0;
    };

    /// gq = P / x^2, negated when P's leading coefficient is negative.
    HermiteQuotient build_quotient(const HermiteCoeffs& c);

    /// Roots of a degree-descending polynomial via the companion matrix.
    /// Leading zeros are stripped; trailing zeros contribute roots at 0.
    std::vector<std::complex<double>> polynomial_roots(const Eigen::VectorXd& coeffs);

    /// Horner evaluation of a degree-descending polynomial.
    template <typename Scalar>
    Scalar polyval(const Eigen::Ref<const Eigen::VectorXd>& coeffs, Scalar x)
    {
        Scalar acc(0);
        for (Eigen::Index i = 0; i < coeffs.size(); ++i)
            acc = acc * x + coeffs[i];
        return acc;
    }

    /// r_max^2 / (2 pi) over the largest positive real root of gq; 0 when
    /// there is none; kHermitePenalty for degenerate gq.
    double uncertainty_objective(const HermiteCoeffs& c);

    struct HermiteSearchResult {
        HermiteCoeffs coeffs;
        double objective = 0.0;
        DeResult de;
    };

    /// Differential evolution over hermite_bounds() (best/1/bin, population
    /// 30 per dimension, 300 generations, crossover 0.7, polish).
    HermiteSearchResult de_search(std::uint64_t seed = 42, DeOptions options = {});

} // namespace fmagent::workloads

#endif
