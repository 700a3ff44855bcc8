#ifndef FMAGENT_WORKLOADS_BENCHMARKS_HPP
#define FMAGENT_WORKLOADS_BENCHMARKS_HPP

#include <Eigen/Core>

#include <cmath>
#include <numbers>

namespace fmagent::workloads {

    // Standard test landscapes, negated so that higher is better.

    template <typename Derived>
    typename Derived::Scalar sphere(const Eigen::MatrixBase<Derived>& x)
    {
        return -x.squaredNorm();
    }

    template <typename Derived>
    typename Derived::Scalar rastrigin(const Eigen::MatrixBase<Derived>& x)
    {
        using Scalar = typename Derived::Scalar;
        const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
        Scalar sum = Scalar(10) * static_cast<Scalar>(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            sum += x[i] * x[i] - Scalar(10) * std::cos(two_pi * x[i]);
        return -sum;
    }

} // namespace fmagent::workloads

#endif
