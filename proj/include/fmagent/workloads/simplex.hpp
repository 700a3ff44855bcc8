#ifndef FMAGENT_WORKLOADS_SIMPLEX_HPP
#define FMAGENT_WORKLOADS_SIMPLEX_HPP

#include <Eigen/Core>

namespace fmagent::workloads {

    enum class LpStatus { optimal, unbounded, infeasible, iteration_limit };

    struct LpResult {
        LpStatus status = LpStatus::infeasible;
        Eigen::VectorXd x;
        double objective = 0.0;
        int pivots = 0;
    };

    /// Solves  max c'x  s.t.  A x <= b,  x >= 0  with a dense tableau simplex
    /// using Bland's rule (no cycling on degenerate vertices).
    ///
    /// The origin must be feasible (b >= 0); a negative right-hand side is
    /// reported as infeasible, which is exact whenever A is elementwise
    /// nonnegative (the packing radii LP).
    LpResult maximize_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol = 1e-12);

} // namespace fmagent::workloads

#endif
