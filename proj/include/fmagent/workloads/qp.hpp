#ifndef FMAGENT_WORKLOADS_QP_HPP
#define FMAGENT_WORKLOADS_QP_HPP

#include <Eigen/Core>

#include <vector>

namespace fmagent::workloads {

    enum class QpStatus { optimal, infeasible, not_convex, degenerate, iteration_limit };

    struct QpResult {
        QpStatus status = QpStatus::infeasible;
        Eigen::VectorXd x;
        Eigen::VectorXd multipliers; ///< one per constraint row, zero when inactive
        double objective = 0.0;
        std::vector<int> active;
        int iterations = 0;
    };

    /// Strictly convex inequality-constrained QP
    ///
    ///     min 1/2 x'Gx + g'x   s.t.   C x + d >= 0
    ///
    /// solved with the Goldfarb-Idnani dual active-set method. G must be
    /// symmetric positive definite.
    QpResult solve_qp(const Eigen::MatrixXd& G, const Eigen::VectorXd& g, const Eigen::MatrixXd& C, const Eigen::VectorXd& d, int max_iterations = 0);

} // namespace fmagent::workloads

#endif
