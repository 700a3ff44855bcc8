#ifndef FMAGENT_WORKLOADS_SQP_HPP
#define FMAGENT_WORKLOADS_SQP_HPP

#include <Eigen/Core>

#include <functional>
#include <string>

namespace fmagent::workloads {

    /// Smooth NLP  min f(x)  s.t.  c(x) >= 0.
    struct NlpProblem {
        std::function<double(const Eigen::VectorXd&)> objective;
        std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
        std::function<Eigen::VectorXd(const Eigen::VectorXd&)> constraints;
        std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
    };

    struct SqpOptions {
        int max_iterations = 3000;
        double ftol = 1e-12;
        double kkt_tol = 1e-9;
    };

    struct SqpResult {
        Eigen::VectorXd x;
        Eigen::VectorXd multipliers;
        double objective = 0.0;
        double kkt_residual = 0.0;
        int iterations = 0;
        bool converged = false;
        std::string message;
    };

    /// max of stationarity |g - J'l|_inf, primal infeasibility, dual
    /// infeasibility (negative multipliers) and complementarity |l_i c_i|.
    double kkt_residual(const Eigen::VectorXd& gradient, const Eigen::VectorXd& constraints, const Eigen::MatrixXd& jacobian, const Eigen::VectorXd& multipliers);

    /// Line-search SQP: damped BFGS Hessian of the Lagrangian, QP subproblems
    /// by the dual active-set method, L1 exact-penalty merit with a
    /// second-order correction. Converged means KKT residual <= kkt_tol.
    SqpResult minimize_sqp(const NlpProblem& problem, const Eigen::VectorXd& x0, const SqpOptions& options = {});

} // namespace fmagent::workloads

#endif
