#include <fmagent/workloads/simplex.hpp>

#include <limits>
#include <stdexcept>
#include <vector>

namespace fmagent::workloads {

    LpResult maximize_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol)
    {
        const Eigen::Index m = A.rows();
        const Eigen::Index n = A.cols();
        if (c.size() != n || b.size() != m)
            throw std::invalid_argument("maximize_lp: dimension mismatch");

        LpResult result;
        result.x = Eigen::VectorXd::Zero(n);
        if ((b.array() < -tol).any())
            return result;

        // [ A | I | b ] over [ -c | 0 | 0 ]
        using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        const Eigen::Index rhs = n + m;
        Tableau T = Tableau::Zero(m + 1, n + m + 1);
        T.topLeftCorner(m, n) = A;
        T.block(0, n, m, m).setIdentity();
        T.col(rhs).head(m) = b.cwiseMax(0.0);
        T.row(m).head(n) = -c.transpose();

        std::vector<Eigen::Index> basis(m);
        for (Eigen::Index i = 0; i < m; ++i)
            basis[i] = n + i;

        const int max_pivots = static_cast<int>(50 * (m + n) + 100);
        Eigen::VectorXd pivot_col(m + 1);
        while (true) {
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < rhs; ++j) {
                if (T(m, j) < -tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) {
                result.status = LpStatus::optimal;
                break;
            }

            double best_ratio = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < m; ++i)
                if (T(i, enter) > tol)
                    best_ratio = std::min(best_ratio, T(i, rhs) / T(i, enter));
            // Bland: among minimum-ratio rows, the smallest basic index leaves.
            Eigen::Index leave = -1;
            for (Eigen::Index i = 0; i < m; ++i)
                if (T(i, enter) > tol && T(i, rhs) / T(i, enter) <= best_ratio + tol && (leave < 0 || basis[i] < basis[leave]))
                    leave = i;
            if (leave < 0) {
                result.status = LpStatus::unbounded;
                return result;
            }
            if (result.pivots >= max_pivots) {
                result.status = LpStatus::iteration_limit;
                return result;
            }

            T.row(leave) /= T(leave, enter);
            pivot_col = T.col(enter);
            pivot_col[leave] = 0.0;
            T.noalias() -= pivot_col * T.row(leave);
            T.col(enter).setZero();
            T(leave, enter) = 1.0;
            basis[leave] = enter;
            ++result.pivots;
        }

        for (Eigen::Index i = 0; i < m; ++i)
            if (basis[i] < n)
                result.x[basis[i]] = std::max(0.0, T(i, rhs));
        result.objective = c.dot(result.x);
        return result;
    }

} // namespace fmagent::workloads
