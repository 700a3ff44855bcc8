#include <fmagent/workloads/qp.hpp>
#include <fmagent/workloads/sqp.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace fmagent::workloads {

    double kkt_residual(const Eigen::VectorXd& gradient, const Eigen::VectorXd& constraints, const Eigen::MatrixXd& jacobian, const Eigen::VectorXd& multipliers)
    {
        const double stationarity = (gradient - jacobian.transpose() * multipliers).lpNorm<Eigen::Infinity>();
        if (constraints.size() == 0)
            return stationarity;
        const double primal = std::max(0.0, (-constraints).maxCoeff());
        const double dual = std::max(0.0, (-multipliers).maxCoeff());
        const double complementarity = (multipliers.array() * constraints.array()).abs().maxCoeff();
        return std::max({stationarity, primal, dual, complementarity});
    }

    namespace {

        struct Point {
            Eigen::VectorXd x;
            double f = 0.0;
            Eigen::VectorXd g;
            Eigen::VectorXd c;
            Eigen::MatrixXd A;
        };

        Point evaluate(const NlpProblem& p, Eigen::VectorXd x)
        {
            Point pt;
            pt.f = p.objective(x);
            pt.g = p.gradient(x);
            pt.c = p.constraints(x);
            pt.A = p.jacobian(x);
            pt.x = std::move(x);
            return pt;
        }

        // Least-squares multipliers for g = A_a' l over the given active rows.
        Eigen::VectorXd active_set_multipliers(const Point& pt, const std::vector<int>& active)
        {
            Eigen::VectorXd lambda = Eigen::VectorXd::Zero(pt.c.size());
            if (active.empty())
                return lambda;
            Eigen::MatrixXd At(pt.x.size(), active.size());
            for (std::size_t k = 0; k < active.size(); ++k)
                At.col(k) = pt.A.row(active[k]).transpose();
            const Eigen::VectorXd la = At.colPivHouseholderQr().solve(pt.g);
            for (std::size_t k = 0; k < active.size(); ++k)
                lambda[active[k]] = la[k];
            return lambda;
        }

        double merit(double f, const Eigen::VectorXd& c, const Eigen::VectorXd& mu) { return f + mu.dot((-c).cwiseMax(0.0)); }

    } // namespace

    SqpResult minimize_sqp(const NlpProblem& problem, const Eigen::VectorXd& x0, const SqpOptions& options)
    {
        Point cur = evaluate(problem, x0);
        const Eigen::Index n = cur.x.size();
        const Eigen::Index m = cur.c.size();

        Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
        bool fresh_hessian = true;
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);

        SqpResult res;
        auto finish = [&](bool converged, std::string message) {
            res.x = cur.x;
            res.objective = cur.f;
            res.multipliers = lambda;
            res.kkt_residual = kkt_residual(cur.g, cur.c, cur.A, lambda);
            res.converged = converged;
            res.message = std::move(message);
            return res;
        };

        for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
            QpResult qp = solve_qp(B, cur.g, cur.A, cur.c);
            if (qp.status != QpStatus::optimal && !fresh_hessian) {
                B.setIdentity();
                fresh_hessian = true;
                qp = solve_qp(B, cur.g, cur.A, cur.c);
            }
            if (qp.status != QpStatus::optimal)
                return finish(false, "QP subproblem failed");

            const Eigen::VectorXd& d = qp.x;
            lambda = qp.multipliers;
            if (kkt_residual(cur.g, cur.c, cur.A, lambda) <= options.kkt_tol)
                return finish(true, "KKT conditions satisfied");
            const Eigen::VectorXd estimate = active_set_multipliers(cur, qp.active);
            if (kkt_residual(cur.g, cur.c, cur.A, estimate) <= options.kkt_tol) {
                lambda = estimate;
                return finish(true, "KKT conditions satisfied");
            }

            mu = lambda.cwiseAbs().cwiseMax(0.5 * (mu + lambda.cwiseAbs()));
            const double phi0 = merit(cur.f, cur.c, mu);
            double slope = cur.g.dot(d) - mu.dot((-cur.c).cwiseMax(0.0));
            if (slope >= 0.0) {
                if (fresh_hessian)
                    return finish(false, "no descent direction");
                B.setIdentity();
                fresh_hessian = true;
                continue;
            }

            // Backtracking on the L1 merit with interpolation floor 0.1; after
            // ten reductions the step is taken as is.
            Eigen::VectorXd step = d;
            Point next;
            for (int line = 1;; ++line) {
                next = evaluate(problem, cur.x + step);
                const double decrease = merit(next.f, next.c, mu) - phi0;
                if (decrease <= 0.1 * slope || line > 10)
                    break;
                const double alpha = std::max(slope / (2.0 * (slope - decrease)), 0.1);
                slope *= alpha;
                step *= alpha;
            }

            // Damped BFGS on the Lagrangian gradient with the new multipliers.
            const Eigen::VectorXd s = step;
            Eigen::VectorXd y = (next.g - next.A.transpose() * lambda) - (cur.g - cur.A.transpose() * lambda);
            const Eigen::VectorXd Bs = B * s;
            const double sBs = s.dot(Bs);
            const double sy = s.dot(y);
            if (sBs > 0.0) {
                if (sy < 0.2 * sBs) {
                    const double theta = 0.8 * sBs / (sBs - sy);
                    y = theta * y + (1.0 - theta) * Bs;
                }
                const double sy_damped = s.dot(y);
                if (sy_damped > 0.0) {
                    B += y * y.transpose() / sy_damped - Bs * Bs.transpose() / sBs;
                    B = 0.5 * (B + B.transpose());
                    fresh_hessian = false;
                }
            }

            const double df = std::abs(next.f - cur.f);
            const double dx = s.lpNorm<Eigen::Infinity>();
            cur = std::move(next);
            if (df < options.ftol && dx < 1e-15 * (1.0 + cur.x.lpNorm<Eigen::Infinity>()))
                return finish(kkt_residual(cur.g, cur.c, cur.A, lambda) <= options.kkt_tol, "step stalled");
        }
        return finish(false, "iteration limit reached");
    }

} // namespace fmagent::workloads
