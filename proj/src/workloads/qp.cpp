#include <fmagent/workloads/qp.hpp>

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fmagent::workloads {

    namespace {

        constexpr double kInf = std::numeric_limits<double>::infinity();
        constexpr double kEps = std::numeric_limits<double>::epsilon();

        // Givens-based factor maintenance. J = L^{-T} Q and R is the upper
        // triangular factor of the active normals expressed in J-coordinates:
        // J' N_active = [R; 0].
        struct Factor {
            Eigen::MatrixXd J;
            Eigen::MatrixXd R;
            int q = 0;
            double r_norm = 1.0;

            // `w` = J' n_p on entry. Returns false if the new normal is
            // numerically dependent on the active set.
            bool add(Eigen::VectorXd w)
            {
                const Eigen::Index n = J.rows();
                for (Eigen::Index j = n - 1; j >= q + 1; --j) {
                    double cc = w[j - 1], ss = w[j];
                    const double h = std::hypot(cc, ss);
                    if (h == 0.0)
                        continue;
                    w[j] = 0.0;
                    cc /= h;
                    ss /= h;
                    if (cc < 0.0) {
                        cc = -cc;
                        ss = -ss;
                        w[j - 1] = -h;
                    }
                    else
                        w[j - 1] = h;
                    const double xny = ss / (1.0 + cc);
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const double t1 = J(k, j - 1), t2 = J(k, j);
                        J(k, j - 1) = t1 * cc + t2 * ss;
                        J(k, j) = xny * (t1 + J(k, j - 1)) - t2;
                    }
                }
                R.col(q).head(q + 1) = w.head(q + 1);
                ++q;
                if (std::abs(w[q - 1]) <= kEps * r_norm)
                    return false;
                r_norm = std::max(r_norm, std::abs(w[q - 1]));
                return true;
            }

            // Removes active position `l` and re-triangularizes R.
            void remove(int l)
            {
                const Eigen::Index n = J.rows();
                for (int i = l; i < q - 1; ++i)
                    R.col(i) = R.col(i + 1);
                R.col(q - 1).setZero();
                --q;
                for (int j = l; j < q; ++j) {
                    double cc = R(j, j), ss = R(j + 1, j);
                    const double h = std::hypot(cc, ss);
                    if (h == 0.0)
                        continue;
                    cc /= h;
                    ss /= h;
                    R(j + 1, j) = 0.0;
                    if (cc < 0.0) {
                        R(j, j) = -h;
                        cc = -cc;
                        ss = -ss;
                    }
                    else
                        R(j, j) = h;
                    const double xny = ss / (1.0 + cc);
                    for (int k = j + 1; k < q; ++k) {
                        const double t1 = R(j, k), t2 = R(j + 1, k);
                        R(j, k) = t1 * cc + t2 * ss;
                        R(j + 1, k) = xny * (t1 + R(j, k)) - t2;
                    }
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const double t1 = J(k, j), t2 = J(k, j + 1);
                        J(k, j) = t1 * cc + t2 * ss;
                        J(k, j + 1) = xny * (J(k, j) + t1) - t2;
                    }
                }
            }
        };

    } // namespace

    QpResult solve_qp(const Eigen::MatrixXd& G, const Eigen::VectorXd& g, const Eigen::MatrixXd& C, const Eigen::VectorXd& d, int max_iterations)
    {
        const Eigen::Index n = G.rows();
        const Eigen::Index m = C.rows();
        if (G.cols() != n || g.size() != n || C.cols() != n || d.size() != m)
            throw std::invalid_argument("solve_qp: dimension mismatch");
        if (max_iterations <= 0)
            max_iterations = static_cast<int>(10 * (m + n) + 50);

        QpResult res;
        res.multipliers = Eigen::VectorXd::Zero(m);

        Eigen::LLT<Eigen::MatrixXd> llt(G);
        if (llt.info() != Eigen::Success) {
            res.status = QpStatus::not_convex;
            return res;
        }

        Factor F;
        const Eigen::MatrixXd L = llt.matrixL();
        F.J = L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
        F.R = Eigen::MatrixXd::Zero(n, n);

        Eigen::VectorXd x = -llt.solve(g);
        double f = 0.5 * g.dot(x);

        std::vector<int> active;
        std::vector<double> u; // multipliers of active constraints, same order
        std::vector<char> is_active(m, 0);
        const Eigen::VectorXd row_norms = C.rowwise().norm();

        auto violation_tol = [&](Eigen::Index i) { return 1e-12 * std::max({1.0, std::abs(d[i]), row_norms[i] * x.norm()}); };

        auto finish = [&](QpStatus status) {
            res.status = status;
            res.x = x;
            res.objective = f;
            res.active = active;
            for (std::size_t k = 0; k < active.size(); ++k)
                res.multipliers[active[k]] = u[k];
            return res;
        };

        Eigen::VectorXd w(n), z(n), r(n);
        while (true) {
            if (++res.iterations > max_iterations)
                return finish(QpStatus::iteration_limit);

            // Most violated inactive constraint.
            Eigen::Index p = -1;
            double worst = 0.0;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (is_active[i])
                    continue;
                const double s = C.row(i).dot(x) + d[i];
                if (s < -violation_tol(i) && s < worst) {
                    worst = s;
                    p = i;
                }
            }
            if (p < 0)
                return finish(QpStatus::optimal);

            const Eigen::VectorXd np = C.row(p).transpose();
            double s_p = worst;
            double u_new = 0.0;

            while (true) {
                if (++res.iterations > max_iterations)
                    return finish(QpStatus::iteration_limit);

                w.noalias() = F.J.transpose() * np;
                z.noalias() = F.J.rightCols(n - F.q) * w.tail(n - F.q);
                if (F.q > 0)
                    r.head(F.q) = F.R.topLeftCorner(F.q, F.q).triangularView<Eigen::Upper>().solve(w.head(F.q));

                // Partial (dual) step: the first active multiplier to hit zero.
                double t1 = kInf;
                int l = -1;
                for (int j = 0; j < F.q; ++j) {
                    if (r[j] > 0.0) {
                        const double ratio = u[j] / r[j];
                        if (ratio < t1) {
                            t1 = ratio;
                            l = j;
                        }
                    }
                }
                // Full (primal) step: makes constraint p tight.
                const double zn = z.dot(np);
                const double t2 = (z.squaredNorm() > kEps * kEps * np.squaredNorm() && zn > 0.0) ? -s_p / zn : kInf;

                if (t1 == kInf && t2 == kInf)
                    return finish(QpStatus::infeasible);

                if (t2 == kInf) {
                    for (int j = 0; j < F.q; ++j)
                        u[j] -= t1 * r[j];
                    u_new += t1;
                    is_active[active[l]] = 0;
                    active.erase(active.begin() + l);
                    u.erase(u.begin() + l);
                    F.remove(l);
                    continue;
                }

                const double t = std::min(t1, t2);
                x += t * z;
                f += t * zn * (0.5 * t + u_new);
                for (int j = 0; j < F.q; ++j)
                    u[j] -= t * r[j];
                u_new += t;

                if (t2 <= t1) {
                    if (!F.add(w))
                        return finish(QpStatus::degenerate);
                    active.push_back(static_cast<int>(p));
                    u.push_back(u_new);
                    is_active[p] = 1;
                    break;
                }

                is_active[active[l]] = 0;
                active.erase(active.begin() + l);
                u.erase(u.begin() + l);
                F.remove(l);
                s_p = np.dot(x) + d[p];
            }
        }
    }

} // namespace fmagent::workloads
