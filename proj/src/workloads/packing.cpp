#include <fmagent/common/rng.hpp>
#include <fmagent/workloads/packing.hpp>
#include <fmagent/workloads/simplex.hpp>

#include <numbers>
#include <stdexcept>

namespace fmagent::workloads {

    void PackingHyperparams::validate() const
    {
        if (n_iterations <= 0 || !(initial_lr > 0) || !(final_lr > 0) || !(k_initial > 0) || !(k_final > 0) || !(repulsion_initial > 0) || !(repulsion_final > 0) || !(eps > 0) || !(jitter >= 0))
            throw std::invalid_argument("packing hyperparameters must be positive");
        if (!(exploration_fraction > 0.0 && exploration_fraction < 1.0))
            throw std::invalid_argument("exploration_fraction must lie in (0, 1)");
        if (!(beta1 > 0 && beta1 < 1 && beta2 > 0 && beta2 < 1))
            throw std::invalid_argument("Adam betas must lie in (0, 1)");
    }

    Centers lattice_init(std::uint32_t seed, double jitter)
    {
        struct Row {
            int count;
            double offset;
        };
        constexpr Row rows[] = {{5, 1.5}, {6, 1.0}, {5, 1.5}, {6, 1.0}, {4, 2.0}};
        constexpr double y_step = 0.175;
        const double y_start = (1.0 - 4 * y_step) / 2.0;

        Centers centers(kPackingCircles, 2);
        int k = 0;
        double y = y_start;
        for (const Row& row : rows) {
            for (int i = 0; i < row.count; ++i, ++k) {
                centers(k, 0) = (i + row.offset) / 7.0;
                centers(k, 1) = y;
            }
            y += y_step;
        }

        // Row-major draw order, as np.random.rand(n, 2).
        NumpyRandomState rs(seed);
        for (int i = 0; i < kPackingCircles; ++i)
            for (int d = 0; d < 2; ++d)
                centers(i, d) += (rs.rand() - 0.5) * jitter;
        return centers;
    }

    PackingGradients packing_gradients(const PackingState& state, double penalty, double repulsion, double eps)
    {
        const Eigen::Index n = state.centers.rows();
        const Eigen::ArrayXd r = state.log_radii.array().exp();
        const Eigen::ArrayXd x = state.centers.col(0).array();
        const Eigen::ArrayXd y = state.centers.col(1).array();

        // dx(i, j) = x_i - x_j
        const Eigen::ArrayXXd dx = x.replicate(1, n) - x.transpose().replicate(n, 1);
        const Eigen::ArrayXXd dy = y.replicate(1, n) - y.transpose().replicate(n, 1);
        const Eigen::ArrayXXd dist = (dx.square() + dy.square() + eps).sqrt();

        Eigen::ArrayXXd overlap = ((r.replicate(1, n) + r.transpose().replicate(n, 1)) - dist).max(0.0);
        overlap.matrix().diagonal().setZero();

        const Eigen::ArrayXd left = (r - x).max(0.0);
        const Eigen::ArrayXd right = (x + r - 1.0).max(0.0);
        const Eigen::ArrayXd bottom = (r - y).max(0.0);
        const Eigen::ArrayXd top = (y + r - 1.0).max(0.0);

        const Eigen::ArrayXXd inter = 2.0 * penalty * overlap;
        const Eigen::ArrayXXd inv_d3 = dist.cube().inverse();

        PackingGradients g;
        g.centers.resize(n, 2);
        g.centers.col(0) = (-(inter * dx / dist).rowwise().sum() + penalty * (-2.0 * left + 2.0 * right) + repulsion * (-(dx * inv_d3)).rowwise().sum()).matrix();
        g.centers.col(1) = (-(inter * dy / dist).rowwise().sum() + penalty * (-2.0 * bottom + 2.0 * top) + repulsion * (-(dy * inv_d3)).rowwise().sum()).matrix();
        g.log_radii = (-r + inter.rowwise().sum() * r + 2.0 * penalty * (left + right + bottom + top) * r).matrix();
        return g;
    }

    Eigen::VectorXd solve_radii_lp(const Centers& centers)
    {
        const Eigen::Index n = centers.rows();
        const Eigen::Index pairs = n * (n - 1) / 2;
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(pairs + 4 * n, n);
        Eigen::VectorXd b(pairs + 4 * n);

        Eigen::Index row = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j, ++row) {
                A(row, i) = 1.0;
                A(row, j) = 1.0;
                b[row] = (centers.row(i) - centers.row(j)).norm();
            }
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const double cx = centers(i, 0), cy = centers(i, 1);
            for (double wall : {cx, 1.0 - cx, cy, 1.0 - cy}) {
                A(row, i) = 1.0;
                b[row++] = wall;
            }
        }

        const LpResult lp = maximize_lp(Eigen::VectorXd::Ones(n), A, b);
        if (lp.status != LpStatus::optimal)
            return Eigen::VectorXd::Zero(n);
        return lp.x;
    }

    PackingSolution construct_packing(const PackingHyperparams& h)
    {
        h.validate();
        PackingState state;
        state.centers = lattice_init(h.seed, h.jitter);
        const Eigen::Index n = state.centers.rows();
        state.log_radii = Eigen::VectorXd::Constant(n, h.initial_log_radius);

        Centers m_c = Centers::Zero(n, 2), v_c = Centers::Zero(n, 2);
        Eigen::VectorXd m_r = Eigen::VectorXd::Zero(n), v_r = Eigen::VectorXd::Zero(n);

        const double k_ratio = std::pow(h.k_final / h.k_initial, 1.0 / h.n_iterations);
        const int exploration_iterations = static_cast<int>(h.n_iterations * h.exploration_fraction);
        const double repulsion_ratio = std::pow(h.repulsion_final / h.repulsion_initial, 1.0 / exploration_iterations);
        double penalty = h.k_initial;
        double repulsion = h.repulsion_initial;

        for (int t = 1; t <= h.n_iterations; ++t) {
            const PackingGradients g = packing_gradients(state, penalty, repulsion, h.eps);

            const double decay = 0.5 * (1.0 + std::cos(std::numbers::pi * (static_cast<double>(t) / h.n_iterations)));
            const double lr = h.final_lr + (h.initial_lr - h.final_lr) * decay;
            const double bc1 = 1.0 - std::pow(h.beta1, t);
            const double bc2 = 1.0 - std::pow(h.beta2, t);

            m_c = h.beta1 * m_c + (1.0 - h.beta1) * g.centers;
            v_c = h.beta2 * v_c + (1.0 - h.beta2) * g.centers.cwiseAbs2();
            state.centers.array() -= lr * (m_c.array() / bc1) / ((v_c.array() / bc2).sqrt() + h.eps);

            m_r = h.beta1 * m_r + (1.0 - h.beta1) * g.log_radii;
            v_r = h.beta2 * v_r + (1.0 - h.beta2) * g.log_radii.cwiseAbs2();
            state.log_radii.array() -= lr * (m_r.array() / bc1) / ((v_r.array() / bc2).sqrt() + h.eps);

            state.centers = state.centers.cwiseMax(0.001).cwiseMin(0.999);

            penalty *= k_ratio;
            if (t < exploration_iterations)
                repulsion *= repulsion_ratio;
            else
                repulsion = 0.0;
        }

        PackingSolution out;
        out.centers = state.centers;
        out.radii = solve_radii_lp(out.centers);
        out.sum_radii = out.radii.sum();
        out.seed = h.seed;
        return out;
    }

    PackingSolution solve_packing(std::uint32_t seed, int restarts, const PackingHyperparams& base)
    {
        if (restarts < 1)
            throw std::invalid_argument("solve_packing needs at least one start");
        PackingSolution best;
        for (int i = 0; i < restarts; ++i) {
            PackingHyperparams h = base;
            h.seed = seed + static_cast<std::uint32_t>(i);
            PackingSolution s = construct_packing(h);
            if (i == 0 || s.sum_radii > best.sum_radii)
                best = std::move(s);
        }
        return best;
    }

    PackingCheck validate_packing(const Centers& centers, const Eigen::VectorXd& radii, double tol)
    {
        if (centers.rows() != radii.size())
            throw std::invalid_argument("validate_packing: centers and radii differ in length");
        PackingCheck check;
        const int n = static_cast<int>(centers.rows());
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double excess = radii[i] + radii[j] - (centers.row(i) - centers.row(j)).norm();
                if (excess > tol)
                    check.violations.push_back({PackingViolation::Kind::pair, i, j, {}, excess});
            }
        }
        for (int i = 0; i < n; ++i) {
            const double x = centers(i, 0), y = centers(i, 1), r = radii[i];
            const std::pair<const char*, double> walls[] = {{"left", r - x}, {"right", x + r - 1.0}, {"bottom", r - y}, {"top", y + r - 1.0}};
            for (const auto& [name, excess] : walls)
                if (excess > tol)
                    check.violations.push_back({PackingViolation::Kind::wall, i, -1, name, excess});
        }
        check.valid = check.violations.empty();
        return check;
    }

} // namespace fmagent::workloads
