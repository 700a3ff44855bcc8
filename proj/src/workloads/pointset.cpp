#include <fmagent/common/rng.hpp>
#include <fmagent/workloads/pointset.hpp>

#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fmagent::workloads {

    namespace {

        using RowPoints = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

        Eigen::MatrixXd pair_incidence(int n)
        {
            Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n * (n - 1) / 2, n);
            Eigen::Index k = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j, ++k) {
                    D(k, i) = 1.0;
                    D(k, j) = -1.0;
                }
            return D;
        }

        PointSet as_points(const Eigen::VectorXd& x, int n) { return Eigen::Map<const RowPoints>(x.data(), n, 2); }

        double min_distance(const PointSet& p) { return std::sqrt(pairwise_sq_distances(p).minCoeff()); }

        PointSet ring(int count, double radius, double rotation)
        {
            PointSet p(count, 2);
            for (int i = 0; i < count; ++i) {
                const double a = i * 2.0 * std::numbers::pi / count + rotation;
                p.row(i) << radius * std::cos(a), radius * std::sin(a);
            }
            return p;
        }

        PointSet stack(std::initializer_list<PointSet> parts)
        {
            Eigen::Index rows = 0;
            for (const auto& part : parts)
                rows += part.rows();
            PointSet out(rows, 2);
            Eigen::Index r = 0;
            for (const auto& part : parts) {
                out.middleRows(r, part.rows()) = part;
                r += part.rows();
            }
            return out;
        }

    } // namespace

    Eigen::VectorXd pairwise_sq_distances(const PointSet& p)
    {
        const auto n = static_cast<int>(p.rows());
        return (pair_incidence(n) * p).rowwise().squaredNorm();
    }

    double calculate_ratio(const PointSet& p)
    {
        if (p.rows() < 2)
            throw std::invalid_argument("calculate_ratio needs at least two points");
        const Eigen::VectorXd sq = pairwise_sq_distances(p);
        const double dmin = std::sqrt(sq.minCoeff());
        if (dmin < 1e-9)
            return std::numeric_limits<double>::infinity();
        return std::sqrt(sq.maxCoeff()) / dmin;
    }

    PointSet published_ratio_points()
    {
        PointSet p(kRatioPoints, 2);
        p << -1.47975561, 0.98098357, 0.85184808, 0.07211039, -0.73461161, 1.64788717, 0.15127319, -1.78975576, -0.71559290, 0.33596005, -1.54547711, -0.91892085, 1.73300231, -0.45160218,
            -1.82309280, 0.04177136, 1.73113866, 0.54839609, 1.15533190, 1.36598190, 0.40491725, -0.82245813, -0.58095076, -0.65493425, 0.16887753, 0.80255630, 0.25391499, 1.79893406, -0.83459483,
            -1.62223187, 1.26377170, -1.33467785;
        return p;
    }

    RatioConstraintSystem::RatioConstraintSystem(int n_points) : n_(n_points), incidence_(pair_incidence(n_points))
    {
        if (n_points < 2)
            throw std::invalid_argument("ratio constraints need at least two points");
    }

    Eigen::VectorXd RatioConstraintSystem::values(const Eigen::VectorXd& x) const
    {
        if (x.size() != variables())
            throw std::invalid_argument("ratio constraints: expected 2n+1 variables");
        const Eigen::VectorXd sq = (incidence_ * as_points(x, n_)).rowwise().squaredNorm();
        Eigen::VectorXd c(2 * pairs());
        c.head(pairs()) = sq.array() - 1.0;
        c.tail(pairs()) = x[2 * n_] - sq.array();
        return c;
    }

    Eigen::MatrixXd RatioConstraintSystem::jacobian(const Eigen::VectorXd& x) const
    {
        if (x.size() != variables())
            throw std::invalid_argument("ratio constraints: expected 2n+1 variables");
        const Eigen::Index P = pairs();
        const Eigen::MatrixXd diffs = 2.0 * (incidence_ * as_points(x, n_));

        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * P, variables());
        J(Eigen::seqN(0, P), Eigen::seqN(0, n_, 2)) = diffs.col(0).asDiagonal() * incidence_;
        J(Eigen::seqN(0, P), Eigen::seqN(1, n_, 2)) = diffs.col(1).asDiagonal() * incidence_;
        J.bottomLeftCorner(P, 2 * n_) = -J.topLeftCorner(P, 2 * n_);
        J.col(2 * n_).tail(P).setOnes();
        return J;
    }

    NlpProblem RatioConstraintSystem::problem() const
    {
        const Eigen::Index last = 2 * n_;
        NlpProblem p;
        p.objective = [last](const Eigen::VectorXd& x) { return x[last]; };
        p.gradient = [last](const Eigen::VectorXd& x) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
            g[last] = 1.0;
            return g;
        };
        p.constraints = [this](const Eigen::VectorXd& x) { return values(x); };
        p.jacobian = [this](const Eigen::VectorXd& x) { return jacobian(x); };
        return p;
    }

    RatioConstraints ratio_constraints(const Eigen::VectorXd& x)
    {
        static const RatioConstraintSystem system(kRatioPoints);
        return system.evaluate(x);
    }

    std::vector<RatioStart> ratio_initial_configurations()
    {
        std::vector<RatioStart> starts;

        PointSet hex(16, 2);
        for (int v = 0; v < 4; ++v)
            for (int u = 0; u < 4; ++u)
                hex.row(4 * v + u) << (u - 1.5) + 0.5 * (v - 1.5), (v - 1.5) * std::sqrt(3.0) / 2.0;
        starts.push_back({"hexagonal", hex});

        PointSet origin = PointSet::Zero(1, 2);
        starts.push_back({"rings_1_5_10", stack({origin, ring(5, 1.0, 0.0), ring(10, 1.992, std::numbers::pi / 10)})});
        starts.push_back({"rings_6_10", stack({ring(6, 1.0, 0.0), ring(10, 1.9, std::numbers::pi / 10)})});

        PointSet grid(16, 2);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                grid.row(4 * i + j) << i - 1.5, j - 1.5;
        starts.push_back({"grid", grid});

        NumpyRandomState rs(42);
        PointSet random(16, 2);
        for (int i = 0; i < 16; ++i)
            for (int d = 0; d < 2; ++d)
                random(i, d) = rs.rand() * 5.0 - 2.5;
        starts.push_back({"random", random});
        return starts;
    }

    PointSet normalize_points(const PointSet& p)
    {
        PointSet q = p.rowwise() - p.colwise().mean();
        const double dmin = min_distance(q);
        if (dmin > 1e-9)
            q /= dmin;
        return q;
    }

    namespace {

        struct Attempt {
            RatioStartOutcome outcome;
            PointSet points;
        };

        Attempt solve_from(const RatioConstraintSystem& system, const NlpProblem& problem, PointSet p, const SqpOptions& options)
        {
            const double dmin = min_distance(p);
            if (dmin > 1e-9)
                p /= dmin;
            Eigen::VectorXd x0(system.variables());
            x0.head(2 * system.points()) = Eigen::Map<const Eigen::VectorXd>(RowPoints(p).data(), 2 * system.points());
            x0[2 * system.points()] = pairwise_sq_distances(p).maxCoeff();

            const SqpResult r = minimize_sqp(problem, x0, options);
            Attempt a;
            a.outcome.success = r.converged;
            a.outcome.kkt_residual = r.kkt_residual;
            a.outcome.iterations = r.iterations;
            a.points = normalize_points(as_points(r.x, system.points()));
            const double ratio = calculate_ratio(a.points);
            a.outcome.ratio_sq = ratio * ratio;
            return a;
        }

    } // namespace

    RatioSolution multi_start_ratio_solve(const SqpOptions& options, const RatioRefineOptions& refine)
    {
        const RatioConstraintSystem system(kRatioPoints);
        const NlpProblem problem = system.problem();
        const std::vector<RatioStart> starts = ratio_initial_configurations();

        std::vector<std::future<Attempt>> jobs;
        for (const RatioStart& start : starts)
            jobs.push_back(std::async(std::launch::async, [&, start] { return solve_from(system, problem, start.initial, options); }));

        RatioSolution best;
        best.ratio_sq = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            Attempt a = jobs[i].get();
            a.outcome.name = starts[i].name;
            if (a.outcome.success && a.outcome.ratio_sq < best.ratio_sq) {
                best.ratio_sq = a.outcome.ratio_sq;
                best.points = a.points;
                best.start = a.outcome.name;
            }
            best.starts.push_back(std::move(a.outcome));
        }
        if (best.start.empty()) {
            best.points = normalize_points(starts[1].initial);
            const double ratio = calculate_ratio(best.points);
            best.ratio_sq = ratio * ratio;
            best.start = "fallback";
            return best;
        }

        for (int round = 1; round <= refine.rounds; ++round) {
            Rng rng(derive_seed(refine.seed, {static_cast<std::uint64_t>(round)}));
            PointSet p = best.points;
            for (Eigen::Index i = 0; i < p.rows(); ++i)
                for (int d = 0; d < 2; ++d)
                    p(i, d) += refine.sigma * rng.normal();
            const Attempt a = solve_from(system, problem, p, options);
            if (a.outcome.success && a.outcome.ratio_sq < best.ratio_sq) {
                best.ratio_sq = a.outcome.ratio_sq;
                best.points = a.points;
                ++best.improving_rounds;
            }
        }
        return best;
    }

} // namespace fmagent::workloads
