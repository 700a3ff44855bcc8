#ifndef FMAGENT_WORKLOADS_POINTSET_HPP
#define FMAGENT_WORKLOADS_POINTSET_HPP

#include <fmagent/workloads/sqp.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace fmagent::workloads {

    using PointSet = Eigen::Matrix<double, Eigen::Dynamic, 2>;

    inline constexpr int kRatioPoints = 16;

    /// d_max / d_min over all pairs; +inf when d_min < 1e-9.
    double calculate_ratio(const PointSet& p);

    /// Squared distances of all pairs (i < j, lexicographic).
    Eigen::VectorXd pairwise_sq_distances(const PointSet& p);

    /// The best published 16-point configuration.
    PointSet published_ratio_points();

    struct RatioConstraints {
        Eigen::VectorXd values;
        Eigen::MatrixXd jacobian;
    };

    /// Constraint system over x = (x_1, y_1, ..., x_N, y_N, D):
    ///   d_ij^2 - 1 >= 0   and   D - d_ij^2 >= 0   for all pairs.
    /// The Jacobian is assembled from the pair incidence matrix.
    class RatioConstraintSystem {
    public:
        explicit RatioConstraintSystem(int n_points = kRatioPoints);

        int points() const { return n_; }
        Eigen::Index pairs() const { return incidence_.rows(); }
        Eigen::Index variables() const { return 2 * n_ + 1; }

        Eigen::VectorXd values(const Eigen::VectorXd& x) const;
        Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
        RatioConstraints evaluate(const Eigen::VectorXd& x) const { return {values(x), jacobian(x)}; }

        NlpProblem problem() const;

    private:
        int n_;
        Eigen::MatrixXd incidence_; ///< pairs x points, +1 at i and -1 at j
    };

    RatioConstraints ratio_constraints(const Eigen::VectorXd& x);

    struct RatioStart {
        std::string name;
        PointSet initial;
    };

    /// hexagonal, rings_1_5_10, rings_6_10, grid, random (seed 42).
    std::vector<RatioStart> ratio_initial_configurations();

    struct RatioStartOutcome {
        std::string name;
        bool success = false;
        double ratio_sq = 0.0;
        double kkt_residual = 0.0;
        int iterations = 0;
    };

    /// Seeded perturbation rounds from the best start: Gaussian noise of
    /// scale `sigma` on the normalized points, re-solve, keep improvements.
    struct RatioRefineOptions {
        int rounds = 100;
        double sigma = 0.25;
        std::uint64_t seed = 42;
    };

    struct RatioSolution {
        PointSet points;
        double ratio_sq = 0.0;
        std::string start; ///< winning start, or "fallback"
        std::vector<RatioStartOutcome> starts;
        int improving_rounds = 0;
    };

    /// Translate to zero mean and scale so the minimum distance is 1.
    PointSet normalize_points(const PointSet& p);

    RatioSolution multi_start_ratio_solve(const SqpOptions& options = {}, const RatioRefineOptions& refine = {});

} // namespace fmagent::workloads

#endif
