#ifndef FMAGENT_WORKLOADS_OPTIMIZE_HPP
#define FMAGENT_WORKLOADS_OPTIMIZE_HPP

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>

namespace fmagent::workloads {

    using Objective = std::function<double(const Eigen::VectorXd&)>;

    struct Box {
        Eigen::VectorXd lower;
        Eigen::VectorXd upper;

        Eigen::Index size() const { return lower.size(); }
        Eigen::VectorXd clamp(const Eigen::VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }
    };

    struct NelderMeadOptions {
        int max_iterations = 20000;
        double xatol = 1e-12; ///< simplex extent
        double fatol = 1e-15; ///< spread of simplex values
        double initial_step = 0.05; ///< relative; 2.5e-4 absolute for zero coordinates
    };

    struct NelderMeadResult {
        Eigen::VectorXd x;
        double fun = 0.0;
        int iterations = 0;
        int evaluations = 0;
        bool converged = false;
    };

    /// Nelder-Mead simplex (reflection 1, expansion 2, contraction 0.5,
    /// shrink 0.5). With `box`, points are clamped before evaluation.
    NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const NelderMeadOptions& options = {}, const std::optional<Box>& box = std::nullopt);

    struct DeOptions {
        int popsize = 30; ///< multiplier: population = popsize * dimension
        int max_iterations = 300;
        double recombination = 0.7;
        double mutation_lo = 0.5;
        double mutation_hi = 1.0;
        double tol = 1e-10;
        double atol = 1e-15;
        bool polish = true;
        std::uint64_t seed = 42;
        std::optional<Eigen::MatrixXd> initial_population; ///< one member per row
        NelderMeadOptions polish_options;
    };

    struct DeResult {
        Eigen::VectorXd x;
        double fun = 0.0;
        int iterations = 0;
        int evaluations = 0;
        bool converged = false;
        bool polish_improved = false;
    };

    /// best/1/bin differential evolution with per-generation dithered F,
    /// immediate updating, clipping to the box, and spread-based
    /// convergence std(E) <= atol + tol |mean(E)|. Optional Nelder-Mead
    /// polish of the best member, kept only if it improves.
    DeResult differential_evolution(const Objective& f, const Box& box, const DeOptions& options = {});

} // namespace fmagent::workloads

#endif
