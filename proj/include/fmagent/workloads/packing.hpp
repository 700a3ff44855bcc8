#ifndef FMAGENT_WORKLOADS_PACKING_HPP
#define FMAGENT_WORKLOADS_PACKING_HPP

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace fmagent::workloads {

    using Centers = Eigen::Matrix<double, Eigen::Dynamic, 2>;

    inline constexpr int kPackingCircles = 26;
    inline constexpr int kDefaultPackingRestarts = 64;

    /// Hyperparameters of the staged penalty/repulsion simulation. Defaults are
    /// the published configuration for 26 circles.
    struct PackingHyperparams {
        int n_iterations = 18000;
        double initial_lr = 1.5e-3;
        double final_lr = 1e-6;
        double k_initial = 150.0;
        double k_final = 1e5;
        double repulsion_initial = 1e-6;
        double repulsion_final = 1e-9;
        double exploration_fraction = 0.5;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double eps = 1e-8; ///< Adam denominator and distance smoothing
        double jitter = 0.005;
        std::uint32_t seed = 42;
        double initial_log_radius = std::log(0.05);

        void validate() const;
    };

    struct PackingState {
        Centers centers;
        Eigen::VectorXd log_radii;

        Eigen::VectorXd radii() const { return log_radii.array().exp(); }
    };

    struct PackingGradients {
        Centers centers;
        Eigen::VectorXd log_radii;
    };

    struct PackingSolution {
        Centers centers;
        Eigen::VectorXd radii;
        double sum_radii = 0.0;
        std::uint32_t seed = 0;
    };

    /// Staggered 5-6-5-6-4 lattice centred vertically, plus seeded uniform
    /// jitter of total width `jitter` per coordinate.
    Centers lattice_init(std::uint32_t seed, double jitter = 0.005);

    /// Analytic gradient of
    ///   E = -sum r_i + k sum_{i<j} max(0, r_i + r_j - d_ij)^2
    ///       + k sum_i sum_walls max(0, wall overlap)^2 + rep sum_{i<j} 1/d_ij
    /// with d_ij = sqrt(|c_i - c_j|^2 + eps) and r = exp(log_radii).
    PackingGradients packing_gradients(const PackingState& state, double penalty, double repulsion, double eps = 1e-8);

    /// Maximum-sum radii for fixed centers via LP (pairwise and wall
    /// constraints, r >= 0). All zeros if the LP fails.
    Eigen::VectorXd solve_radii_lp(const Centers& centers);

    /// Full pipeline: lattice init, annealed Adam simulation, LP polish.
    PackingSolution construct_packing(const PackingHyperparams& h = {});

    /// Deterministic multi-start over jitter seeds seed, seed+1, ...; returns
    /// the start with the largest radii sum.
    PackingSolution solve_packing(std::uint32_t seed, int restarts, const PackingHyperparams& base = {});

    struct PackingViolation {
        enum class Kind { pair, wall } kind = Kind::pair;
        int i = 0;
        int j = -1; ///< second circle for pair violations
        std::string wall; ///< "left" / "right" / "bottom" / "top"
        double amount = 0.0;
    };

    struct PackingCheck {
        bool valid = true;
        std::vector<PackingViolation> violations;
    };

    /// Non-overlap and containment in the unit square, each up to `tol`.
    PackingCheck validate_packing(const Centers& centers, const Eigen::VectorXd& radii, double tol);

} // namespace fmagent::workloads

#endif
