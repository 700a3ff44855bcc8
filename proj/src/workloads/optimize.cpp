#include <fmagent/common/rng.hpp>
#include <fmagent/workloads/optimize.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fmagent::workloads {

    NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const NelderMeadOptions& options, const std::optional<Box>& box)
    {
        const Eigen::Index n = x0.size();
        if (n == 0)
            throw std::invalid_argument("nelder_mead: empty start");

        NelderMeadResult res;
        auto eval = [&](const Eigen::VectorXd& x) {
            ++res.evaluations;
            return f(box ? box->clamp(x) : x);
        };

        std::vector<Eigen::VectorXd> sim(n + 1, x0);
        for (Eigen::Index k = 0; k < n; ++k)
            sim[k + 1][k] = x0[k] != 0.0 ? (1.0 + options.initial_step) * x0[k] : 2.5e-4;
        std::vector<double> fs(n + 1);
        for (Eigen::Index k = 0; k <= n; ++k)
            fs[k] = eval(sim[k]);

        std::vector<std::size_t> order(n + 1);
        auto sort_simplex = [&] {
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
            std::vector<Eigen::VectorXd> s2;
            std::vector<double> f2;
            for (std::size_t i : order) {
                s2.push_back(sim[i]);
                f2.push_back(fs[i]);
            }
            sim = std::move(s2);
            fs = std::move(f2);
        };
        sort_simplex();

        for (; res.iterations < options.max_iterations; ++res.iterations) {
            double x_spread = 0.0, f_spread = 0.0;
            for (Eigen::Index k = 1; k <= n; ++k) {
                x_spread = std::max(x_spread, (sim[k] - sim[0]).lpNorm<Eigen::Infinity>());
                f_spread = std::max(f_spread, std::abs(fs[k] - fs[0]));
            }
            if (x_spread <= options.xatol && f_spread <= options.fatol) {
                res.converged = true;
                break;
            }

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
            for (Eigen::Index k = 0; k < n; ++k)
                centroid += sim[k];
            centroid /= static_cast<double>(n);

            const Eigen::VectorXd xr = 2.0 * centroid - sim[n];
            const double fr = eval(xr);
            bool shrink = false;
            if (fr < fs[0]) {
                const Eigen::VectorXd xe = 3.0 * centroid - 2.0 * sim[n];
                const double fe = eval(xe);
                if (fe < fr) {
                    sim[n] = xe;
                    fs[n] = fe;
                }
                else {
                    sim[n] = xr;
                    fs[n] = fr;
                }
            }
            else if (fr < fs[n - 1]) {
                sim[n] = xr;
                fs[n] = fr;
            }
            else if (fr < fs[n]) {
                const Eigen::VectorXd xc = 1.5 * centroid - 0.5 * sim[n];
                const double fc = eval(xc);
                if (fc <= fr) {
                    sim[n] = xc;
                    fs[n] = fc;
                }
                else
                    shrink = true;
            }
            else {
                const Eigen::VectorXd xcc = 0.5 * centroid + 0.5 * sim[n];
                const double fcc = eval(xcc);
                if (fcc < fs[n]) {
                    sim[n] = xcc;
                    fs[n] = fcc;
                }
                else
                    shrink = true;
            }
            if (shrink) {
                for (Eigen::Index k = 1; k <= n; ++k) {
                    sim[k] = sim[0] + 0.5 * (sim[k] - sim[0]);
                    fs[k] = eval(sim[k]);
                }
            }
            sort_simplex();
        }

        res.x = box ? box->clamp(sim[0]) : sim[0];
        res.fun = fs[0];
        return res;
    }

    DeResult differential_evolution(const Objective& f, const Box& box, const DeOptions& options)
    {
        const Eigen::Index dim = box.size();
        if (dim == 0 || box.upper.size() != dim || (box.upper.array() < box.lower.array()).any())
            throw std::invalid_argument("differential_evolution: invalid bounds");
        if (options.popsize < 1 || options.max_iterations < 0)
            throw std::invalid_argument("differential_evolution: invalid options");

        Rng rng(options.seed);
        const Eigen::VectorXd span = box.upper - box.lower;

        Eigen::MatrixXd pop;
        if (options.initial_population) {
            pop = *options.initial_population;
            if (pop.cols() != dim || pop.rows() < 5)
                throw std::invalid_argument("differential_evolution: initial population needs >= 5 members of the box dimension");
            for (Eigen::Index i = 0; i < pop.rows(); ++i)
                pop.row(i) = box.clamp(pop.row(i).transpose()).transpose();
        }
        else {
            // Latin hypercube: one sample per stratum, strata shuffled per dimension.
            const Eigen::Index P = static_cast<Eigen::Index>(options.popsize) * dim;
            pop.resize(P, dim);
            std::vector<Eigen::Index> perm(P);
            for (Eigen::Index d = 0; d < dim; ++d) {
                std::iota(perm.begin(), perm.end(), 0);
                for (Eigen::Index i = P - 1; i > 0; --i)
                    std::swap(perm[i], perm[rng.index(static_cast<std::uint64_t>(i + 1))]);
                for (Eigen::Index i = 0; i < P; ++i)
                    pop(i, d) = box.lower[d] + span[d] * (perm[i] + rng.uniform()) / static_cast<double>(P);
            }
        }
        const Eigen::Index P = pop.rows();

        DeResult res;
        Eigen::VectorXd energy(P);
        for (Eigen::Index i = 0; i < P; ++i) {
            energy[i] = f(pop.row(i).transpose());
            ++res.evaluations;
        }
        Eigen::Index best = 0;
        energy.minCoeff(&best);

        auto converged = [&] {
            if (!energy.allFinite())
                return false;
            const double mean = energy.mean();
            const double sd = std::sqrt((energy.array() - mean).square().mean());
            return sd <= options.atol + options.tol * std::abs(mean);
        };

        Eigen::VectorXd trial(dim);
        for (res.iterations = 0; res.iterations < options.max_iterations && !converged(); ++res.iterations) {
            const double F = rng.uniform(options.mutation_lo, options.mutation_hi);
            for (Eigen::Index i = 0; i < P; ++i) {
                Eigen::Index r1, r2;
                do
                    r1 = static_cast<Eigen::Index>(rng.index(P));
                while (r1 == i);
                do
                    r2 = static_cast<Eigen::Index>(rng.index(P));
                while (r2 == i || r2 == r1);

                trial = pop.row(i).transpose();
                const Eigen::Index fill = static_cast<Eigen::Index>(rng.index(dim));
                for (Eigen::Index d = 0; d < dim; ++d)
                    if (d == fill || rng.uniform() < options.recombination)
                        trial[d] = pop(best, d) + F * (pop(r1, d) - pop(r2, d));
                trial = box.clamp(trial);

                const double e = f(trial);
                ++res.evaluations;
                if (e <= energy[i]) {
                    pop.row(i) = trial.transpose();
                    energy[i] = e;
                    if (e <= energy[best])
                        best = i;
                }
            }
        }
        res.converged = converged();
        res.x = pop.row(best).transpose();
        res.fun = energy[best];

        if (options.polish) {
            const NelderMeadResult nm = nelder_mead(f, res.x, options.polish_options, box);
            res.evaluations += nm.evaluations;
            if (nm.fun < res.fun) {
                res.x = nm.x;
                res.fun = nm.fun;
                res.polish_improved = true;
            }
        }
        return res;
    }

} // namespace fmagent::workloads
