#include <doctest.h>

#include <fmagent/common/rng.hpp>
#include <fmagent/workloads/benchmarks.hpp>
#include <fmagent/workloads/hermite.hpp>
#include <fmagent/workloads/optimize.hpp>
#include <fmagent/workloads/packing.hpp>
#include <fmagent/workloads/pointset.hpp>
#include <fmagent/workloads/qp.hpp>
#include <fmagent/workloads/simplex.hpp>
#include <fmagent/workloads/sqp.hpp>
#include <fmagent/workloads/temporal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "../common/oracles.hpp"

using namespace fmagent;
using namespace fmagent::workloads;
using namespace fmagent::oracles;

namespace {

    // Greedy feasible radii: assigned one at a time as large as the walls and
    // the placed circles allow, leaving half of every gap to unplaced circles.
    Eigen::VectorXd greedy_radii(const Centers& c)
    {
        const auto n = c.rows();
        Eigen::VectorXd r(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double ri = std::min({c(i, 0), 1.0 - c(i, 0), c(i, 1), 1.0 - c(i, 1)});
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i)
                    ri = std::min(ri, (c.row(i) - c.row(j)).norm() - (j < i ? r[j] : (c.row(i) - c.row(j)).norm() / 2));
            r[i] = std::max(0.0, ri);
        }
        return r;
    }

} // namespace

TEST_SUITE("benchmarks")
{
    TEST_CASE("sphere and rastrigin examples")
    {
        CHECK(sphere(Eigen::Vector3d::Zero()) == 0.0);
        CHECK(rastrigin(Eigen::Vector3d::Zero()) == 0.0);
        CHECK(sphere(Eigen::Vector2d(1, 1)) == -2.0);
        CHECK(rastrigin(Eigen::Vector2d(0.5, 0)) == doctest::Approx(-20.25).epsilon(1e-14));
        // Scalar-generic: long double instantiation agrees.
        Eigen::Matrix<long double, 2, 1> x(0.5L, 0.0L);
        CHECK(static_cast<double>(rastrigin(x)) == doctest::Approx(-20.25).epsilon(1e-14));
    }
}

TEST_SUITE("simplex")
{
    TEST_CASE("small LPs")
    {
        // max 3x + 2y  s.t.  x + y <= 4, x + 3y <= 6, x <= 3
        Eigen::MatrixXd A(3, 2);
        A << 1, 1, 1, 3, 1, 0;
        const LpResult r = maximize_lp(Eigen::Vector2d(3, 2), A, Eigen::Vector3d(4, 6, 3));
        REQUIRE(r.status == LpStatus::optimal);
        CHECK(r.objective == doctest::Approx(11.0));
        CHECK(r.x[0] == doctest::Approx(3.0));
        CHECK(r.x[1] == doctest::Approx(1.0));

        Eigen::MatrixXd B(1, 2);
        B << 1, -1;
        CHECK(maximize_lp(Eigen::Vector2d(1, 1), B, Eigen::VectorXd::Constant(1, 1.0)).status == LpStatus::unbounded);
        CHECK(maximize_lp(Eigen::Vector2d(1, 1), A, Eigen::Vector3d(-1, 6, 3)).status == LpStatus::infeasible);
    }

    TEST_CASE("degenerate vertex does not cycle")
    {
        // Classic Beale cycling example (in max form).
        Eigen::MatrixXd A(3, 4);
        A << 0.25, -60, -0.04, 9, 0.5, -90, -0.02, 3, 0, 0, 1, 0;
        const Eigen::Vector4d c(0.75, -150, 0.02, -6);
        const LpResult r = maximize_lp(c, A, Eigen::Vector3d(0, 0, 1));
        REQUIRE(r.status == LpStatus::optimal);
        CHECK(r.objective == doctest::Approx(0.05));
    }
}

TEST_SUITE("packing")
{
    TEST_CASE("lattice_init")
    {
        const Centers c = lattice_init(42, 0.0);
        REQUIRE(c.rows() == 26);
        const double expect[] = {1.5 / 7, 2.5 / 7, 3.5 / 7, 4.5 / 7, 5.5 / 7};
        for (int i = 0; i < 5; ++i) {
            CHECK(c(i, 0) == doctest::Approx(expect[i]).epsilon(1e-15));
            CHECK(c(i, 1) == doctest::Approx(0.15).epsilon(1e-15));
        }
        // Row sizes 5-6-5-6-4 by distinct y values.
        std::vector<double> ys(c.col(1).data(), c.col(1).data() + 26);
        std::vector<int> rows;
        for (std::size_t i = 0; i < ys.size();) {
            std::size_t j = i;
            while (j < ys.size() && ys[j] == ys[i])
                ++j;
            rows.push_back(static_cast<int>(j - i));
            i = j;
        }
        CHECK(rows == std::vector<int>{5, 6, 5, 6, 4});
        CHECK(lattice_init(42) == lattice_init(42));
        CHECK((lattice_init(42) - c).cwiseAbs().maxCoeff() <= 0.0025 + 1e-15);
    }

    TEST_CASE("packing_gradients: inactive penalty and repulsion symmetry")
    {
        PackingState s;
        s.centers.resize(2, 2);
        s.centers << 0.3, 0.5, 0.7, 0.5;
        s.log_radii = Eigen::Vector2d(std::log(0.1), std::log(0.1));
        const PackingGradients g = packing_gradients(s, 1000.0, 0.0);
        CHECK(g.centers.cwiseAbs().maxCoeff() == 0.0);

        const PackingGradients rep = packing_gradients(s, 0.0, 1e-3);
        CHECK((rep.centers.row(0) + rep.centers.row(1)).norm() < 1e-18);
        CHECK(rep.centers.row(0).norm() > 0.0);
    }

    TEST_CASE("packing_gradients match central finite differences on 100 inputs")
    {
        Rng rng(2024);
        const double h = 1e-6, eps = 1e-8;
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const PackingState s = random_packing_state(rng);
            const double k = rng.uniform(10.0, 1000.0), rep = rng.uniform(1e-6, 1e-3);
            const PackingGradients g = packing_gradients(s, k, rep, eps);
            for (int i = 0; i < kPackingCircles; ++i) {
                for (int d = 0; d < 2; ++d) {
                    PackingState p = s, m = s;
                    p.centers(i, d) += h;
                    m.centers(i, d) -= h;
                    const double fd = (packing_energy(p, k, rep, eps) - packing_energy(m, k, rep, eps)) / (2 * h);
                    worst = std::max(worst, rel_err(g.centers(i, d), fd, 1e-3));
                }
                PackingState p = s, m = s;
                p.log_radii[i] += h;
                m.log_radii[i] -= h;
                const double fd = (packing_energy(p, k, rep, eps) - packing_energy(m, k, rep, eps)) / (2 * h);
                worst = std::max(worst, rel_err(g.log_radii[i], fd, 1e-3));
            }
        }
        CHECK(worst < 1e-4);
    }

    TEST_CASE("solve_radii_lp examples")
    {
        Centers one(1, 2);
        one << 0.5, 0.5;
        CHECK(solve_radii_lp(one)[0] == doctest::Approx(0.5).epsilon(1e-12));

        Centers two(2, 2);
        two << 0.25, 0.5, 0.75, 0.5;
        const Eigen::VectorXd r = solve_radii_lp(two);
        CHECK(r[0] == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(r[1] == doctest::Approx(0.25).epsilon(1e-12));
    }

    TEST_CASE("solve_radii_lp beats the greedy bound and is feasible")
    {
        Rng rng(8);
        for (int trial = 0; trial < 30; ++trial) {
            const int n = 5 + static_cast<int>(rng.index(22));
            Centers c(n, 2);
            for (int i = 0; i < n; ++i)
                c.row(i) << rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99);
            const Eigen::VectorXd r = solve_radii_lp(c);
            const Eigen::VectorXd greedy = greedy_radii(c);
            REQUIRE(validate_packing(c, greedy, 1e-12).valid);
            CHECK(r.sum() >= greedy.sum() - 1e-9);
            CHECK(validate_packing(c, r, 1e-9).valid);
            CHECK(r.minCoeff() >= 0.0);
        }
    }

    TEST_CASE("validate_packing examples")
    {
        Centers c(2, 2);
        c << 0.25, 0.5, 0.75, 0.5;
        CHECK(validate_packing(c, Eigen::Vector2d(0.25, 0.25), 0.0).valid);

        // Unit separation in a larger frame: scale into the square.
        Centers far(2, 2);
        far << 0.0, 0.0, 1.0, 0.0;
        const PackingCheck over = validate_packing(far, Eigen::Vector2d(0.6, 0.6), 1e-12);
        CHECK_FALSE(over.valid);
        int pairs = 0;
        for (const PackingViolation& v : over.violations)
            if (v.kind == PackingViolation::Kind::pair) {
                ++pairs;
                CHECK(v.amount == doctest::Approx(0.2));
            }
        CHECK(pairs == 1);

        Centers wall(1, 2);
        wall << 0.1, 0.5;
        const PackingCheck w = validate_packing(wall, Eigen::VectorXd::Constant(1, 0.2), 0.0);
        REQUIRE(w.violations.size() == 1);
        CHECK(w.violations[0].kind == PackingViolation::Kind::wall);
        CHECK(w.violations[0].wall == "left");
        CHECK(w.violations[0].amount == doctest::Approx(0.1));
    }

    TEST_CASE("construct_packing is feasible and deterministic")
    {
        PackingHyperparams h;
        h.n_iterations = 3000;
        const PackingSolution a = construct_packing(h);
        const PackingSolution b = construct_packing(h);
        CHECK(a.centers == b.centers);
        CHECK(a.radii == b.radii);
        CHECK(validate_packing(a.centers, a.radii, 1e-9).valid);
        CHECK(a.sum_radii == doctest::Approx(a.radii.sum()));
        CHECK(a.sum_radii > 2.5);
    }
}

TEST_SUITE("pointset")
{
    TEST_CASE("calculate_ratio examples")
    {
        PointSet two(2, 2);
        two << 0, 0, 1, 0;
        CHECK(calculate_ratio(two) == doctest::Approx(1.0));
        PointSet sq(4, 2);
        sq << 0, 0, 1, 0, 1, 1, 0, 1;
        CHECK(calculate_ratio(sq) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        const double r = calculate_ratio(published_ratio_points());
        CHECK(std::abs(r * r - 12.889230) <= 1e-5);
        PointSet dup(2, 2);
        dup << 0, 0, 0, 0;
        CHECK(std::isinf(calculate_ratio(dup)));
    }

    TEST_CASE("calculate_ratio is invariant under similarity transforms")
    {
        Rng rng(4);
        for (int trial = 0; trial < 50; ++trial) {
            PointSet p(16, 2);
            for (int i = 0; i < 16; ++i)
                p.row(i) << rng.normal(), rng.normal();
            const double th = rng.uniform(0, 2 * std::numbers::pi), s = rng.uniform(0.1, 10.0);
            Eigen::Matrix2d R;
            R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
            PointSet q = (s * p * R.transpose()).rowwise() + Eigen::RowVector2d(rng.normal(), rng.normal());
            CHECK(rel_err(calculate_ratio(p), calculate_ratio(q)) < 1e-12);
        }
    }

    TEST_CASE("ratio_constraints structure")
    {
        const RatioConstraintSystem sys;
        CHECK(sys.pairs() == 120);
        CHECK(sys.variables() == 33);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(33);
        for (int i = 0; i < 16; ++i)
            x[2 * i] = i; // collinear, unit spacing
        x[32] = 300.0;
        const RatioConstraints rc = ratio_constraints(x);
        REQUIRE(rc.values.size() == 240);
        CHECK(rc.values[0] == doctest::Approx(0.0)); // pair (0,1) at distance 1
        CHECK(rc.jacobian.col(32).head(120).cwiseAbs().maxCoeff() == 0.0);
        CHECK(rc.jacobian.col(32).tail(120).isOnes());
    }

    TEST_CASE("ratio Jacobian matches central finite differences on 100 inputs")
    {
        Rng rng(77);
        const RatioConstraintSystem sys;
        const double h = 1e-6;
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd x(33);
            for (int i = 0; i < 33; ++i)
                x[i] = rng.uniform(-3, 3);
            const Eigen::MatrixXd J = sys.jacobian(x);
            for (int v = 0; v < 33; ++v) {
                Eigen::VectorXd p = x, m = x;
                p[v] += h;
                m[v] -= h;
                const Eigen::VectorXd fd = (sys.values(p) - sys.values(m)) / (2 * h);
                for (Eigen::Index r = 0; r < fd.size(); ++r)
                    worst = std::max(worst, rel_err(J(r, v), fd[r], 1e-6));
            }
        }
        CHECK(worst < 1e-5);
    }

    TEST_CASE("normalize_points sets the minimum distance to one")
    {
        Rng rng(12);
        PointSet p(16, 2);
        for (int i = 0; i < 16; ++i)
            p.row(i) << rng.uniform(-5, 5), rng.uniform(-5, 5);
        const PointSet q = normalize_points(p);
        CHECK(std::sqrt(pairwise_sq_distances(q).minCoeff()) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(q.colwise().mean().norm() < 1e-12);
    }

    TEST_CASE("initial configurations")
    {
        const auto starts = ratio_initial_configurations();
        REQUIRE(starts.size() == 5);
        for (const RatioStart& s : starts) {
            CHECK(s.initial.rows() == 16);
            CHECK(std::isfinite(calculate_ratio(s.initial)));
        }
        CHECK(ratio_initial_configurations()[4].initial == starts[4].initial);
    }
}

TEST_SUITE("qp_sqp")
{
    TEST_CASE("solve_qp matches a hand-solved problem")
    {
        // min (x-1)^2 + (y-2)^2  s.t.  x + y <= 2  ->  (0.5, 1.5)
        const Eigen::Matrix2d G = 2 * Eigen::Matrix2d::Identity();
        const Eigen::Vector2d g(-2, -4);
        Eigen::MatrixXd C(1, 2);
        C << -1, -1;
        const QpResult r = solve_qp(G, g, C, Eigen::VectorXd::Constant(1, 2.0));
        REQUIRE(r.status == QpStatus::optimal);
        CHECK(r.x[0] == doctest::Approx(0.5));
        CHECK(r.x[1] == doctest::Approx(1.5));
        CHECK(r.multipliers[0] == doctest::Approx(1.0));

        Eigen::MatrixXd D(2, 2);
        D << 1, 0, -1, 0; // x >= 1 and x <= -1
        CHECK(solve_qp(G, g, D, Eigen::Vector2d(-1, -1)).status == QpStatus::infeasible);
    }

    TEST_CASE("minimize_sqp on a constrained Rosenbrock")
    {
        // min Rosenbrock s.t. x^2 + y^2 <= 1.5; solution on the boundary near (0.9072, 0.8228)
        NlpProblem p;
        p.objective = [](const Eigen::VectorXd& x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); };
        p.gradient = [](const Eigen::VectorXd& x) {
            return Eigen::Vector2d(-400 * x[0] * (x[1] - x[0] * x[0]) - 2 * (1 - x[0]), 200 * (x[1] - x[0] * x[0])).eval();
        };
        p.constraints = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, 1.5 - x.squaredNorm()); };
        p.jacobian = [](const Eigen::VectorXd& x) {
            Eigen::MatrixXd J(1, 2);
            J << -2 * x[0], -2 * x[1];
            return J;
        };
        const SqpResult r = minimize_sqp(p, Eigen::Vector2d(-1.0, 0.5));
        CHECK(r.converged);
        CHECK(r.x.squaredNorm() == doctest::Approx(1.5).epsilon(1e-8));
        CHECK(r.x[0] == doctest::Approx(0.9072).epsilon(1e-3));
        CHECK(r.kkt_residual <= 1e-8);
    }
}

TEST_SUITE("hermite")
{
    TEST_CASE("hermite_coefficients examples")
    {
        CHECK(hermite_coefficients(0) == std::vector<std::int64_t>{1});
        CHECK(hermite_coefficients(4) == std::vector<std::int64_t>{16, 0, -48, 0, 12});
        CHECK(hermite_coefficients(4).back() == 12);
        CHECK(hermite_coefficients(8).back() == 1680);
        CHECK(hermite_coefficients(12).back() == 665280);
        // Closed form H_2m(0) = (-1)^m (2m)!/m!
        for (int m = 0; m <= 10; ++m) {
            std::int64_t v = 1;
            for (int k = m + 1; k <= 2 * m; ++k)
                v *= k;
            CHECK(hermite_coefficients(2 * m).back() == (m % 2 ? -v : v));
        }
    }

    TEST_CASE("build_quotient")
    {
        CHECK(HermiteCoeffs{1, 0, 0}.c3() == doctest::Approx(-1.0 / 665280).epsilon(1e-12));
        Rng rng(31);
        for (int trial = 0; trial < 100; ++trial) {
            const HermiteCoeffs c{rng.uniform(-5, 5), rng.uniform(-1, 1), rng.uniform(-0.1, 0.1)};
            const Eigen::VectorXd P = hermite_polynomial(c);
            CHECK(std::abs(P[P.size() - 1]) < 1e-9 * P.cwiseAbs().maxCoeff());
            const HermiteQuotient q = build_quotient(c);
            const double sign = q.leading_p < 0 ? -1.0 : 1.0;
            for (int s = 0; s < 5; ++s) {
                const double x = rng.uniform(0.1, 4.0) * (rng.uniform() < 0.5 ? -1 : 1);
                CHECK(rel_err(polyval(q.gq, x), sign * polyval(P, x) / (x * x), 1e-300) < 1e-12);
            }
        }
    }

    TEST_CASE("uncertainty_objective at the published coefficients")
    {
        CHECK(std::abs(uncertainty_objective(published_hermite_coeffs()) - 0.3520991044160562) <= 1e-9);
    }

    TEST_CASE("uncertainty_objective properties")
    {
        const HermiteCoeffs c = published_hermite_coeffs();
        const double base = uncertainty_objective(c);
        const HermiteCoeffs nudged{c.c0 + 1e-12, c.c1 - 1e-12, c.c2 + 1e-12};
        CHECK(std::abs(uncertainty_objective(nudged) - base) < 1e-8);
        for (double lambda : {0.5, 2.0}) {
            const HermiteCoeffs s{lambda * c.c0, lambda * c.c1, lambda * c.c2};
            const auto b = hermite_bounds();
            if (std::abs(s.c0) <= b[0].second && std::abs(s.c1) <= b[1].second && std::abs(s.c2) <= b[2].second)
                CHECK(std::abs(uncertainty_objective(s) - base) < 1e-10);
        }
        // A positive constant has no positive roots in gq.
        CHECK(uncertainty_objective(HermiteCoeffs{0, 0, 0}) == kHermitePenalty);
        int zeros = 0;
        Rng rng(5);
        for (int i = 0; i < 2000 && zeros == 0; ++i) {
            const HermiteCoeffs r{rng.uniform(-5, 5), rng.uniform(-1, 1), rng.uniform(-0.1, 0.1)};
            const HermiteQuotient q = build_quotient(r);
            bool positive_root = false;
            for (const auto& z : polynomial_roots(q.gq))
                positive_root |= std::abs(z.imag()) <= 1e-8 && z.real() > 1e-9;
            if (!positive_root) {
                ++zeros;
                CHECK(uncertainty_objective(r) == 0.0);
            }
        }
    }

    TEST_CASE("polynomial_roots recovers known roots")
    {
        // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
        auto roots = polynomial_roots(Eigen::Vector4d(1, 0, -7, 6));
        std::vector<double> re;
        for (auto z : roots) {
            CHECK(std::abs(z.imag()) < 1e-10);
            re.push_back(z.real());
        }
        std::sort(re.begin(), re.end());
        CHECK(re[0] == doctest::Approx(-3));
        CHECK(re[1] == doctest::Approx(1));
        CHECK(re[2] == doctest::Approx(2));
    }

    TEST_CASE("de_search fixed point and determinism")
    {
        const HermiteCoeffs c = published_hermite_coeffs();
        DeOptions o;
        Eigen::MatrixXd pop(90, 3);
        for (int i = 0; i < 90; ++i)
            pop.row(i) = c.vector().transpose();
        o.initial_population = pop;
        o.max_iterations = 20;
        const HermiteSearchResult fixed = de_search(1, o);
        CHECK(std::abs(fixed.objective - uncertainty_objective(c)) <= 1e-12);

        DeOptions quick;
        quick.max_iterations = 30;
        quick.polish = false;
        const HermiteSearchResult a = de_search(9, quick), b = de_search(9, quick);
        CHECK(a.coeffs.vector() == b.coeffs.vector());
        CHECK(a.objective == b.objective);
    }
}

TEST_SUITE("optimize")
{
    TEST_CASE("nelder_mead and differential_evolution on smooth bowls")
    {
        const Objective f = [](const Eigen::VectorXd& x) { return (x - Eigen::Vector3d(1, -2, 0.5)).squaredNorm(); };
        const NelderMeadResult nm = nelder_mead(f, Eigen::Vector3d::Zero());
        CHECK(nm.fun < 1e-12);

        Box box{Eigen::Vector3d::Constant(-5), Eigen::Vector3d::Constant(5)};
        const DeResult de = differential_evolution(f, box);
        CHECK(de.fun < 1e-12);
        CHECK(de.x[1] == doctest::Approx(-2).epsilon(1e-6));

        const NelderMeadResult clamped = nelder_mead(f, Eigen::Vector3d::Zero(), {}, Box{Eigen::Vector3d::Constant(-1), Eigen::Vector3d::Constant(1)});
        CHECK(clamped.x[1] == doctest::Approx(-1.0));
    }
}

TEST_SUITE("temporal")
{
    TEST_CASE("ewma and ewvol examples")
    {
        const std::vector<double> c(10, 3.25);
        CHECK(ewma<double>(c) == doctest::Approx(3.25).epsilon(1e-15));
        CHECK(ewvol<double>(c) == 0.0);
        const std::vector<double> x{0, 1};
        CHECK(ewma<double>(x, 0.3) == doctest::Approx(1 / 1.7).epsilon(1e-15));
        CHECK_THROWS_AS(ewma<double>(std::vector<double>{}), std::invalid_argument);
        CHECK_THROWS_AS(ewma<double>(x, 1.0), std::invalid_argument);
    }

    TEST_CASE("risk_score and ew_changes examples")
    {
        const std::vector<std::string> same(6, "A");
        RiskMap m{{{"A", 0.4}}, 0.0};
        CHECK(risk_score(same, m) == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(ew_changes(same) == 0.0);

        const std::vector<std::string> ab{"A", "B"};
        RiskMap m2{{{"A", 0.0}, {"B", 1.0}}, 0.0};
        CHECK(risk_score(ab, m2, 0.3) == doctest::Approx(1 / 1.7).epsilon(1e-15));
        CHECK(ew_changes(ab, 0.3) == 1.0);

        // Consistent relabelling changes nothing.
        const std::vector<std::string> ba{"B", "A"};
        RiskMap swapped{{{"B", 0.0}, {"A", 1.0}}, 0.0};
        CHECK(risk_score(ba, swapped, 0.3) == risk_score(ab, m2, 0.3));
        CHECK(ew_changes(ba, 0.3) == ew_changes(ab, 0.3));
    }

    TEST_CASE("temporal features match a direct-summation oracle")
    {
        Rng rng(1000);
        const std::vector<std::string> cats{"a", "b", "c", "d"};
        RiskMap risk{{{"a", 0.1}, {"b", 0.7}, {"c", 0.35}}, 0.5};
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t n = 1 + rng.index(60);
            const double alpha = rng.uniform(0.01, 0.99);
            std::vector<double> x(n);
            std::vector<std::string> c(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = rng.normal(0, 10);
                c[i] = cats[rng.index(cats.size())];
            }
            std::vector<double> r(n);
            for (std::size_t i = 0; i < n; ++i)
                r[i] = risk(c[i]);
            worst = std::max({worst, std::abs(ewma<double>(x, alpha) - oracle_ewma(x, alpha)), std::abs(ewvol<double>(x, alpha) - oracle_ewvol(x, alpha)),
                              std::abs(risk_score(c, risk, alpha) - oracle_ewma(r, alpha)), std::abs(ew_changes(c, alpha) - oracle_changes(c, alpha))});
        }
        CHECK(worst <= 1e-12);
    }
}
