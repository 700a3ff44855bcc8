#include <fmagent/workloads/hermite.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fmagent::workloads {

    std::vector<std::int64_t> hermite_coefficients(int n)
    {
        if (n < 0 || n > 20)
            throw std::out_of_range("hermite_coefficients: n must lie in [0, 20]");

        // Ascending-order recurrence H_{k+1} = 2x H_k - 2k H_{k-1}.
        std::vector<std::int64_t> prev{1};
        std::vector<std::int64_t> cur{0, 2};
        if (n == 0)
            return prev;
        for (int k = 1; k < n; ++k) {
            std::vector<std::int64_t> next(k + 2, 0);
            for (int i = 0; i <= k; ++i)
                next[i + 1] += 2 * cur[i];
            for (int i = 0; i < k; ++i)
                next[i] -= 2 * k * prev[i];
            prev = std::move(cur);
            cur = std::move(next);
        }
        return {cur.rbegin(), cur.rend()};
    }

    namespace {

        struct HermiteBasis {
            std::array<Eigen::VectorXd, 4> h; // H0, H4, H8, H12 padded to 13 coefficients
            std::array<double, 4> at_zero;

            HermiteBasis()
            {
                constexpr int orders[] = {0, 4, 8, 12};
                for (int k = 0; k < 4; ++k) {
                    const std::vector<std::int64_t> c = hermite_coefficients(orders[k]);
                    h[k] = Eigen::VectorXd::Zero(13);
                    for (std::size_t i = 0; i < c.size(); ++i)
                        h[k][13 - c.size() + i] = static_cast<double>(c[i]);
                    at_zero[k] = static_cast<double>(c.back());
                }
            }
        };

        const HermiteBasis& basis()
        {
            static const HermiteBasis b;
            return b;
        }

    } // namespace

    double HermiteCoeffs::c3() const
    {
        const auto& z = basis().at_zero;
        return -(c0 * z[0] + c1 * z[1] + c2 * z[2]) / z[3];
    }

    std::array<std::pair<double, double>, 3> hermite_bounds() { return {{{-5.0, 5.0}, {-1.0, 1.0}, {-0.1, 0.1}}}; }

    HermiteCoeffs published_hermite_coeffs() { return {4.40581122518366186113780713640, -0.1550236238960183143831272900, -0.0011938260171886596119894541}; }

    Eigen::VectorXd hermite_polynomial(const HermiteCoeffs& c)
    {
        const auto& h = basis().h;
        return c.c0 * h[0] + c.c1 * h[1] + c.c2 * h[2] + c.c3() * h[3];
    }

    HermiteQuotient build_quotient(const HermiteCoeffs& c)
    {
        const Eigen::VectorXd p = hermite_polynomial(c);
        HermiteQuotient q;
        q.leading_p = p[0];
        q.gq = p.head(11);
        if (q.leading_p < 0)
            q.gq = -q.gq;
        return q;
    }

    std::vector<std::complex<double>> polynomial_roots(const Eigen::VectorXd& coeffs)
    {
        Eigen::Index first = 0;
        while (first < coeffs.size() && coeffs[first] == 0.0)
            ++first;
        Eigen::Index last = coeffs.size();
        while (last > first && coeffs[last - 1] == 0.0)
            --last;

        std::vector<std::complex<double>> roots(coeffs.size() - last, {0.0, 0.0});
        const Eigen::Index degree = last - first - 1;
        if (degree < 1)
            return roots;

        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
        companion.row(0) = -coeffs.segment(first + 1, degree).transpose() / coeffs[first];
        companion.bottomLeftCorner(degree - 1, degree - 1).setIdentity();

        Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("polynomial_roots: eigenvalue iteration failed");
        for (Eigen::Index i = 0; i < degree; ++i)
            roots.push_back(es.eigenvalues()[i]);
        return roots;
    }

    double uncertainty_objective(const HermiteCoeffs& c)
    {
        const HermiteQuotient q = build_quotient(c);
        if (!q.gq.allFinite() || std::abs(q.gq[0]) < 1e-12)
            return kHermitePenalty;

        std::vector<std::complex<double>> roots;
        try {
            roots = polynomial_roots(q.gq);
        }
        catch (const std::runtime_error&) {
            return kHermitePenalty;
        }

        double r_max = -1.0;
        for (const auto& r : roots)
            if (std::abs(r.imag()) <= 1e-8 && r.real() > 1e-9)
                r_max = std::max(r_max, r.real());
        if (r_max < 0)
            return 0.0;
        return r_max * r_max / (2.0 * std::numbers::pi);
    }

    HermiteSearchResult de_search(std::uint64_t seed, DeOptions options)
    {
        options.seed = seed;
        Box box{Eigen::VectorXd(3), Eigen::VectorXd(3)};
        const auto bounds = hermite_bounds();
        for (int i = 0; i < 3; ++i) {
            box.lower[i] = bounds[i].first;
            box.upper[i] = bounds[i].second;
        }
        HermiteSearchResult out;
        out.de = differential_evolution([](const Eigen::VectorXd& v) { return uncertainty_objective(HermiteCoeffs::from(v)); }, box, options);
        out.coeffs = HermiteCoeffs::from(out.de.x);
        out.objective = out.de.fun;
        return out;
    }

} // namespace fmagent::workloads
