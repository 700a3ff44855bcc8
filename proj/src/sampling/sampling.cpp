#include <fmagent/sampling/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace fmagent {

    namespace {

        std::map<std::string, int> token_counts(const std::string& text)
        {
            std::map<std::string, int> counts;
            std::istringstream in(text);
            std::string tok;
            while (in >> tok)
                ++counts[tok];
            return counts;
        }

        double text_distance(const std::string& a, const std::string& b)
        {
            const auto ca = token_counts(a);
            const auto cb = token_counts(b);
            long inter = 0, uni = 0;
            auto ia = ca.begin();
            auto ib = cb.begin();
            while (ia != ca.end() || ib != cb.end()) {
                if (ib == cb.end() || (ia != ca.end() && ia->first < ib->first)) {
                    uni += ia->second;
                    ++ia;
                }
                else if (ia == ca.end() || ib->first < ia->first) {
                    uni += ib->second;
                    ++ib;
                }
                else {
                    inter += std::min(ia->second, ib->second);
                    uni += std::max(ia->second, ib->second);
                    ++ia;
                    ++ib;
                }
            }
            return uni == 0 ? 0.0 : 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
        }

        void check_comparable(const Genome& a, const Genome& b)
        {
            if (a.kind() != b.kind())
                throw std::invalid_argument("genome_distance: kind mismatch");
            if (a.is_real() && !(a.bounds() == b.bounds()))
                throw std::invalid_argument("genome_distance: bounds mismatch");
        }

        std::size_t categorical(const std::vector<double>& weights, Rng& rng)
        {
            const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
            double u = rng.uniform() * total;
            for (std::size_t i = 0; i < weights.size(); ++i) {
                if (u < weights[i])
                    return i;
                u -= weights[i];
            }
            // Rounding left u past the end: take the last positive weight.
            for (std::size_t i = weights.size(); i-- > 0;)
                if (weights[i] > 0.0)
                    return i;
            return weights.size() - 1;
        }

        // Index order of pool entries by (combined desc, created_seq asc).
        std::vector<std::size_t> ranked(const SamplingPool& pool)
        {
            std::vector<std::size_t> order(pool.entries.size());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const auto& ea = pool.entries[a];
                const auto& eb = pool.entries[b];
                if (ea.combined != eb.combined)
                    return ea.combined > eb.combined;
                return ea.created_seq < eb.created_seq;
            });
            return order;
        }

        struct ClusterView {
            std::vector<int> labels;                      // distinct cluster labels, ascending
            std::vector<std::vector<std::size_t>> members; // entry indices per label
            std::vector<double> best;                     // per-cluster best combined
        };

        ClusterView clusters_of(const SamplingPool& pool)
        {
            std::map<int, std::vector<std::size_t>> by_label;
            for (std::size_t i = 0; i < pool.entries.size(); ++i)
                by_label[pool.entries[i].cluster].push_back(i);
            ClusterView v;
            for (auto& [label, idx] : by_label) {
                v.labels.push_back(label);
                double best = std::numeric_limits<double>::lowest();
                for (std::size_t i : idx)
                    best = std::max(best, pool.entries[i].combined);
                v.best.push_back(best);
                v.members.push_back(std::move(idx));
            }
            return v;
        }

        std::vector<double> member_values(const SamplingPool& pool, const std::vector<std::size_t>& idx)
        {
            std::vector<double> v;
            v.reserve(idx.size());
            for (std::size_t i : idx)
                v.push_back(pool.entries[i].combined);
            return v;
        }

        std::vector<std::size_t> elite_indices(const SamplingPool& pool)
        {
            std::vector<std::size_t> out;
            for (const CandidateId& id : pool.elites)
                for (std::size_t i = 0; i < pool.entries.size(); ++i)
                    if (pool.entries[i].id == id) {
                        out.push_back(i);
                        break;
                    }
            return out;
        }

    } // namespace

    Eigen::VectorXd normalized_coordinates(const Genome& g)
    {
        const Eigen::ArrayXd range = g.bounds().range().array();
        return ((g.values() - g.bounds().lower).array() / range).unaryExpr([](double v) { return std::isfinite(v) ? v : 0.0; }).matrix();
    }

    double genome_distance(const Genome& a, const Genome& b)
    {
        check_comparable(a, b);
        if (!a.is_real())
            return text_distance(a.text(), b.text());
        if (a.size() == 0)
            return 0.0;
        const double d = (normalized_coordinates(a) - normalized_coordinates(b)).norm() / std::sqrt(static_cast<double>(a.size()));
        return std::min(d, 1.0);
    }

    double compute_diversity(const std::vector<const Genome*>& population)
    {
        if (population.empty())
            throw std::invalid_argument("compute_diversity: empty population");
        const std::size_t n = population.size();
        if (n == 1)
            return 0.0;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                sum += genome_distance(*population[i], *population[j]);
        return sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
    }

    std::vector<std::vector<std::size_t>> ClusterAssignment::groups() const
    {
        std::vector<std::vector<std::size_t>> g(clusters());
        for (std::size_t i = 0; i < labels.size(); ++i)
            g[labels[i]].push_back(i);
        return g;
    }

    int ClusterAssignment::cluster_of(const CandidateId& id) const
    {
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (ids[i] == id)
                return labels[i];
        return -1;
    }

    ClusterAssignment cluster_genomes(const std::vector<CandidateId>& ids, const std::vector<const Genome*>& genomes, int k, std::uint64_t seed, bool keep_empty)
    {
        if (ids.size() != genomes.size())
            throw std::invalid_argument("cluster_genomes: ids and genomes differ in length");
        if (k < 1)
            throw std::invalid_argument("cluster_genomes: K must be positive");
        ClusterAssignment out;
        out.ids = ids;
        const std::size_t n = genomes.size();
        if (n == 0)
            return out;
        for (std::size_t i = 1; i < n; ++i)
            check_comparable(*genomes[0], *genomes[i]);

        const std::size_t K = std::min<std::size_t>(static_cast<std::size_t>(k), n);
        const bool real = genomes[0]->is_real();

        std::vector<Eigen::VectorXd> points;
        Eigen::MatrixXd dist;
        if (real) {
            for (const Genome* g : genomes)
                points.push_back(normalized_coordinates(*g));
        }
        else {
            dist = Eigen::MatrixXd::Zero(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    dist(i, j) = dist(j, i) = genome_distance(*genomes[i], *genomes[j]);
        }
        auto point_distance = [&](std::size_t i, std::size_t j) { return real ? (points[i] - points[j]).norm() : dist(i, j); };

        // Farthest-point seeding.
        Rng rng(seed);
        std::vector<std::size_t> seeds{static_cast<std::size_t>(rng.index(n))};
        std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
        std::vector<char> chosen(n, 0);
        chosen[seeds[0]] = 1;
        while (seeds.size() < K) {
            for (std::size_t i = 0; i < n; ++i)
                nearest[i] = std::min(nearest[i], point_distance(i, seeds.back()));
            std::size_t pick = n;
            for (std::size_t i = 0; i < n; ++i)
                if (!chosen[i] && (pick == n || nearest[i] > nearest[pick]))
                    pick = i;
            seeds.push_back(pick);
            chosen[pick] = 1;
        }

        std::vector<int> labels(n, -1);
        if (real) {
            std::vector<Eigen::VectorXd> centroids;
            for (std::size_t s : seeds)
                centroids.push_back(points[s]);
            for (int round = 0; round < 50; ++round) {
                bool changed = false;
                for (std::size_t i = 0; i < n; ++i) {
                    int best = 0;
                    double bd = (points[i] - centroids[0]).squaredNorm();
                    for (std::size_t c = 1; c < K; ++c) {
                        const double d = (points[i] - centroids[c]).squaredNorm();
                        if (d < bd) {
                            bd = d;
                            best = static_cast<int>(c);
                        }
                    }
                    if (labels[i] != best) {
                        labels[i] = best;
                        changed = true;
                    }
                }
                if (!changed)
                    break;
                std::vector<Eigen::VectorXd> sums(K, Eigen::VectorXd::Zero(points[0].size()));
                std::vector<int> counts(K, 0);
                for (std::size_t i = 0; i < n; ++i) {
                    sums[labels[i]] += points[i];
                    ++counts[labels[i]];
                }
                for (std::size_t c = 0; c < K; ++c)
                    if (counts[c] > 0)
                        centroids[c] = sums[c] / counts[c];
            }
            out.centroids = std::move(centroids);
        }
        else {
            std::vector<std::size_t> medoids = seeds;
            for (int round = 0; round < 50; ++round) {
                bool changed = false;
                for (std::size_t i = 0; i < n; ++i) {
                    int best = 0;
                    for (std::size_t c = 1; c < K; ++c)
                        if (dist(i, medoids[c]) < dist(i, medoids[best]))
                            best = static_cast<int>(c);
                    if (labels[i] != best) {
                        labels[i] = best;
                        changed = true;
                    }
                }
                if (!changed)
                    break;
                for (std::size_t c = 0; c < K; ++c) {
                    double best_cost = std::numeric_limits<double>::infinity();
                    for (std::size_t i = 0; i < n; ++i) {
                        if (labels[i] != static_cast<int>(c))
                            continue;
                        double cost = 0.0;
                        for (std::size_t j = 0; j < n; ++j)
                            if (labels[j] == static_cast<int>(c))
                                cost += dist(i, j);
                        if (cost < best_cost) {
                            best_cost = cost;
                            medoids[c] = i;
                        }
                    }
                }
            }
            out.medoids = std::move(medoids);
        }

        if (!keep_empty) {
            std::vector<int> remap(K, -1);
            int next = 0;
            for (std::size_t c = 0; c < K; ++c)
                if (std::find(labels.begin(), labels.end(), static_cast<int>(c)) != labels.end())
                    remap[c] = next++;
            for (int& l : labels)
                l = remap[l];
            if (real) {
                std::vector<Eigen::VectorXd> kept;
                for (std::size_t c = 0; c < K; ++c)
                    if (remap[c] >= 0)
                        kept.push_back(out.centroids[c]);
                out.centroids = std::move(kept);
            }
            else {
                std::vector<std::size_t> kept;
                for (std::size_t c = 0; c < K; ++c)
                    if (remap[c] >= 0)
                        kept.push_back(out.medoids[c]);
                out.medoids = std::move(kept);
            }
        }
        out.labels = std::move(labels);
        return out;
    }

    std::string_view to_string(SamplingStrategy s)
    {
        switch (s) {
        case SamplingStrategy::adaptive:
            return "adaptive";
        case SamplingStrategy::random:
            return "random";
        case SamplingStrategy::top_k:
            return "top_k";
        }
        return "adaptive";
    }

    SamplingStrategy parse_strategy(std::string_view text)
    {
        if (text == "adaptive")
            return SamplingStrategy::adaptive;
        if (text == "random")
            return SamplingStrategy::random;
        if (text == "top_k")
            return SamplingStrategy::top_k;
        throw std::invalid_argument("unknown sampling strategy '" + std::string(text) + "'");
    }

    void SamplerConfig::validate() const
    {
        if (k < 1)
            throw std::invalid_argument("sampler: k must be positive");
        if (!(tau_min > 0) || !(tau_max > 0) || tau_min > tau_max)
            throw std::invalid_argument("sampler: need 0 < tau_min <= tau_max");
        if (!(epsilon_max >= 0 && epsilon_max <= 1))
            throw std::invalid_argument("sampler: epsilon_max must lie in [0, 1]");
        if (!(p_elite >= 0 && p_elite <= 1))
            throw std::invalid_argument("sampler: p_elite must lie in [0, 1]");
        if (clusters < 1)
            throw std::invalid_argument("sampler: clusters must be positive");
    }

    double sampling_temperature(const SamplerConfig& config, double diversity) { return config.tau_min + (config.tau_max - config.tau_min) * diversity; }

    std::vector<double> normalized_softmax(const std::vector<double>& values, double tau)
    {
        std::vector<double> w(values.size(), 1.0);
        if (values.empty())
            return w;
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        const double vmin = *lo, vmax = *hi;
        if (!(vmax > vmin))
            return w;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double u = (values[i] - vmin) / (vmax - vmin);
            if (tau <= 0.0)
                w[i] = values[i] == vmax ? 1.0 : 0.0;
            else
                w[i] = std::exp((u - 1.0) / tau);
        }
        return w;
    }

    std::vector<double> selection_probabilities(const SamplingPool& pool, const SamplerConfig& config)
    {
        const std::size_t n = pool.entries.size();
        std::vector<double> p(n, 0.0);
        if (n == 0)
            return p;

        switch (config.strategy) {
        case SamplingStrategy::random:
            std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n));
            return p;
        case SamplingStrategy::top_k: {
            const auto order = ranked(pool);
            const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(config.k), n);
            for (std::size_t r = 0; r < k; ++r)
                p[order[r]] = 1.0 / static_cast<double>(k);
            return p;
        }
        case SamplingStrategy::adaptive:
            break;
        }

        const auto elites = elite_indices(pool);
        const double pe = elites.empty() ? 0.0 : config.p_elite;
        for (std::size_t i : elites)
            p[i] += pe / static_cast<double>(elites.size());

        const double tau = sampling_temperature(config, pool.diversity);
        const double eps = config.epsilon_max * (1.0 - pool.diversity);
        const ClusterView cv = clusters_of(pool);
        const std::vector<double> cw = normalized_softmax(cv.best, tau);
        const double cw_sum = std::accumulate(cw.begin(), cw.end(), 0.0);
        const double nc = static_cast<double>(cv.labels.size());
        for (std::size_t c = 0; c < cv.labels.size(); ++c) {
            const double pc = eps / nc + (1.0 - eps) * cw[c] / cw_sum;
            const std::vector<double> mw = normalized_softmax(member_values(pool, cv.members[c]), tau);
            const double mw_sum = std::accumulate(mw.begin(), mw.end(), 0.0);
            for (std::size_t j = 0; j < mw.size(); ++j)
                p[cv.members[c][j]] += (1.0 - pe) * pc * mw[j] / mw_sum;
        }
        return p;
    }

    std::vector<CandidateId> select_parents(const SamplingPool& pool, const SamplerConfig& config, int n_parents, Rng& rng)
    {
        if (n_parents < 1 || n_parents > 2)
            throw std::invalid_argument("select_parents: n_parents must be 1 or 2");
        if (pool.entries.empty())
            throw NoEligibleParent();

        std::vector<CandidateId> out;
        const std::size_t n = pool.entries.size();
        for (int draw = 0; draw < n_parents; ++draw) {
            switch (config.strategy) {
            case SamplingStrategy::random:
                out.push_back(pool.entries[rng.index(n)].id);
                break;
            case SamplingStrategy::top_k: {
                const auto order = ranked(pool);
                const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(config.k), n);
                out.push_back(pool.entries[order[rng.index(k)]].id);
                break;
            }
            case SamplingStrategy::adaptive: {
                const auto elites = elite_indices(pool);
                if (rng.uniform() < config.p_elite && !elites.empty()) {
                    out.push_back(pool.entries[elites[rng.index(elites.size())]].id);
                    break;
                }
                const double tau = sampling_temperature(config, pool.diversity);
                const double eps = config.epsilon_max * (1.0 - pool.diversity);
                const ClusterView cv = clusters_of(pool);
                std::size_t c;
                if (rng.uniform() < eps)
                    c = rng.index(cv.labels.size());
                else
                    c = categorical(normalized_softmax(cv.best, tau), rng);
                const auto& members = cv.members[c];
                const std::size_t j = categorical(normalized_softmax(member_values(pool, members), tau), rng);
                out.push_back(pool.entries[members[j]].id);
                break;
            }
            }
        }
        return out;
    }

} // namespace fmagent
