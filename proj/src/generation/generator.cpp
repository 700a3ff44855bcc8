#include <fmagent/generation/generator.hpp>

#include <cmath>

namespace fmagent {

    std::string_view to_string(GeneratorKind k)
    {
        switch (k) {
        case GeneratorKind::gaussian_mutation: return "gaussian_mutation";
        case GeneratorKind::blend_crossover: return "blend_crossover";
        case GeneratorKind::reseed: return "reseed";
        case GeneratorKind::mock_llm: return "mock_llm";
        case GeneratorKind::external: return "external";
        }
        return "reseed";
    }

    GeneratorKind parse_generator_kind(std::string_view text)
    {
        for (auto k : {GeneratorKind::gaussian_mutation, GeneratorKind::blend_crossover, GeneratorKind::reseed, GeneratorKind::mock_llm, GeneratorKind::external})
            if (to_string(k) == text)
                return k;
        throw std::invalid_argument("unknown generator kind '" + std::string(text) + "'");
    }

    double GeneratorSpec::number(const std::string& key, double fallback) const
    {
        auto it = params.find(key);
        if (it == params.end())
            return fallback;
        if (const double* d = std::get_if<double>(&it->second))
            return *d;
        throw std::invalid_argument("generator param '" + key + "' must be a number");
    }

    std::string GeneratorSpec::text(const std::string& key, const std::string& fallback) const
    {
        auto it = params.find(key);
        if (it == params.end())
            return fallback;
        if (const std::string* s = std::get_if<std::string>(&it->second))
            return *s;
        throw std::invalid_argument("generator param '" + key + "' must be text");
    }

    int GeneratorSpec::arity() const
    {
        switch (kind) {
        case GeneratorKind::gaussian_mutation:
        case GeneratorKind::mock_llm: return 1;
        case GeneratorKind::blend_crossover: return 2;
        case GeneratorKind::reseed: return 0;
        case GeneratorKind::external: return static_cast<int>(number("parents", 1.0));
        }
        return 0;
    }

    void GeneratorSpec::validate() const
    {
        if (name.empty())
            throw std::invalid_argument("generator name is empty");
        switch (kind) {
        case GeneratorKind::gaussian_mutation:
        case GeneratorKind::mock_llm:
            if (!(number("sigma_frac", 0.05) >= 0.0))
                throw std::invalid_argument(name + ": sigma_frac must be non-negative");
            break;
        case GeneratorKind::blend_crossover: {
            const double alpha = number("alpha", 0.5);
            if (!(alpha >= 0.0 && alpha <= 1.0))
                throw std::invalid_argument(name + ": alpha must lie in [0, 1]");
            break;
        }
        case GeneratorKind::external:
            if (text("endpoint").empty())
                throw std::invalid_argument(name + ": external generator needs an endpoint");
            if (!(number("timeout_seconds", 30.0) > 0.0))
                throw std::invalid_argument(name + ": timeout_seconds must be positive");
            if (arity() < 0 || arity() > 2)
                throw std::invalid_argument(name + ": parents must be 0, 1 or 2");
            break;
        case GeneratorKind::reseed: break;
        }
    }

    GeneratorSpec GeneratorSpec::gaussian(double sigma_frac, std::string name)
    {
        return {std::move(name), GeneratorKind::gaussian_mutation, {{"sigma_frac", sigma_frac}}, std::nullopt};
    }

    GeneratorSpec GeneratorSpec::point_mutation(double sigma_frac, std::string name)
    {
        return {std::move(name), GeneratorKind::gaussian_mutation, {{"sigma_frac", sigma_frac}, {"point", 1.0}}, std::nullopt};
    }

    GeneratorSpec GeneratorSpec::blend(double alpha, std::string name)
    {
        return {std::move(name), GeneratorKind::blend_crossover, {{"alpha", alpha}}, std::nullopt};
    }

    GeneratorSpec GeneratorSpec::reseed_spec(std::string name) { return {std::move(name), GeneratorKind::reseed, {}, std::nullopt}; }

    GeneratorSpec GeneratorSpec::mock(std::string name) { return {std::move(name), GeneratorKind::mock_llm, {}, std::nullopt}; }

    GeneratorSpec GeneratorSpec::external(std::string endpoint, double timeout_seconds, std::string name)
    {
        return {std::move(name), GeneratorKind::external, {{"endpoint", std::move(endpoint)}, {"timeout_seconds", timeout_seconds}}, std::nullopt};
    }

    json to_json(const GeneratorSpec& s)
    {
        json params = json::object();
        for (const auto& [k, v] : s.params)
            std::visit([&](const auto& x) { params[k] = x; }, v);
        return {{"name", s.name}, {"kind", to_string(s.kind)}, {"params", params}, {"guidance", s.guidance ? json(*s.guidance) : json(nullptr)}};
    }

    GeneratorSpec generator_spec_from_json(const json& j)
    {
        GeneratorSpec s;
        try {
            s.kind = parse_generator_kind(field<std::string>(j, "kind"));
        }
        catch (const std::invalid_argument& e) {
            throw SchemaError(e.what());
        }
        s.name = field_or<std::string>(j, "name", std::string(to_string(s.kind)));
        const json params = field_or<json>(j, "params", json::object());
        for (const auto& [k, v] : params.items()) {
            if (v.is_number())
                s.params[k] = v.get<double>();
            else if (v.is_string())
                s.params[k] = v.get<std::string>();
            else
                throw SchemaError("generator param '" + k + "' must be a number or text");
        }
        if (j.contains("guidance") && !j.at("guidance").is_null())
            s.guidance = field<std::string>(j, "guidance");
        try {
            s.validate();
        }
        catch (const std::invalid_argument& e) {
            throw SchemaError(e.what());
        }
        return s;
    }

    namespace {

        void require_parents(const GeneratorSpec& spec, const std::vector<const Candidate*>& parents, std::size_t n)
        {
            if (parents.size() != n)
                throw std::invalid_argument(spec.name + ": expected " + std::to_string(n) + " parent(s), got " + std::to_string(parents.size()));
        }

        const Eigen::VectorXd& real_values(const GeneratorSpec& spec, const Candidate& parent, const Bounds& bounds)
        {
            if (!parent.genome.is_real())
                throw std::invalid_argument(spec.name + ": parent is not a real vector");
            if (parent.genome.size() != bounds.size())
                throw std::invalid_argument(spec.name + ": parent dimension does not match the bounds");
            return parent.genome.values();
        }

        Eigen::VectorXd uniform_draw(const Bounds& bounds, Rng& rng)
        {
            Eigen::VectorXd x(bounds.size());
            for (Eigen::Index i = 0; i < x.size(); ++i)
                x[i] = rng.uniform(bounds.lower[i], bounds.upper[i]);
            return x;
        }

        Eigen::VectorXd gaussian_step(const Eigen::VectorXd& parent, const Bounds& bounds, double sigma_frac, bool single, Rng& rng)
        {
            Eigen::VectorXd child = parent;
            const Eigen::VectorXd sigma = sigma_frac * bounds.range();
            if (single && child.size() > 0) {
                const auto i = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(child.size())));
                child[i] += sigma[i] * rng.normal();
            }
            else {
                for (Eigen::Index i = 0; i < child.size(); ++i)
                    child[i] += sigma[i] * rng.normal();
            }
            return bounds.clamp(child);
        }

        std::uint64_t mock_seed(const GeneratorSpec& spec, const Candidate& parent)
        {
            std::uint64_t h = fnv1a(to_json(parent.genome).dump());
            h = fnv1a(spec.guidance.value_or(""), fnv1a("|guidance|", h));
            json params = to_json(spec).at("params");
            return fnv1a(params.dump(), fnv1a("|params|", h));
        }

    } // namespace

    Genome propose(const GeneratorSpec& spec, const std::vector<const Candidate*>& parents, const Bounds& bounds, Rng& rng)
    {
        switch (spec.kind) {
        case GeneratorKind::gaussian_mutation: {
            require_parents(spec, parents, 1);
            const Eigen::VectorXd& p = real_values(spec, *parents[0], bounds);
            return Genome::real(gaussian_step(p, bounds, spec.number("sigma_frac", 0.05), spec.number("point", 0.0) != 0.0, rng), bounds);
        }
        case GeneratorKind::blend_crossover: {
            require_parents(spec, parents, 2);
            const Eigen::VectorXd& a = real_values(spec, *parents[0], bounds);
            const Eigen::VectorXd& b = real_values(spec, *parents[1], bounds);
            if (!(parents[0]->genome.bounds() == parents[1]->genome.bounds()))
                throw std::invalid_argument(spec.name + ": parents have different bounds");
            const double alpha = spec.number("alpha", 0.5);
            Eigen::VectorXd child(a.size());
            for (Eigen::Index i = 0; i < a.size(); ++i) {
                const double u = rng.uniform(-alpha, 1.0 + alpha);
                child[i] = u * a[i] + (1.0 - u) * b[i];
            }
            return Genome::real(bounds.clamp(child), bounds);
        }
        case GeneratorKind::reseed:
            require_parents(spec, parents, 0);
            return Genome::real(uniform_draw(bounds, rng), bounds);
        case GeneratorKind::mock_llm: {
            if (parents.empty())
                return Genome::real(uniform_draw(bounds, rng), bounds);
            require_parents(spec, parents, 1);
            Rng local(mock_seed(spec, *parents[0]));
            if (!parents[0]->genome.is_real())
                return Genome::text(parents[0]->genome.text() + " t" + std::to_string(local.index(1000)));
            const Eigen::VectorXd& p = real_values(spec, *parents[0], bounds);
            return Genome::real(gaussian_step(p, bounds, spec.number("sigma_frac", 0.05), false, local), bounds);
        }
        case GeneratorKind::external:
            require_parents(spec, parents, static_cast<std::size_t>(spec.arity()));
            return Genome::real(bounds.clamp(detail::external_propose(spec, parents, bounds)), bounds);
        }
        throw std::invalid_argument("unknown generator kind");
    }

    std::vector<Candidate> cold_start_generate(const std::vector<GeneratorSpec>& specs, std::size_t n, const Bounds& bounds, std::uint64_t seed)
    {
        std::vector<Candidate> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            Candidate c;
            c.id = CandidateId::derive(seed, "cold_start", i);
            Rng rng(derive_seed(seed, {fnv1a("cold_start"), i}));
            bool done = false;
            if (!specs.empty()) {
                const GeneratorSpec& spec = specs[i % specs.size()];
                try {
                    // Zero-parent proposals only: mutation-type specs have nothing to vary yet.
                    const bool zero_parent_capable = spec.kind == GeneratorKind::reseed || spec.kind == GeneratorKind::mock_llm || (spec.kind == GeneratorKind::external && spec.arity() == 0);
                    if (zero_parent_capable) {
                        c.genome = propose(spec, {}, bounds, rng);
                        c.provenance = spec.name;
                        done = true;
                    }
                }
                catch (const std::exception&) {
                }
            }
            if (!done) {
                Rng fallback(derive_seed(seed, {fnv1a("cold_start_reseed"), i}));
                c.genome = Genome::real(uniform_draw(bounds, fallback), bounds);
                c.provenance = "reseed";
            }
            out.push_back(std::move(c));
        }
        return out;
    }

} // namespace fmagent
