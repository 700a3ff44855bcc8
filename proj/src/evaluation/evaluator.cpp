#include <fmagent/evaluation/evaluator.hpp>

#include <fmagent/generation/generator.hpp>
#include <fmagent/workloads/benchmarks.hpp>
#include <fmagent/workloads/hermite.hpp>
#include <fmagent/workloads/packing.hpp>
#include <fmagent/workloads/pointset.hpp>

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <future>
#include <thread>

namespace fmagent {

    std::string_view to_string(Workload w)
    {
        switch (w) {
        case Workload::packing: return "packing";
        case Workload::pointset: return "pointset";
        case Workload::hermite: return "hermite";
        case Workload::sphere: return "sphere";
        case Workload::rastrigin: return "rastrigin";
        case Workload::custom: return "custom";
        }
        return "custom";
    }

    Workload parse_workload(std::string_view text)
    {
        for (auto w : {Workload::packing, Workload::pointset, Workload::hermite, Workload::sphere, Workload::rastrigin, Workload::custom})
            if (to_string(w) == text)
                return w;
        if (text == "points")
            return Workload::pointset;
        throw std::invalid_argument("unknown workload '" + std::string(text) + "'");
    }

    void EvaluatorSpec::validate() const
    {
        if (!(timeout_seconds > 0.0))
            throw std::invalid_argument("evaluator timeout must be positive");
        if ((workload == Workload::sphere || workload == Workload::rastrigin) && dimension < 1)
            throw std::invalid_argument("benchmark dimension must be positive");
        if (workload == Workload::custom && (!custom || !custom_bounds))
            throw std::invalid_argument("custom workload needs a function and bounds");
        if (!std::isfinite(weights.effectiveness) || !std::isfinite(weights.judge))
            throw std::invalid_argument("fitness weights must be finite");
    }

    json to_json(const EvaluatorSpec& s)
    {
        json j{{"workload", to_string(s.workload)},
               {"dimension", s.dimension},
               {"timeout_seconds", s.timeout_seconds},
               {"weights", {{"effectiveness", s.weights.effectiveness}, {"judge", s.weights.judge}}},
               {"judge", nullptr}};
        if (s.judge) {
            switch (s.judge->kind) {
            case JudgeHook::Kind::mock: j["judge"] = {{"kind", "mock"}}; break;
            case JudgeHook::Kind::http: j["judge"] = {{"kind", "http"}, {"endpoint", s.judge->endpoint}, {"timeout_seconds", s.judge->timeout_seconds}}; break;
            case JudgeHook::Kind::custom: j["judge"] = {{"kind", "custom"}}; break;
            }
        }
        return j;
    }

    EvaluatorSpec evaluator_spec_from_json(const json& j)
    {
        EvaluatorSpec s;
        try {
            s.workload = parse_workload(field_or<std::string>(j, "workload", "sphere"));
        }
        catch (const std::invalid_argument& e) {
            throw SchemaError(e.what());
        }
        s.dimension = field_or<int>(j, "dimension", 10);
        s.timeout_seconds = field_or<double>(j, "timeout_seconds", 120.0);
        const json w = field_or<json>(j, "weights", json::object());
        s.weights.effectiveness = field_or<double>(w, "effectiveness", 1.0);
        s.weights.judge = field_or<double>(w, "judge", 0.0);
        if (j.contains("judge") && !j.at("judge").is_null()) {
            const json& jj = j.at("judge");
            JudgeHook hook;
            const std::string kind = field_or<std::string>(jj, "kind", "mock");
            if (kind == "http") {
                hook.kind = JudgeHook::Kind::http;
                hook.endpoint = field<std::string>(jj, "endpoint");
                hook.timeout_seconds = field_or<double>(jj, "timeout_seconds", 30.0);
            }
            else if (kind != "mock")
                throw SchemaError("judge kind must be 'mock' or 'http'");
            s.judge = hook;
        }
        if (s.workload == Workload::custom)
            throw SchemaError("custom workloads cannot be configured from a document");
        try {
            s.validate();
        }
        catch (const std::invalid_argument& e) {
            throw SchemaError(e.what());
        }
        return s;
    }

    Bounds workload_bounds(const EvaluatorSpec& spec)
    {
        switch (spec.workload) {
        case Workload::sphere:
        case Workload::rastrigin: return Bounds::uniform(spec.dimension, -5.12, 5.12);
        case Workload::packing: return Bounds::uniform(2 * workloads::kPackingCircles, 0.001, 0.999);
        case Workload::pointset: return Bounds::uniform(2 * workloads::kRatioPoints, -3.0, 3.0);
        case Workload::hermite: {
            Bounds b{Eigen::VectorXd(3), Eigen::VectorXd(3)};
            const auto hb = workloads::hermite_bounds();
            for (int i = 0; i < 3; ++i) {
                b.lower[i] = hb[i].first;
                b.upper[i] = hb[i].second;
            }
            return b;
        }
        case Workload::custom: return spec.custom_bounds.value_or(Bounds{});
        }
        return {};
    }

    WorkloadScore score_workload(const EvaluatorSpec& spec, const Genome& genome)
    {
        if (spec.workload == Workload::custom)
            return spec.custom(genome);
        if (!genome.is_real())
            return {false, 0.0, std::string(to_string(spec.workload)) + " expects a real-vector genome"};
        const Eigen::VectorXd& x = genome.values();
        const Eigen::Index expected = workload_bounds(spec).size();
        if (x.size() != expected)
            return {false, 0.0, "expected " + std::to_string(expected) + " values, got " + std::to_string(x.size())};

        switch (spec.workload) {
        case Workload::sphere: return {true, workloads::sphere(x), std::nullopt};
        case Workload::rastrigin: return {true, workloads::rastrigin(x), std::nullopt};
        case Workload::packing: {
            const workloads::Centers centers = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>>(x.data(), workloads::kPackingCircles, 2);
            const Eigen::VectorXd radii = workloads::solve_radii_lp(centers);
            const auto check = workloads::validate_packing(centers, radii, 1e-9);
            if (!check.valid)
                return {false, 0.0, "packing violates " + std::to_string(check.violations.size()) + " constraint(s)"};
            return {true, radii.sum(), std::nullopt};
        }
        case Workload::pointset: {
            const workloads::PointSet p = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>>(x.data(), workloads::kRatioPoints, 2);
            const double ratio = workloads::calculate_ratio(p);
            if (!std::isfinite(ratio))
                return {false, 0.0, "coincident points"};
            return {true, -ratio * ratio, std::nullopt};
        }
        case Workload::hermite: {
            const double obj = workloads::uncertainty_objective(workloads::HermiteCoeffs::from(x));
            if (!(obj < workloads::kHermitePenalty))
                return {false, 0.0, "degenerate quotient polynomial"};
            return {true, -obj, std::nullopt};
        }
        case Workload::custom: break;
        }
        return {false, 0.0, "unsupported workload"};
    }

    JudgeResult judge_score(const JudgeHook& hook, const Genome& genome, double effectiveness)
    {
        double raw = 0.0;
        try {
            switch (hook.kind) {
            case JudgeHook::Kind::mock: {
                std::uint64_t h = fnv1a(to_json(genome).dump());
                raw = static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53;
                break;
            }
            case JudgeHook::Kind::custom:
                if (!hook.fn)
                    return {0.0, "judge hook has no function"};
                raw = hook.fn(genome, effectiveness);
                break;
            case JudgeHook::Kind::http: {
                const auto [host, path] = detail::split_endpoint(hook.endpoint);
                httplib::Client client(host);
                const auto usec = static_cast<std::time_t>(hook.timeout_seconds * 1e6);
                client.set_connection_timeout(usec / 1000000, usec % 1000000);
                client.set_read_timeout(usec / 1000000, usec % 1000000);
                const json body{{"genome", to_json(genome)}, {"effectiveness", std::isfinite(effectiveness) ? json(effectiveness) : json(nullptr)}};
                auto res = client.Post(path, body.dump(), "application/json");
                if (!res)
                    return {0.0, "judge request failed: " + httplib::to_string(res.error())};
                if (res->status < 200 || res->status >= 300)
                    return {0.0, "judge returned HTTP " + std::to_string(res->status)};
                const json reply = json::parse(res->body, nullptr, false);
                if (reply.is_discarded() || !reply.is_object() || !reply.contains("score") || !reply["score"].is_number())
                    return {0.0, "judge reply is not {\"score\": number}"};
                raw = reply["score"].get<double>();
                break;
            }
            }
        }
        catch (const std::exception& e) {
            return {0.0, std::string("judge failed: ") + e.what()};
        }
        if (std::isnan(raw))
            return {0.0, "judge returned NaN"};
        return {std::clamp(raw, 0.0, 1.0), std::nullopt};
    }

    namespace {

        using Clock = std::chrono::steady_clock;

        double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

        WorkloadScore guarded_score(const EvaluatorSpec& spec, const Genome& genome)
        {
            try {
                return score_workload(spec, genome);
            }
            catch (const std::exception& e) {
                return {false, 0.0, std::string("workload error: ") + e.what()};
            }
            catch (...) {
                return {false, 0.0, "workload error"};
            }
        }

    } // namespace

    FitnessReport evaluate(const EvaluatorSpec& spec, const Genome& genome)
    {
        const auto t0 = Clock::now();
        if (auto problem = genome.validate())
            return FitnessReport::failed(*problem, seconds_since(t0));
        if (!(spec.timeout_seconds > 0.0))
            return FitnessReport::failed("evaluator timeout must be positive", seconds_since(t0));

        // The worker owns copies so a timed-out evaluation can finish on its own.
        auto promise = std::make_shared<std::promise<WorkloadScore>>();
        std::future<WorkloadScore> future = promise->get_future();
        std::thread([promise, spec, genome] { promise->set_value(guarded_score(spec, genome)); }).detach();

        const auto budget = std::chrono::duration<double>(spec.timeout_seconds);
        if (future.wait_for(budget) != std::future_status::ready)
            return FitnessReport::failed("timeout", seconds_since(t0));

        const WorkloadScore score = future.get();
        if (!score.correct)
            return FitnessReport::failed(score.failure.value_or("incorrect"), seconds_since(t0));
        if (!std::isfinite(score.effectiveness))
            return FitnessReport::failed("non-finite effectiveness", seconds_since(t0));

        std::optional<double> judge;
        std::optional<std::string> warning;
        if (spec.judge) {
            JudgeResult jr = judge_score(*spec.judge, genome, score.effectiveness);
            judge = jr.score;
            warning = std::move(jr.warning);
        }
        FitnessReport report = FitnessReport::success(score.effectiveness, judge, spec.weights, seconds_since(t0));
        report.warning = std::move(warning);
        return report;
    }

} // namespace fmagent
