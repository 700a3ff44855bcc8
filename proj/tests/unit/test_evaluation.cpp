#include <doctest.h>

#include <fmagent/evaluation/evaluator.hpp>
#include <fmagent/workloads/benchmarks.hpp>

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

using namespace fmagent;

namespace {

    EvaluatorSpec spec_for(Workload w, int dim = 10)
    {
        EvaluatorSpec s;
        s.workload = w;
        s.dimension = dim;
        return s;
    }

    Genome genome_in(const EvaluatorSpec& s, const Eigen::VectorXd& x) { return Genome::real(x, workload_bounds(s)); }

} // namespace

TEST_CASE("benchmark workloads")
{
    const EvaluatorSpec sphere = spec_for(Workload::sphere, 4);
    const FitnessReport at_zero = evaluate(sphere, genome_in(sphere, Eigen::VectorXd::Zero(4)));
    CHECK(at_zero.correct);
    CHECK(at_zero.effectiveness == 0.0);
    CHECK(at_zero.combined == 0.0);

    const FitnessReport off = evaluate(sphere, genome_in(sphere, Eigen::Vector4d(1, 2, 0, -1)));
    CHECK(off.effectiveness == doctest::Approx(-6.0));
    CHECK(off.eval_seconds >= 0.0);

    const EvaluatorSpec ras = spec_for(Workload::rastrigin, 2);
    const FitnessReport r = evaluate(ras, genome_in(ras, Eigen::Vector2d(0.5, 0)));
    CHECK(r.effectiveness == doctest::Approx(-(0.25 + 10 - 10 * std::cos(M_PI))));
}

TEST_CASE("invalid genomes are incorrect and name the problem")
{
    const EvaluatorSpec s = spec_for(Workload::sphere, 3);
    Eigen::Vector3d x(0, 0, 0);
    x[2] = std::numeric_limits<double>::quiet_NaN();
    const FitnessReport nan = evaluate(s, genome_in(s, x));
    CHECK_FALSE(nan.correct);
    CHECK(nan.combined == kSentinelFitness);
    REQUIRE(nan.failure);
    CHECK(nan.failure->find("index 2") != std::string::npos);

    x[2] = std::numeric_limits<double>::infinity();
    CHECK(evaluate(s, genome_in(s, x)).failure->find("index 2") != std::string::npos);

    const FitnessReport wrong_dim = evaluate(s, Genome::real(Eigen::Vector2d(0, 0), Bounds::uniform(2, -1, 1)));
    CHECK_FALSE(wrong_dim.correct);
    CHECK(wrong_dim.failure->find("expected 3") != std::string::npos);

    CHECK_FALSE(evaluate(s, Genome::text("x")).correct);
}

TEST_CASE("packing evaluation solves radii for any centers")
{
    const EvaluatorSpec s = spec_for(Workload::packing);
    Eigen::VectorXd x(52);
    for (int i = 0; i < 26; ++i) {
        x[2 * i] = 0.05 + 0.035 * i;
        x[2 * i + 1] = 0.5;
    }
    x[2] = x[0]; // two coincident centers
    x[3] = x[1];
    const FitnessReport r = evaluate(s, genome_in(s, x));
    CHECK(r.correct);
    CHECK(r.effectiveness > 0.0);
}

TEST_CASE("pointset and hermite evaluations")
{
    const EvaluatorSpec ps = spec_for(Workload::pointset);
    Eigen::VectorXd grid(32);
    for (int i = 0; i < 16; ++i) {
        grid[2 * i] = i % 4;
        grid[2 * i + 1] = i / 4;
    }
    grid /= 3.0;
    const FitnessReport g = evaluate(ps, genome_in(ps, grid));
    CHECK(g.correct);
    CHECK(g.effectiveness == doctest::Approx(-18.0).epsilon(1e-12)); // (3*sqrt 2)^2 for the 4x4 grid

    Eigen::VectorXd dup = grid;
    dup[2] = dup[0];
    dup[3] = dup[1];
    const FitnessReport d = evaluate(ps, genome_in(ps, dup));
    CHECK_FALSE(d.correct);

    const EvaluatorSpec hs = spec_for(Workload::hermite);
    const FitnessReport h = evaluate(hs, genome_in(hs, Eigen::Vector3d(0.32925, -0.01159, 0.0)));
    CHECK(h.correct);
    CHECK(h.effectiveness < 0.0);
}

TEST_CASE("judge hooks")
{
    const EvaluatorSpec base = spec_for(Workload::sphere, 2);
    const Genome g = genome_in(base, Eigen::Vector2d(1, 1));

    SUBCASE("mock judge is deterministic and in [0, 1]")
    {
        const JudgeResult a = judge_score(JudgeHook{}, g, -2.0);
        CHECK(a.score == judge_score(JudgeHook{}, g, -2.0).score);
        CHECK(a.score >= 0.0);
        CHECK(a.score <= 1.0);
        CHECK_FALSE(a.warning);
    }
    SUBCASE("custom judge is clamped")
    {
        JudgeHook hook;
        hook.kind = JudgeHook::Kind::custom;
        hook.fn = [](const Genome&, double) { return 1.7; };
        CHECK(judge_score(hook, g, 0).score == 1.0);
        hook.fn = [](const Genome&, double) { return -3.0; };
        CHECK(judge_score(hook, g, 0).score == 0.0);
        hook.fn = [](const Genome&, double) -> double { throw std::runtime_error("offline"); };
        const JudgeResult failed = judge_score(hook, g, 0);
        CHECK(failed.score == 0.0);
        REQUIRE(failed.warning);
        CHECK(failed.warning->find("offline") != std::string::npos);
    }
    SUBCASE("weights combine effectiveness and judge")
    {
        EvaluatorSpec s = base;
        JudgeHook hook;
        hook.kind = JudgeHook::Kind::custom;
        hook.fn = [](const Genome&, double) { return 0.25; };
        s.judge = hook;
        s.weights = {2.0, 4.0};
        const FitnessReport r = evaluate(s, g);
        CHECK(r.judge_score == 0.25);
        CHECK(r.combined == doctest::Approx(2.0 * -2.0 + 4.0 * 0.25));

        s.weights = {1.0, 0.0};
        const double c1 = evaluate(s, g).combined;
        hook.fn = [](const Genome&, double) { return 0.9; };
        s.judge = hook;
        CHECK(evaluate(s, g).combined == c1);
    }
    SUBCASE("http judge")
    {
        httplib::Server server;
        server.Post("/judge", [](const httplib::Request& req, httplib::Response& res) {
            const json body = json::parse(req.body);
            res.set_content(json{{"score", body["effectiveness"].get<double>() < 0 ? 0.3 : 0.9}}.dump(), "application/json");
        });
        server.Post("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
        const int port = server.bind_to_any_port("127.0.0.1");
        std::thread t([&] { server.listen_after_bind(); });
        server.wait_until_ready();

        JudgeHook hook;
        hook.kind = JudgeHook::Kind::http;
        hook.timeout_seconds = 5;
        hook.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/judge";
        CHECK(judge_score(hook, g, -2.0).score == 0.3);
        hook.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/broken";
        const JudgeResult bad = judge_score(hook, g, -2.0);
        CHECK(bad.score == 0.0);
        CHECK(bad.warning);

        server.stop();
        t.join();
    }
}

TEST_CASE("custom workloads: exceptions, timeouts, and purity")
{
    EvaluatorSpec s;
    s.workload = Workload::custom;
    s.custom_bounds = Bounds::uniform(2, 0, 1);
    const Genome g = Genome::real(Eigen::Vector2d(0.2, 0.4), *s.custom_bounds);

    s.custom = [](const Genome&) -> WorkloadScore { throw std::runtime_error("segfault avoided"); };
    const FitnessReport thrown = evaluate(s, g);
    CHECK_FALSE(thrown.correct);
    CHECK(thrown.failure->find("segfault avoided") != std::string::npos);

    s.custom = [](const Genome&) { return WorkloadScore{true, std::numeric_limits<double>::infinity(), std::nullopt}; };
    CHECK_FALSE(evaluate(s, g).correct);

    s.timeout_seconds = 0.2;
    s.custom = [](const Genome&) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1500));
        return WorkloadScore{true, 1.0, std::nullopt};
    };
    const auto t0 = std::chrono::steady_clock::now();
    const FitnessReport slow = evaluate(s, g);
    const double waited = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK_FALSE(slow.correct);
    CHECK(slow.failure == "timeout");
    CHECK(waited < 1.0);

    s.timeout_seconds = 5;
    s.custom = [](const Genome& x) { return WorkloadScore{true, x.values().sum(), std::nullopt}; };
    const FitnessReport a = evaluate(s, g), b = evaluate(s, g);
    CHECK(a.correct);
    CHECK(a.effectiveness == b.effectiveness);
    CHECK(a.combined == b.combined);
}

TEST_CASE("evaluator spec JSON")
{
    EvaluatorSpec s = spec_for(Workload::rastrigin, 6);
    s.weights = {1.0, 0.5};
    s.judge = JudgeHook{};
    const EvaluatorSpec back = evaluator_spec_from_json(to_json(s));
    CHECK(back.workload == Workload::rastrigin);
    CHECK(back.dimension == 6);
    CHECK(back.weights.judge == 0.5);
    REQUIRE(back.judge);
    CHECK(back.judge->kind == JudgeHook::Kind::mock);
    CHECK(workload_bounds(back).size() == 6);
    CHECK(workload_bounds(spec_for(Workload::packing)).size() == 52);
    CHECK(workload_bounds(spec_for(Workload::pointset)).size() == 32);
    CHECK(workload_bounds(spec_for(Workload::hermite)).size() == 3);

    CHECK_THROWS_AS(evaluator_spec_from_json(json{{"workload", "custom"}}), SchemaError);
    CHECK_THROWS_AS(evaluator_spec_from_json(json{{"workload", "sphere"}, {"timeout_seconds", 0}}), SchemaError);
    CHECK_THROWS_AS(evaluator_spec_from_json(json{{"workload", "sphere"}, {"judge", {{"kind", "oracle"}}}}), SchemaError);
    CHECK_THROWS(parse_workload("tsp"));
}
