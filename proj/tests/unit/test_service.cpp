#include <doctest.h>

#include "support.hpp"

#include <fmagent/pipeline/engine.hpp>
#include <fmagent/service/http_service.hpp>
#include <fmagent/service/replay.hpp>
#include <fmagent/service/run_manager.hpp>

#include <httplib.h>

#include <sys/wait.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

using namespace fmagent;
using namespace std::chrono_literals;
using fmagent::testing::slurp;
using fmagent::testing::TempDir;

namespace {

    RunConfig small_config(std::uint64_t generations, const std::string& id = "svc")
    {
        RunConfig c;
        c.run_id = id;
        c.seed = 5;
        c.evaluator.workload = Workload::rastrigin;
        c.evaluator.dimension = 3;
        c.islands = 2;
        c.generations = generations;
        c.offspring_per_island = 4;
        c.params.migration.interval = 4;
        c.pipeline = {2, 2, 4, 2};
        return c;
    }

    json small_config_json(std::uint64_t generations)
    {
        json j = to_json(small_config(generations));
        j.erase("run_id");
        return j;
    }

    void write_text(const std::filesystem::path& p, const std::string& text)
    {
        std::ofstream out(p, std::ios::binary);
        out << text;
    }

    template <class Pred>
    bool eventually(Pred p, std::chrono::milliseconds limit = 20s)
    {
        const auto end = std::chrono::steady_clock::now() + limit;
        while (std::chrono::steady_clock::now() < end) {
            if (p())
                return true;
            std::this_thread::sleep_for(10ms);
        }
        return p();
    }

    /// Service bound to a free port and served on a background thread.
    class LiveService {
    public:
        explicit LiveService(const std::filesystem::path& dir) : manager(dir), service(manager)
        {
            port = service.bind("127.0.0.1", 0);
            _thread = std::thread([this] { service.serve(); });
        }
        ~LiveService()
        {
            service.stop();
            _thread.join();
            manager.stop_all();
        }
        httplib::Client client() const
        {
            httplib::Client c("127.0.0.1", port);
            c.set_read_timeout(60, 0);
            return c;
        }

        RunManager manager;
        HttpService service;
        int port = 0;

    private:
        std::thread _thread;
    };

    int run_cli(const std::string& args, std::string* output = nullptr)
    {
        const std::string cmd = std::string(FMAGENT_CLI_PATH) + " " + args;
        FILE* pipe = ::popen(cmd.c_str(), "r");
        REQUIRE(pipe != nullptr);
        std::string out;
        char buf[4096];
        while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
            out.append(buf, n);
        const int status = ::pclose(pipe);
        if (output)
            *output = out;
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

} // namespace

TEST_CASE("event log file round trip")
{
    TempDir dir("events");
    const auto path = dir.path() / "events.jsonl";
    {
        EventLog log("r1", path);
        log.append(EventType::run_started, {{"x", 1}});
        log.append(EventType::task_failed, {{"reason", "boom"}});
        log.close();
        CHECK(log.closed());
        CHECK(log.lines_from(2).size() == 1);
        CHECK(log.wait_lines(3, 10ms).empty());
    }
    const auto events = read_event_log(path);
    REQUIRE(events.size() == 2);
    CHECK(events[0].seq == 1);
    CHECK(events[1].type == EventType::task_failed);
    CHECK(events[1].payload["reason"] == "boom");
    CHECK(events[1].run_id == "r1");

    SUBCASE("a torn trailing line is ignored")
    {
        write_text(path, slurp(path) + R"({"seq": 3, "timestamp)");
        CHECK(read_event_log(path).size() == 2);
    }
    SUBCASE("a malformed middle line is corruption")
    {
        const std::string text = slurp(path);
        write_text(path, "{not json}\n" + text);
        CHECK_THROWS_AS(read_event_log(path), CorruptLog);
    }
}

TEST_CASE("gap detection names the missing seq")
{
    std::vector<Event> events(5);
    for (std::size_t i = 0; i < events.size(); ++i)
        events[i].seq = i + 1;
    CHECK_NOTHROW(check_gapless(events));
    events.erase(events.begin() + 2);
    try {
        check_gapless(events);
        FAIL("gap not detected");
    }
    catch (const CorruptLog& e) {
        CHECK(std::string(e.what()).find("missing seq 3") != std::string::npos);
    }
}

TEST_CASE("replay reproduces final and periodic snapshots byte for byte")
{
    TempDir dir("replay");
    RunConfig c = small_config(12);
    c.snapshot_interval = 5;
    c.faults.eval_failure = 0.1;
    c.faults.ack_loss = 0.05;
    Run run(c, dir.path());
    const RunResult r = run.execute();
    REQUIRE(r.state == RunState::finished);

    const ReplayResult rep = replay_log(dir.path() / "events.jsonl");
    CHECK(rep.problems.empty());
    CHECK(snapshot_text(rep.snapshot) == slurp(dir.path() / "snapshot.json"));
    REQUIRE(rep.best);
    CHECK(rep.best->candidate.id == r.best->candidate.id);

    const auto events = read_event_log(dir.path() / "events.jsonl");
    for (const char* name : {"snapshot-000005.json", "snapshot-000010.json"}) {
        const std::string text = slurp(dir.path() / name);
        REQUIRE_FALSE(text.empty());
        const auto seq = json::parse(text)["last_seq"].get<std::uint64_t>();
        CHECK(snapshot_text(replay_events(prefix(events, seq)).snapshot) == text);
    }

    SUBCASE("a truncated log replays its prefix")
    {
        const auto half = prefix(events, events.size() / 2);
        const ReplayResult p = replay_events(half);
        CHECK(p.last_seq == events.size() / 2);
        CHECK(p.problems.empty());
    }
    SUBCASE("a double fitness record is rejected")
    {
        auto doctored = events;
        const auto it = std::find_if(doctored.begin(), doctored.end(), [](const Event& e) { return e.type == EventType::candidate_evaluated; });
        REQUIRE(it != doctored.end());
        doctored.insert(it + 1, *it);
        for (std::size_t i = 0; i < doctored.size(); ++i)
            doctored[i].seq = i + 1;
        CHECK_THROWS_AS(replay_events(doctored), CorruptLog);
    }
    SUBCASE("a dropped line is a gap")
    {
        auto gappy = events;
        gappy.erase(gappy.begin() + 7);
        CHECK_THROWS_WITH_AS(replay_events(gappy), doctest::Contains("missing seq 8"), CorruptLog);
    }
}

TEST_CASE("run manager")
{
    TempDir dir("manager");
    RunManager m(dir.path());
    auto run = m.create(small_config(2, "alpha"));
    CHECK(run->id() == "alpha");
    CHECK_THROWS_AS(m.create(small_config(2, "alpha")), SchemaError);
    auto unnamed = m.create(small_config(1, ""));
    CHECK(unnamed->id().size() == 16);
    CHECK(m.find("alpha") == run);
    CHECK(m.find("nope") == nullptr);
    CHECK(m.run_ids().size() == 2);
    run->wait();
    CHECK(std::filesystem::exists(dir.path() / "runs" / "alpha" / "events.jsonl"));
    CHECK(std::filesystem::exists(dir.path() / "runs" / "alpha" / "snapshot.json"));
}

TEST_CASE("HTTP API")
{
    TempDir dir("http");
    LiveService live(dir.path());
    auto cli = live.client();

    SUBCASE("create, list, status, population, events")
    {
        auto created = cli.Post("/api/runs", small_config_json(8).dump(), "application/json");
        REQUIRE(created);
        CHECK(created->status == 201);
        const std::string id = json::parse(created->body)["run_id"];

        auto listed = cli.Get("/api/runs");
        REQUIRE(listed);
        CHECK(json::parse(listed->body)["runs"] == json::array({id}));

        auto run = live.manager.find(id);
        REQUIRE(run);
        run->wait();

        auto status = cli.Get("/api/runs/" + id);
        REQUIRE(status);
        CHECK(status->status == 200);
        const json st = json::parse(status->body);
        CHECK(st["state"] == "finished");
        CHECK(st["generation"] == 8);

        auto pop = cli.Get("/api/runs/" + id + "/population?island=1");
        REQUIRE(pop);
        CHECK(pop->status == 200);
        const json pj = json::parse(pop->body);
        CHECK(pj["island"] == 1);
        CHECK(pj["candidates"].size() == run->db().island_records(1).size());

        auto events = cli.Get("/api/runs/" + id + "/events?from=10");
        REQUIRE(events);
        CHECK(events->status == 200);
        CHECK(events->get_header_value("Content-Type") == "application/x-ndjson");
        std::istringstream lines(events->body);
        std::string line;
        std::uint64_t expect = 10;
        while (std::getline(lines, line)) {
            CHECK(json::parse(line)["seq"] == expect);
            ++expect;
        }
        CHECK(expect == run->events().last_seq() + 1);
        CHECK(events->body == [&] {
            std::string all;
            for (const std::string& l : run->events().lines_from(10))
                all += l + "\n";
            return all;
        }());
    }
    SUBCASE("error statuses")
    {
        auto bad = cli.Post("/api/runs", "{not json", "application/json");
        REQUIRE(bad);
        CHECK(bad->status == 400);
        CHECK(json::parse(bad->body).contains("error"));

        json invalid = small_config_json(2);
        invalid["islands"] = 0;
        CHECK(cli.Post("/api/runs", invalid.dump(), "application/json")->status == 400);

        CHECK(cli.Get("/api/runs/missing")->status == 404);
        CHECK(cli.Get("/api/runs/missing/events")->status == 404);
        CHECK(cli.Post("/api/runs/missing/interventions", R"({"kind": "pause"})", "application/json")->status == 404);

        auto created = cli.Post("/api/runs", small_config_json(0).dump(), "application/json");
        const std::string id = json::parse(created->body)["run_id"];
        live.manager.find(id)->wait();
        CHECK(cli.Get("/api/runs/" + id + "/population")->status == 400);
        CHECK(cli.Get("/api/runs/" + id + "/population?island=2")->status == 400);
        CHECK(cli.Get("/api/runs/" + id + "/population?island=x")->status == 400);
        CHECK(cli.Get("/api/runs/" + id + "/events?from=-3")->status == 400);
        CHECK(cli.Post("/api/runs/" + id + "/interventions", R"({"kind": "warp"})", "application/json")->status == 400);

        auto late = cli.Post("/api/runs/" + id + "/interventions", R"({"kind": "pause"})", "application/json");
        REQUIRE(late);
        CHECK(late->status == 409);
        CHECK(json::parse(late->body)["error"].is_string());
    }
    SUBCASE("guidance reaches the external generator verbatim")
    {
        const std::string guidance = "use \"tight\" rings \xe2\x9c\x93 and avoid {braces}";
        std::mutex m;
        std::vector<std::string> seen;
        httplib::Server stub;
        stub.Post("/gen", [&](const httplib::Request& req, httplib::Response& res) {
            const json body = json::parse(req.body);
            {
                std::lock_guard lock(m);
                seen.push_back(body["guidance"].get<std::string>());
            }
            std::vector<double> v(body["parents"][0]["values"].size());
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] = body["parents"][0]["values"][i].get<double>() * 0.5;
            res.set_content(json{{"values", v}}.dump(), "application/json");
        });
        const int stub_port = stub.bind_to_any_port("127.0.0.1");
        std::thread stub_thread([&] { stub.listen_after_bind(); });
        stub.wait_until_ready();

        json config = small_config_json(1000000);
        config["generators"] = json::array({to_json(GeneratorSpec::external("http://127.0.0.1:" + std::to_string(stub_port) + "/gen", 5.0, "remote"))});
        auto created = cli.Post("/api/runs", config.dump(), "application/json");
        REQUIRE(created);
        REQUIRE(created->status == 201);
        const std::string id = json::parse(created->body)["run_id"];

        auto ack = cli.Post("/api/runs/" + id + "/interventions", json{{"id", "g-1"}, {"kind", "guidance"}, {"payload", {{"text", guidance}}}}.dump(), "application/json");
        REQUIRE(ack);
        CHECK(ack->status == 200);
        const json aj = json::parse(ack->body);
        CHECK(aj["accepted"] == true);
        CHECK(aj["intervention_id"] == "g-1");
        CHECK(aj["duplicate"] == false);
        CHECK(aj["applies_at_generation"].get<std::uint64_t>() >= 1);

        auto dup = cli.Post("/api/runs/" + id + "/interventions", json{{"id", "g-1"}, {"kind", "guidance"}, {"payload", {{"text", guidance}}}}.dump(), "application/json");
        CHECK(json::parse(dup->body)["duplicate"] == true);
        CHECK(json::parse(dup->body)["applies_at_generation"] == aj["applies_at_generation"]);

        REQUIRE(eventually([&] {
            std::lock_guard lock(m);
            return std::find(seen.begin(), seen.end(), guidance) != seen.end();
        }));
        auto run = live.manager.find(id);
        run->request_stop();
        run->wait();

        int applied = 0;
        for (const Event& e : run->events().events())
            if (e.type == EventType::intervention_applied) {
                ++applied;
                CHECK(e.payload["payload"]["text"] == guidance);
                CHECK(e.payload["params"]["guidance"] == guidance);
            }
        CHECK(applied == 1);
        stub.stop();
        stub_thread.join();
    }
}

TEST_CASE("command line")
{
    TempDir dir("cli");
    std::string out;
    const std::string data = "--data-dir " + dir.path().string();
    REQUIRE(run_cli("run --workload sphere --islands 1 --generations 0 --seed 3 " + data, &out) == 0);
    const json summary = json::parse(out);
    CHECK(summary["state"] == "finished");
    CHECK(summary["generations"] == 0);
    const std::string run_dir = summary["directory"];
    CHECK(run_cli("replay " + run_dir + "/events.jsonl", &out) == 0);
    CHECK(out.find("byte-for-byte") != std::string::npos);

    REQUIRE(run_cli("run --workload rastrigin --islands 2 --generations 6 --sampler top_k " + data, &out) == 0);
    CHECK(run_cli("replay " + json::parse(out)["directory"].get<std::string>() + "/events.jsonl", &out) == 0);

    // A tampered snapshot is reported.
    write_text(std::filesystem::path(run_dir) / "snapshot.json", "{}");
    CHECK(run_cli("replay " + run_dir + "/events.jsonl 2>/dev/null", &out) == 1);

    CHECK(run_cli("run --sampler greedy 2>/dev/null", &out) != 0);
    CHECK(run_cli("solve knapsack 2>/dev/null", &out) != 0);
}
