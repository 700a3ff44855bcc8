#include <fmagent/service/http_service.hpp>

#include <fmagent/pipeline/intervention.hpp>
#include <fmagent/pipeline/run_config.hpp>

#include <httplib.h>

#include <atomic>
#include <charconv>

namespace fmagent {

    namespace {

        void send_json(httplib::Response& res, int status, const json& body)
        {
            res.status = status;
            res.set_content(body.dump(), "application/json");
        }

        void send_error(httplib::Response& res, int status, const std::string& message) { send_json(res, status, {{"error", message}}); }

        std::optional<std::uint64_t> parse_uint(const std::string& text)
        {
            std::uint64_t v = 0;
            const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
                return std::nullopt;
            return v;
        }

        json parse_body(const httplib::Request& req)
        {
            try {
                return json::parse(req.body);
            }
            catch (const json::parse_error& ex) {
                throw SchemaError(std::string("request body is not JSON: ") + ex.what());
            }
        }

    } // namespace

    struct HttpService::Impl {
        RunManager& runs;
        httplib::Server server;
        std::atomic<bool> stopping{false};

        explicit Impl(RunManager& r) : runs(r) { routes(); }

        std::shared_ptr<Run> lookup(const httplib::Request& req, httplib::Response& res)
        {
            auto run = runs.find(req.matches[1]);
            if (!run)
                send_error(res, 404, "unknown run '" + std::string(req.matches[1]) + "'");
            return run;
        }

        void routes()
        {
            server.Post("/api/runs", [this](const httplib::Request& req, httplib::Response& res) {
                try {
                    RunConfig config = run_config_from_json(parse_body(req));
                    auto run = runs.create(std::move(config));
                    send_json(res, 201, {{"run_id", run->id()}});
                }
                catch (const std::exception& ex) {
                    send_error(res, 400, ex.what());
                }
            });

            server.Get("/api/runs", [this](const httplib::Request&, httplib::Response& res) { send_json(res, 200, {{"runs", runs.run_ids()}}); });

            server.Get(R"(/api/runs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
                if (auto run = lookup(req, res))
                    send_json(res, 200, to_json(run->status()));
            });

            server.Get(R"(/api/runs/([^/]+)/population)", [this](const httplib::Request& req, httplib::Response& res) {
                auto run = lookup(req, res);
                if (!run)
                    return;
                const auto island = req.has_param("island") ? parse_uint(req.get_param_value("island")) : std::nullopt;
                if (!island || *island >= static_cast<std::uint64_t>(run->config().islands)) {
                    send_error(res, 400, "island must be an integer in [0, " + std::to_string(run->config().islands) + ")");
                    return;
                }
                send_json(res, 200, run->population(static_cast<int>(*island)));
            });

            server.Get(R"(/api/runs/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
                auto run = lookup(req, res);
                if (!run)
                    return;
                std::uint64_t from = 1;
                if (req.has_param("from")) {
                    const auto v = parse_uint(req.get_param_value("from"));
                    if (!v) {
                        send_error(res, 400, "from must be a non-negative integer");
                        return;
                    }
                    from = std::max<std::uint64_t>(*v, 1);
                }
                auto next = std::make_shared<std::uint64_t>(from);
                res.set_chunked_content_provider("application/x-ndjson", [this, run, next](std::size_t, httplib::DataSink& sink) {
                    const EventLog& log = run->events();
                    // Read closed() before the lines so nothing appended in between is lost.
                    const bool done = log.closed();
                    const auto lines = log.wait_lines(*next, std::chrono::milliseconds(200));
                    for (const std::string& line : lines) {
                        const std::string chunk = line + "\n";
                        if (!sink.write(chunk.data(), chunk.size()))
                            return false;
                    }
                    *next += lines.size();
                    if ((done && *next > log.last_seq()) || stopping.load()) {
                        sink.done();
                        return true;
                    }
                    return sink.is_writable();
                });
            });

            server.Post(R"(/api/runs/([^/]+)/interventions)", [this](const httplib::Request& req, httplib::Response& res) {
                auto run = lookup(req, res);
                if (!run)
                    return;
                try {
                    Intervention iv = intervention_from_json(parse_body(req));
                    const InterventionAck ack = run->submit(iv);
                    send_json(res, 200,
                              {{"accepted", ack.accepted}, {"applies_at_generation", ack.applies_at_generation}, {"intervention_id", ack.intervention_id}, {"duplicate", ack.duplicate}});
                }
                catch (const RunFinished& ex) {
                    send_error(res, 409, ex.what());
                }
                catch (const std::exception& ex) {
                    send_error(res, 400, ex.what());
                }
            });
        }
    };

    HttpService::HttpService(RunManager& runs) : _impl(std::make_unique<Impl>(runs)) {}

    HttpService::~HttpService() { stop(); }

    int HttpService::bind(const std::string& host, int port)
    {
        int bound = -1;
        if (port == 0)
            bound = _impl->server.bind_to_any_port(host);
        else if (_impl->server.bind_to_port(host, port))
            bound = port;
        if (bound <= 0)
            throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
        return bound;
    }

    void HttpService::serve()
    {
        if (!_impl->server.listen_after_bind())
            if (!_impl->stopping.load())
                throw std::runtime_error("http server stopped unexpectedly");
    }

    void HttpService::stop()
    {
        _impl->stopping.store(true);
        _impl->server.stop();
    }

} // namespace fmagent
