#ifndef FMAGENT_SERVICE_HTTP_SERVICE_HPP
#define FMAGENT_SERVICE_HTTP_SERVICE_HPP

#include <memory>
#include <string>

#include <fmagent/service/run_manager.hpp>

namespace fmagent {

    /// HTTP control and monitoring API over a RunManager.
    ///
    ///   POST /api/runs                         run config -> 201 {"run_id"}
    ///   GET  /api/runs                         {"runs": [ids]}
    ///   GET  /api/runs/{id}                    status summary
    ///   GET  /api/runs/{id}/events?from=SEQ    chunked JSON lines, tails until the run ends
    ///   GET  /api/runs/{id}/population?island=K
    ///   POST /api/runs/{id}/interventions      intervention -> {"accepted", "applies_at_generation"}
    ///
    /// Errors are {"error": message} with 400 (schema), 404 (unknown run) or
    /// 409 (intervention on a finished run).
    class HttpService {
    public:
        explicit HttpService(RunManager& runs);
        ~HttpService();

        HttpService(const HttpService&) = delete;
        HttpService& operator=(const HttpService&) = delete;

        /// Binds `port` (0 picks a free one) and returns the bound port.
        /// Throws std::runtime_error when the port cannot be bound.
        int bind(const std::string& host, int port);

        /// Serves until stop(); requires a successful bind().
        void serve();

        void stop();

    private:
        struct Impl;
        std::unique_ptr<Impl> _impl;
    };

} // namespace fmagent

#endif
