#include <fmagent/generation/generator.hpp>

#include <httplib.h>

#include <cmath>

namespace fmagent::detail {

    std::pair<std::string, std::string> split_endpoint(const std::string& endpoint)
    {
        const auto scheme = endpoint.find("://");
        if (scheme == std::string::npos)
            throw std::invalid_argument("endpoint '" + endpoint + "' lacks a scheme");
        const auto slash = endpoint.find('/', scheme + 3);
        if (slash == std::string::npos)
            return {endpoint, "/"};
        return {endpoint.substr(0, slash), endpoint.substr(slash)};
    }

    Eigen::VectorXd external_propose(const GeneratorSpec& spec, const std::vector<const Candidate*>& parents, const Bounds& bounds)
    {
        json body;
        body["parents"] = json::array();
        for (const Candidate* p : parents)
            body["parents"].push_back(to_json(p->genome));
        body["guidance"] = spec.guidance.value_or("");
        body["bounds"] = bounds_to_json(bounds);
        if (const std::string model = spec.text("model"); !model.empty())
            body["model"] = model;

        const auto [host, path] = split_endpoint(spec.text("endpoint"));
        const double timeout = spec.number("timeout_seconds", 30.0);
        const int attempts = 1 + std::max(0, static_cast<int>(spec.number("max_retries", 0.0)));

        std::string last_error;
        for (int attempt = 0; attempt < attempts; ++attempt) {
            httplib::Client client(host);
            const auto usec = static_cast<std::time_t>(timeout * 1e6);
            client.set_connection_timeout(usec / 1000000, usec % 1000000);
            client.set_read_timeout(usec / 1000000, usec % 1000000);
            client.set_write_timeout(usec / 1000000, usec % 1000000);
            auto res = client.Post(path, body.dump(), "application/json");
            if (!res) {
                last_error = spec.name + ": request failed (" + httplib::to_string(res.error()) + ")";
                continue;
            }
            if (res->status < 200 || res->status >= 300) {
                last_error = spec.name + ": HTTP status " + std::to_string(res->status);
                continue;
            }
            const json reply = json::parse(res->body, nullptr, false);
            if (reply.is_discarded() || !reply.is_object() || !reply.contains("values") || !reply["values"].is_array())
                throw GenerationFailure(spec.name + ": reply is not {\"values\": [...]}");
            const json& values = reply["values"];
            if (static_cast<Eigen::Index>(values.size()) != bounds.size())
                throw GenerationFailure(spec.name + ": reply has " + std::to_string(values.size()) + " values, expected " + std::to_string(bounds.size()));
            Eigen::VectorXd x(bounds.size());
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (!values[i].is_number())
                    throw GenerationFailure(spec.name + ": value " + std::to_string(i) + " is not a number");
                x[static_cast<Eigen::Index>(i)] = values[i].get<double>();
                if (!std::isfinite(x[static_cast<Eigen::Index>(i)]))
                    throw GenerationFailure(spec.name + ": non-finite value at index " + std::to_string(i));
            }
            return x;
        }
        throw GenerationFailure(last_error);
    }

} // namespace fmagent::detail
