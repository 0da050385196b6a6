#include "beliefbank/remote_oracle.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "beliefbank/feedback.hpp"

namespace beliefbank {

struct RemoteOracle::Impl {
    RemoteOracleConfig cfg;
    TemplateRegistryPtr registry;
    std::unique_ptr<httplib::Client> client;
};

RemoteOracle::RemoteOracle(RemoteOracleConfig cfg, TemplateRegistryPtr registry)
    : impl_(std::make_unique<Impl>()) {
    if (cfg.base_url.empty()) throw Error("remote oracle needs a base URL");
    if (!registry) throw Error("remote oracle needs a template registry");
    impl_->cfg = std::move(cfg);
    impl_->registry = std::move(registry);
    impl_->client = std::make_unique<httplib::Client>(impl_->cfg.base_url);
    impl_->client->set_connection_timeout(impl_->cfg.timeout_seconds, 0);
    impl_->client->set_read_timeout(impl_->cfg.timeout_seconds, 0);
}

RemoteOracle::~RemoteOracle() = default;

OracleAnswer RemoteOracle::query(const SentenceKey& q, const std::string& context) {
    nlohmann::json body;
    body["question_text"] = impl_->registry->question(q);
    body["context_text"] = split_prompt(context).context_text;
    const std::string payload = body.dump();

    std::string last_error;
    int backoff_ms = impl_->cfg.initial_backoff_ms;
    for (int attempt = 0; attempt <= impl_->cfg.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
        }
        httplib::Result res = impl_->client->Post("/query", payload, "application/json");
        if (!res) {
            last_error = "connection error (" + httplib::to_string(res.error()) + ")";
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        try {
            auto j = nlohmann::json::parse(res->body);
            std::string answer = j.at("answer").get<std::string>();
            double confidence = j.at("confidence").get<double>();
            if (answer != "yes" && answer != "no")
                throw Error("answer must be 'yes' or 'no', got '" + answer + "'");
            if (!(confidence >= 0.0 && confidence <= 1.0))
                throw Error("confidence out of [0,1]");
            return OracleAnswer{answer == "yes", confidence};
        } catch (const std::exception& e) {
            last_error = std::string("unparseable response: ") + e.what();
            continue;
        }
    }
    throw RemoteOracleError("remote oracle failed for " + q.str() + " after " +
                            std::to_string(impl_->cfg.max_retries + 1) + " attempts: " +
                            last_error);
}

}  // namespace beliefbank
