#include "beliefbank/stub_oracle.hpp"

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace beliefbank {

struct StubOracleServer::Impl {
    std::shared_ptr<SyntheticOracle> oracle;
    httplib::Server server;
    std::thread thread;
    std::atomic<int> fail_budget{0};
    std::atomic<int> served{0};
    int port = 0;
};

StubOracleServer::StubOracleServer(std::shared_ptr<SyntheticOracle> oracle)
    : impl_(std::make_unique<Impl>()) {
    if (!oracle) throw Error("stub server needs an oracle");
    impl_->oracle = std::move(oracle);

    impl_->server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });
    impl_->server.Post("/control/fail", [this](const httplib::Request& req, httplib::Response& res) {
        try {
            auto j = nlohmann::json::parse(req.body);
            impl_->fail_budget = j.at("count").get<int>();
            res.set_content("{}", "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(e.what(), "text/plain");
        }
    });
    impl_->server.Post("/query", [this](const httplib::Request& req, httplib::Response& res) {
        if (impl_->fail_budget.fetch_sub(1) > 0) {
            res.status = 500;
            res.set_content("injected failure", "text/plain");
            return;
        }
        impl_->fail_budget = std::max(0, impl_->fail_budget.load());
        try {
            auto j = nlohmann::json::parse(req.body);
            std::string question = j.at("question_text").get<std::string>();
            std::string context = j.value("context_text", std::string());
            auto answer = impl_->oracle->answer_text_query(question, context);
            if (!answer) {
                res.status = 404;
                res.set_content("unknown question", "text/plain");
                return;
            }
            ++impl_->served;
            nlohmann::json out;
            out["answer"] = answer->label ? "yes" : "no";
            out["confidence"] = answer->confidence;
            res.set_content(out.dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(e.what(), "text/plain");
        }
    });
}

StubOracleServer::~StubOracleServer() { stop(); }

int StubOracleServer::start(const std::string& host, int port) {
    if (port == 0) {
        impl_->port = impl_->server.bind_to_any_port(host);
        if (impl_->port <= 0) throw Error("stub server failed to bind");
    } else {
        if (!impl_->server.bind_to_port(host, port)) throw Error("stub server failed to bind");
        impl_->port = port;
    }
    impl_->thread = std::thread([this]() { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return impl_->port;
}

void StubOracleServer::stop() {
    if (impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

int StubOracleServer::port() const { return impl_->port; }

void StubOracleServer::fail_next(int count) { impl_->fail_budget = count; }

int StubOracleServer::queries_served() const { return impl_->served.load(); }

}  // namespace beliefbank
