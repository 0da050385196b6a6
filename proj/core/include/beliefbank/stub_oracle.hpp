#pragma once

// Reference implementation of the remote-oracle wire protocol, backed by a
// synthetic oracle. Ships with the repo so integrations can be exercised
// without a real QA service. Supports scripted failure injection: POST
// /control/fail {"count": n} makes the next n /query requests return 500.

#include <memory>

#include "beliefbank/oracle.hpp"

namespace beliefbank {

class StubOracleServer {
public:
    explicit StubOracleServer(std::shared_ptr<SyntheticOracle> oracle);
    ~StubOracleServer();

    // Binds and serves on a background thread. port = 0 picks a free port.
    // Returns the bound port.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();
    int port() const;

    // In-process equivalent of POST /control/fail.
    void fail_next(int count);
    int queries_served() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace beliefbank
