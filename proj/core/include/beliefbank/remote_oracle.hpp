#pragma once

// HTTP client for a remote true/false QA service. Wire protocol: POST
// /query with a JSON body {"question_text": ..., "context_text": ...};
// the service answers 2xx with {"answer": "yes"|"no", "confidence": x}.
// Transient failures are retried with exponential backoff up to the cap,
// then surface as RemoteOracleError.

#include <cstdint>
#include <memory>
#include <string>

#include "beliefbank/oracle.hpp"

namespace beliefbank {

struct RemoteOracleError : Error {
    using Error::Error;
};

struct RemoteOracleConfig {
    std::string base_url;       // e.g. "http://localhost:8080"
    int max_retries = 3;        // retries after the first attempt
    int initial_backoff_ms = 100;
    int timeout_seconds = 10;
};

class RemoteOracle : public Oracle {
public:
    RemoteOracle(RemoteOracleConfig cfg, TemplateRegistryPtr registry);
    ~RemoteOracle() override;

    OracleAnswer query(const SentenceKey& q, const std::string& context) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace beliefbank
