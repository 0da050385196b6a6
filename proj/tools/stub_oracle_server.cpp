// Standalone stub QA service speaking the remote-oracle wire protocol,
// backed by a synthetic oracle over a dataset. Useful for exercising the
// remote client without a real model service.

#include <chrono>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "beliefbank/dataset.hpp"
#include "beliefbank/stub_oracle.hpp"

namespace bb = beliefbank;

int main(int argc, char** argv) {
    CLI::App app{"stub true/false QA service over a synthetic oracle"};
    std::string data_dir;
    std::string host = "127.0.0.1";
    int port = 8080;
    double tpr = 0.98, precision_target = 0.54, p_follow = 0.8;
    std::uint64_t seed = 0;
    int fail_first = 0;
    app.add_option("--data", data_dir, "dataset directory")->required();
    app.add_option("--host", host, "bind host");
    app.add_option("--port", port, "bind port (0 picks a free one)");
    app.add_option("--tpr", tpr, "true-positive rate");
    app.add_option("--precision-target", precision_target, "precision target deriving tnr");
    app.add_option("--p-follow", p_follow, "context-following probability");
    app.add_option("--seed", seed, "oracle seed");
    app.add_option("--fail-first", fail_first, "answer 500 to this many initial queries");
    CLI11_PARSE(app, argc, argv);

    try {
        bb::Dataset ds = bb::load_dataset(bb::DatasetPaths::in_dir(data_dir));
        bb::SyntheticOracleConfig cfg =
            bb::SyntheticOracleConfig::anchored_defaults(ds.positive_rate(), seed);
        cfg.tpr = tpr;
        cfg.tnr = bb::SyntheticOracleConfig::tnr_for_precision(precision_target,
                                                               ds.positive_rate(), tpr);
        cfg.p_follow = p_follow;
        auto oracle = std::make_shared<bb::SyntheticOracle>(cfg, ds.gold(), ds.templates,
                                                            ds.constraints);
        bb::StubOracleServer server(oracle);
        if (fail_first > 0) server.fail_next(fail_first);
        int bound = server.start(host, port);
        std::cout << "stub oracle serving on http://" << host << ":" << bound
                  << " (POST /query, POST /control/fail, GET /health)\n"
                  << std::flush;
        // Serve until interrupted.
        for (;;) std::this_thread::sleep_for(std::chrono::seconds(1));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
