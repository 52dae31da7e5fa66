#include "suite.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    curvbill::acceptance::Options opts;
    CLI::App app{"curvbill acceptance suite"};
    app.add_option("--seed", opts.seed, "random seed");
    app.add_option("--threads", opts.threads, "worker threads for phase quadrature")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    const auto results = curvbill::acceptance::run_all(opts, std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
