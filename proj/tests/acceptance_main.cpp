// Acceptance gate: one PASS/FAIL line per criterion, exit 0 only if all pass.
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "rholab/acceptance.hpp"
#include "rholab/core.hpp"

namespace {

[[noreturn]] void usage_error(const std::string& msg) {
    std::cerr << "acceptance_suite: " << msg << "\n"
              << "usage: acceptance_suite [--seed N] [--workers N] [--out DIR]"
                 " [--only ID]... [--threshold KEY=VALUE]... [--reuse]\n";
    std::exit(2);
}

}  // namespace

int main(int argc, char** argv) {
    rholab::acceptance::SuiteOptions options;
    options.out_dir = "acceptance_out";

    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&]() -> std::string {
            if (i + 1 >= argc) usage_error("missing value after " + arg);
            return argv[++i];
        };
        try {
            if (arg == "--seed") {
                options.master_seed = std::stoull(next());
            } else if (arg == "--workers") {
                options.workers = static_cast<unsigned>(std::stoul(next()));
            } else if (arg == "--out") {
                options.out_dir = next();
            } else if (arg == "--only") {
                options.only.push_back(std::stoi(next()));
            } else if (arg == "--threshold") {
                const std::string kv = next();
                const auto eq = kv.find('=');
                if (eq == std::string::npos) usage_error("expected KEY=VALUE: " + kv);
                options.overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            } else if (arg == "--reuse") {
                options.reuse = true;
            } else {
                usage_error("unknown argument: " + arg);
            }
        } catch (const std::invalid_argument&) {
            usage_error("bad numeric value in " + arg);
        } catch (const std::out_of_range&) {
            usage_error("numeric value out of range in " + arg);
        }
    }

    try {
        const auto suite = rholab::acceptance::run_suite(options, std::cout);
        return suite.all_pass ? 0 : 1;
    } catch (const rholab::acceptance::MissingArtifactError& e) {
        std::cerr << "acceptance_suite: " << e.what() << '\n';
        return 2;
    } catch (const rholab::CapacityError& e) {
        std::cerr << "acceptance_suite: " << e.what() << '\n';
        return 3;
    }
}
