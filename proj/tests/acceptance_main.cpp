// Acceptance runner: prints one PASS/FAIL line per criterion.
//
//   acceptance                 all criteria
//   acceptance --criterion 4   a single criterion
//   acceptance --seed 7        alternative seed for the randomized checks
//
// Exit status is 0 iff every criterion run passed.

#include <cstdlib>
#include <iostream>
#include <string>

#include "latwave/acceptance.hpp"

int main(int argc, char** argv)
{
    latwave::acceptance::Options options;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if ((arg == "--criterion" || arg == "--seed") && i + 1 < argc) {
            const std::string value = argv[++i];
            if (arg == "--criterion") {
                only = std::stoi(value);
            } else {
                options.seed = std::stoull(value);
            }
        } else {
            std::cerr << "usage: acceptance [--criterion K] [--seed S]\n";
            return 2;
        }
    }

    bool all = true;
    for (int id = 1; id <= latwave::acceptance::kCriterionCount; ++id) {
        if (only != 0 && id != only) continue;
        const auto r = latwave::acceptance::run_criterion(id, options);
        std::cout << latwave::acceptance::format_line(r) << '\n';
        all = all && r.passed();
    }
    return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
