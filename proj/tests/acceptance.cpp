// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Usage: asopt_acceptance [id ...]

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "asopt/verify/acceptance.hpp"

int main(int argc, char** argv)
{
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        ids.push_back(std::stoi(argv[i]));
    }
    const auto scratch = std::filesystem::current_path() / "acceptance_scratch";
    bool ok = true;
    for (int id : ids.empty() ? asopt::criterion_ids() : ids) {
        const auto r = asopt::run_criterion(id, scratch);
        std::cout << asopt::format_result(r) << std::endl;
        ok = ok && r.pass;
    }
    return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
