// Acceptance run at the default proton parameters: one PASS/FAIL line per
// criterion, non-zero exit if any criterion fails.

#include <cstdio>
#include <iostream>

#include "spinrelax/spinrelax.hpp"

int main() {
    using namespace spinrelax;
    constexpr double budget_seconds[] = {1, 10, 5, 60, 1, 30, 5, 30};
    verify::VerifyOptions opts;
    opts.grid = 200;
    const auto results = verify::run_all(RunConfig{}, opts);
    int failed = 0;
    for (const auto& r : results) {
        const bool in_time = r.seconds < budget_seconds[r.id - 1];
        const bool ok = r.passed && in_time;
        std::cout << "criterion " << r.id << ": " << (ok ? "PASS" : "FAIL") << "  " << verify::format_line(r);
        if (!in_time) std::cout << " runtime over " << budget_seconds[r.id - 1] << " s budget";
        std::cout << "\n";
        failed += ok ? 0 : 1;
    }
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
