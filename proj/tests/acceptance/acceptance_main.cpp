// Acceptance suite: runs every verification criterion at its pinned
// tolerance and prints one PASS/FAIL line per criterion.

#include "krflow/verify.hpp"

#include <cstdio>
#include <exception>

int main() {
    krflow::verify::Context ctx;
    bool all_pass = true;
    for (int id = 1; id <= krflow::verify::kCriterionCount; ++id) {
        try {
            const auto r = krflow::verify::run_criterion(ctx, id);
            std::printf("[%s] criterion %d: %s\n", r.pass ? "PASS" : "FAIL", r.id,
                        r.detail.c_str());
            std::fflush(stdout);
            all_pass = all_pass && r.pass;
        } catch (const std::exception& e) {
            std::printf("[FAIL] criterion %d: exception: %s\n", id, e.what());
            std::fflush(stdout);
            all_pass = false;
        }
    }
    return all_pass ? 0 : 1;
}
