// Prints one PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
#include <CLI11.hpp>

#include <cstdio>
#include <map>

#include "stratq/errors.hpp"
#include "stratq/verify.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"stratq acceptance checks"};
    bool small = false;
    bool verbose = false;
    std::vector<int> only;
    stratq::VerifyOptions opts;
    std::vector<std::string> faults;
    app.add_flag("--small", small, "reduced grid and replication counts");
    app.add_flag("-v,--verbose", verbose, "print every sub-check");
    app.add_option("--criterion", only, "run only these criteria")->check(CLI::Range(1, stratq::kCriterionCount));
    app.add_option("--seed", opts.seed);
    app.add_option("--threads", opts.threads);
    app.add_option("--inject-fault", faults)->group("");
    CLI11_PARSE(app, argc, argv);
    opts.grid = small ? stratq::Grid::Small : stratq::Grid::Full;
    opts.faults = {faults.begin(), faults.end()};
    if (only.empty())
    {
        for (int c = 1; c <= stratq::kCriterionCount; ++c)
        {
            only.push_back(c);
        }
    }

    bool all = true;
    for (int c : only)
    {
        std::vector<stratq::CheckResult> parts;
        try
        {
            parts = stratq::run_criterion(c, opts);
        }
        catch (const stratq::Error& e)
        {
            std::printf("criterion %2d: FAIL  error: %s\n", c, e.what());
            all = false;
            continue;
        }
        bool ok = true;
        double seconds = 0.0;
        for (const auto& r : parts)
        {
            ok = ok && r.within_tolerance;
            seconds += r.seconds;
        }
        const double limit = parts.front().time_limit;
        ok = ok && seconds < limit;
        all = all && ok;
        std::printf("criterion %2d: %s  (%.2fs of %.0fs)\n", c, ok ? "PASS" : "FAIL", seconds, limit);
        for (const auto& r : parts)
        {
            if (verbose || !r.within_tolerance)
            {
                std::printf("    %-40s %s observed %.3g tol %.3g  %s\n", r.name.c_str(), r.within_tolerance ? "ok " : "BAD",
                            r.observed, r.tolerance, r.detail.c_str());
            }
        }
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
