// Acceptance run: one line per criterion, exit status 0 iff every criterion passes.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "exotic/verify.hpp"

using namespace exo;

namespace {

struct Part {
    std::string id;
    std::map<std::string, int> fixed;
};

struct Criterion {
    int number;
    std::string title;
    std::vector<Part> parts;
    double max_seconds;  // 0: no runtime cap
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "Gauss modulus and Hasse-Davenport", {{"HD-GAUSS", {}}}, 5},
        {2, "exotic Gauss sum, defining sum vs product formula", {{"HD-EXOTIC", {}}}, 60},
        {3, "L-polynomiality and purity", {{"L-PURITY", {}}}, 300},
        {4, "Kondo and exotic Kondo closed forms", {{"KONDO", {}}, {"EXOTIC-KONDO", {}}}, 600},
        {5, "matrix Kloosterman sum, convolution vs Hall-Littlewood", {{"MKS-HL", {{"c", 2}}}}, 600},
        {6, "pairing with irreducible characters", {{"MKS-DEF", {}}}, 0},
        {7, "Bessel-Speh bridge at q=2, k=c=2", {{"BS-KLOOSTERMAN", {{"q", 2}, {"c", 2}}}}, 1},
        {8, "Speh character table at q=2", {{"APPENDIX-TABLE", {{"q", 2}}}}, 0},
        {9, "multiplicativity, Whittaker, generating series, zero-cycles, bounds",
         {{"BS-MULT-TAU", {}}, {"BS-MULT-CLASS", {}}, {"MKS-MULT", {}}, {"WHITTAKER", {}},
          {"GENSERIES", {}}, {"ZEROCYCLE", {}}, {"BOUNDS", {}}},
         900},
        {10, "global truncation", {{"GLOBAL-G", {}}}, 0},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        bool ok = true;
        double seconds = 0, worst = 0;
        size_t skipped = 0;
        std::string detail;
        for (const auto& p : c.parts) {
            CheckParams params;
            params.fixed = p.fixed;
            auto t0 = std::chrono::steady_clock::now();
            CheckReport r = run_check(p.id, params);
            seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            skipped += r.skipped.size();
            worst = std::max(worst, r.tol > 0 ? r.abs_err / r.tol : 0.0);
            if (!r.pass) {
                ok = false;
                detail += " " + p.id + ":" + (r.error.empty() ? "err " + std::to_string(r.abs_err) + " at " + r.worst : r.error);
            }
        }
        if (c.max_seconds > 0 && seconds > c.max_seconds) {
            ok = false;
            detail += " runtime over " + std::to_string(c.max_seconds) + " s";
        }
        std::printf("criterion %2d %s  %s  (%.2f s, worst err/tol %.2g, %zu skipped)%s\n", c.number,
                    ok ? "PASS" : "FAIL", c.title.c_str(), seconds, worst, skipped, detail.c_str());
        if (!ok) ++failed;
    }
    std::fflush(stdout);
    return failed ? 1 : 0;
}
