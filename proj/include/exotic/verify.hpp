#pragma once

#include <map>
#include <string>
#include <vector>

#include "exotic/chars.hpp"
#include "exotic/glq.hpp"

namespace exo {

// Named identity checks.  Each pairs a closed form with an independent computation and
// runs over a parameter grid; a grid maps a parameter name to the values it sweeps.
using Grid = std::map<std::string, std::vector<int>>;

struct CheckParams {
    std::map<std::string, int> fixed;  // replaces the grid entry of the same name, if any
    int64_t budget = 0;                 // 0: default_budget()
    double tol = 0;                     // 0: the check's own tolerance
};

struct CheckReport {
    std::string id;
    Grid grid;                    // effective grid
    std::vector<cplx> lhs, rhs;   // every comparison made
    double abs_err = 0;           // worst error, rescaled to tol
    double tol = 0;
    bool pass = false;
    double seconds = 0;
    std::string worst;            // where abs_err was attained
    size_t worst_index = 0;
    std::vector<std::string> skipped;  // grid points not evaluated, with the reason
    std::string error;
};

const std::vector<std::string>& check_ids();
bool has_check(const std::string& id);
const Grid& default_grid(const std::string& id);
double check_tolerance(const std::string& id);
std::string check_description(const std::string& id);

// Throws std::invalid_argument for an unknown id.  Budget overruns become skipped entries.
CheckReport run_check(const std::string& id, const CheckParams& params);
// Independent checks on up to `threads` workers; reports come back in the order of ids.
std::vector<CheckReport> run_checks(const std::vector<std::string>& ids, const CheckParams& params, int threads);

// One JSON object, no trailing newline.  Only the worst comparison is serialized; wall time
// only when `timing` is set, so that the default output is reproducible.
std::string report_json(const CheckReport& r, bool timing = false);

// One tower per q, with the levels the default grids need; q must be a prime power.
const FieldTower& shared_tower(int64_t q);
// a tower with at least these levels as well, cached per level set
const FieldTower& shared_tower(int64_t q, std::vector<int> levels);

// Explicit Speh character table for k = c = 2: every instance of each row type that exists
// over F_q, with the tabulated value.
struct SpehTableRow {
    std::string type;
    ClassLabel cls;
    cplx table;
};
std::vector<SpehTableRow> speh_table_rows(const FieldTower& T, const MultChar& theta);
// the 14 row types, in table order
const std::vector<std::string>& speh_table_types();

}  // namespace exo
