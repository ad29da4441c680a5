#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace si2e {

struct CheckResult {
    std::string group;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    std::string only;                  // empty = run every group
    bool mutate_smi_sign = false;      // corrupt the defining sum's sign; must trip the oracle check
    std::uint64_t seed = 20260819;
};

// Names of the available check groups, in execution order.
const std::vector<std::string>& verification_group_names();

// Runs one named group; throws std::invalid_argument on unknown names.
CheckResult run_check(const std::string& group, const VerifyOptions& options);

// Runs the selected groups, prints one table row per check plus a summary
// line to `out`. Returns 0 when everything passes, 1 on any failure, 2 when
// options name an unknown group.
int run_verify(const VerifyOptions& options, std::ostream& out);

}  // namespace si2e
