#pragma once

#include <stdexcept>
#include <string>

namespace scanplan {

// Map or artifact file could not be read/written/parsed.
struct MapIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad configuration value (file or flag).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A planning stage could not produce a valid result.
struct PlanningError : std::runtime_error {
    explicit PlanningError(const std::string& stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// A tour edge was infeasible and neither graph offered a detour.
struct StrandedTourError : PlanningError {
    StrandedTourError(int tail, int head)
        : PlanningError("tour repair",
                        "no detour exists between tour nodes " + std::to_string(tail) +
                            " and " + std::to_string(head)),
          tail(tail), head(head) {}
    int tail;
    int head;
};

}  // namespace scanplan
