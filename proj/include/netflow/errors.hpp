#ifndef NETFLOW_ERRORS_HPP
#define NETFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace netflow {

struct Error : std::runtime_error {
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

struct InvalidNetwork : Error {
    explicit InvalidNetwork(const std::string &msg) : Error(msg) {}
};

struct ParseError : Error {
    ParseError(const std::string &msg, const std::string &where)
        : Error(msg + " (at " + where + ")"), location(where) {}
    std::string location;
};

struct SlacksSpanBlocks : Error {
    explicit SlacksSpanBlocks(const std::string &msg) : Error(msg) {}
};

struct InconsistentBlock : Error {
    explicit InconsistentBlock(const std::string &msg) : Error(msg) {}
};

struct SingularJacobian : Error {
    explicit SingularJacobian(const std::string &msg) : Error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string &msg) : Error(msg) {}
};

// Carries the iteration trace so callers can report diagnostics.
struct NonConvergence : Error {
    NonConvergence(const std::string &msg, int iters, double residual,
                   std::vector<double> trace)
        : Error(msg), iterations(iters), final_residual(residual),
          residual_trace(std::move(trace)) {}
    int iterations;
    double final_residual;
    std::vector<double> residual_trace;
    std::string block_id;  // filled in by the hierarchical driver
    int level = -1;
};

}  // namespace netflow

#endif
