#ifndef NETFLOW_GENERATE_HPP
#define NETFLOW_GENERATE_HPP

#include <cstdint>

#include "netflow/network.hpp"

namespace netflow {

struct GenerateParams {
    int nodes = 10;
    int cycles = 0;  // chord edges added on top of the random tree
    std::uint64_t seed = 0;
    double slack_potential = 100.0;
};

// Deterministic random instance: a random tree plus `cycles` chords, pipe
// physics with alpha in [0.5, 2], one slack junction, and modest random
// withdrawals. Always passes validation.
Network generate_network(const GenerateParams &params);

}  // namespace netflow

#endif
