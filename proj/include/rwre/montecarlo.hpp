#pragma once

#include <cstdint>
#include <vector>

#include "rwre/environment.hpp"

namespace rwre {

/// How sites -1 ... -L are filled.
enum class SamplingStrategy {
    Reversal,   ///< run the time-reversed chain pi_z P_zy / pi_y backwards from Y_0 (law-exact)
    Reflection, ///< independent stationary forward run, mirrored onto the negative sites
};

struct SimConfig {
    long steps = 100000;
    long replications = 200;
    std::uint64_t seed = 1;
    long burn_in = 0;
    SamplingStrategy strategy = SamplingStrategy::Reversal;
    unsigned threads = 0; ///< 0 = hardware concurrency
};

struct DriftEstimate {
    double mean;              ///< average of X_n / n
    double standard_error;    ///< sample standard deviation / sqrt(replications)
    long replications;
    long steps;
    double positive_fraction; ///< share of replications with X_n > 0
};

/// Environment signs on sites -half_width ... half_width.
struct SampledEnvironment {
    long half_width;
    std::vector<std::int8_t> signs;

    int at(long site) const { return signs[static_cast<std::size_t>(site + half_width)]; }
};

enum class StreamRole : std::uint64_t { Environment = 0, Walk = 1 };

/// Seed of the substream owned by (master seed, replication, role).
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t replication, StreamRole role);

SampledEnvironment sample_environment(const EnvironmentSpec &spec, long half_width,
                                      std::uint64_t seed,
                                      SamplingStrategy strategy = SamplingStrategy::Reversal,
                                      long burn_in = 0);

/// Final position X_steps of a walk started at 0. Requires half_width >= steps.
long simulate_walk(const SampledEnvironment &environment, double p, long steps,
                   std::uint64_t seed);

DriftEstimate estimate_drift(const EnvironmentSpec &spec, double p, const SimConfig &config);

/// Sum in fixed pairwise order; the result does not depend on scheduling.
double pairwise_sum(const double *values, std::size_t count);

} // namespace rwre
