#include "rwre/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace rwre {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Sparse cumulative rows for O(nnz) categorical draws.
class Sampler {
public:
    explicit Sampler(const Eigen::MatrixXd &kernel) : rows_(static_cast<std::size_t>(kernel.rows())) {
        for (Eigen::Index y = 0; y < kernel.rows(); ++y) {
            double cumulative = 0.0;
            for (Eigen::Index z = 0; z < kernel.cols(); ++z) {
                if (kernel(y, z) > 0.0) {
                    cumulative += kernel(y, z);
                    rows_[static_cast<std::size_t>(y)].push_back({static_cast<int>(z), cumulative});
                }
            }
        }
    }

    int next(int from, std::mt19937_64 &rng) const {
        const auto &row = rows_[static_cast<std::size_t>(from)];
        const double u = uniform01(rng) * row.back().cumulative;
        for (const auto &entry : row) {
            if (u < entry.cumulative) {
                return entry.state;
            }
        }
        return row.back().state;
    }

private:
    struct Entry {
        int state;
        double cumulative;
    };
    std::vector<std::vector<Entry>> rows_;
};

int draw_stationary(const StationaryDistribution &pi, std::mt19937_64 &rng) {
    const double u = uniform01(rng);
    double cumulative = 0.0;
    for (Eigen::Index y = 0; y < pi.size(); ++y) {
        cumulative += pi(y);
        if (u < cumulative) {
            return static_cast<int>(y);
        }
    }
    return static_cast<int>(pi.size() - 1);
}

Eigen::MatrixXd reversal_kernel(const Eigen::MatrixXd &P, const StationaryDistribution &pi) {
    Eigen::MatrixXd reversed(P.rows(), P.cols());
    for (Eigen::Index y = 0; y < P.rows(); ++y) {
        for (Eigen::Index z = 0; z < P.cols(); ++z) {
            reversed(y, z) = pi(z) * P(z, y) / pi(y);
        }
    }
    return reversed;
}

SampledEnvironment sample_with(const EnvironmentSpec &spec, const StationaryDistribution &pi,
                               const Sampler &forward, const Sampler *backward, long half_width,
                               std::uint64_t seed, long burn_in) {
    std::mt19937_64 rng(seed);
    const Eigen::VectorXi &g = spec.signs();
    SampledEnvironment env{half_width, std::vector<std::int8_t>(static_cast<std::size_t>(2 * half_width + 1))};
    auto put = [&env, &g](long site, int state) {
        env.signs[static_cast<std::size_t>(site + env.half_width)] = static_cast<std::int8_t>(g(state));
    };

    auto stationary_start = [&]() {
        int y = draw_stationary(pi, rng);
        for (long i = 0; i < burn_in; ++i) {
            y = forward.next(y, rng);
        }
        return y;
    };

    const int origin = stationary_start();
    put(0, origin);
    int y = origin;
    for (long site = 1; site <= half_width; ++site) {
        y = forward.next(y, rng);
        put(site, y);
    }
    if (backward != nullptr) {
        y = origin;
        for (long site = 1; site <= half_width; ++site) {
            y = backward->next(y, rng);
            put(-site, y);
        }
    } else {
        y = stationary_start();
        for (long site = 1; site <= half_width; ++site) {
            y = forward.next(y, rng);
            put(-site, y);
        }
    }
    return env;
}

template <typename Fn> void parallel_for(long count, unsigned threads, Fn &&fn) {
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<long>(threads, std::max(1L, count)));
    if (threads <= 1) {
        for (long i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (long i = t; i < count; i += threads) {
                fn(i);
            }
        });
    }
}

} // namespace

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t replication, StreamRole role) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ replication);
    return splitmix64(h ^ static_cast<std::uint64_t>(role));
}

double pairwise_sum(const double *values, std::size_t count) {
    if (count == 0) {
        return 0.0;
    }
    if (count <= 8) {
        double total = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            total += values[i];
        }
        return total;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

SampledEnvironment sample_environment(const EnvironmentSpec &spec, long half_width,
                                      std::uint64_t seed, SamplingStrategy strategy,
                                      long burn_in) {
    if (half_width < 1) {
        throw InvalidArgument("half_width must be at least 1");
    }
    if (burn_in < 0) {
        throw InvalidArgument("burn_in must be nonnegative");
    }
    const StationaryDistribution pi = stationary_distribution(spec);
    const Sampler forward(spec.transition());
    if (strategy == SamplingStrategy::Reversal) {
        const Sampler backward(reversal_kernel(spec.transition(), pi));
        return sample_with(spec, pi, forward, &backward, half_width, seed, burn_in);
    }
    return sample_with(spec, pi, forward, nullptr, half_width, seed, burn_in);
}

long simulate_walk(const SampledEnvironment &environment, double p, long steps,
                   std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("p must lie in [0, 1]");
    }
    if (steps < 0) {
        throw InvalidArgument("steps must be nonnegative");
    }
    if (environment.half_width < steps) {
        throw InvalidArgument("environment window narrower than the walk length");
    }
    std::mt19937_64 rng(seed);
    const std::int8_t *centre = environment.signs.data() + environment.half_width;
    const double right_if_minus = 1.0 - p;
    long x = 0;
    for (long n = 0; n < steps; ++n) {
        const double right = centre[x] > 0 ? p : right_if_minus;
        x += uniform01(rng) < right ? 1 : -1;
    }
    return x;
}

DriftEstimate estimate_drift(const EnvironmentSpec &spec, double p, const SimConfig &config) {
    if (config.steps < 1 || config.replications < 1) {
        throw InvalidArgument("steps and replications must be positive");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("p must lie in [0, 1]");
    }
    const StationaryDistribution pi = stationary_distribution(spec);
    const Sampler forward(spec.transition());
    const Sampler backward(reversal_kernel(spec.transition(), pi));
    const Sampler *backward_ptr =
        config.strategy == SamplingStrategy::Reversal ? &backward : nullptr;

    std::vector<double> speeds(static_cast<std::size_t>(config.replications));
    std::vector<char> positive(static_cast<std::size_t>(config.replications));
    parallel_for(config.replications, config.threads, [&](long r) {
        const auto rep = static_cast<std::uint64_t>(r);
        const SampledEnvironment env =
            sample_with(spec, pi, forward, backward_ptr, config.steps,
                        substream_seed(config.seed, rep, StreamRole::Environment), config.burn_in);
        const long x =
            simulate_walk(env, p, config.steps, substream_seed(config.seed, rep, StreamRole::Walk));
        speeds[static_cast<std::size_t>(r)] = static_cast<double>(x) / static_cast<double>(config.steps);
        positive[static_cast<std::size_t>(r)] = x > 0 ? 1 : 0;
    });

    const auto n = static_cast<double>(config.replications);
    const double mean = pairwise_sum(speeds.data(), speeds.size()) / n;
    std::vector<double> squares(speeds.size());
    std::transform(speeds.begin(), speeds.end(), squares.begin(),
                   [mean](double v) { return (v - mean) * (v - mean); });
    const double variance =
        config.replications > 1 ? pairwise_sum(squares.data(), squares.size()) / (n - 1.0) : 0.0;
    const double positives = static_cast<double>(std::count(positive.begin(), positive.end(), 1));
    return {mean, std::sqrt(variance / n), config.replications, config.steps, positives / n};
}

} // namespace rwre
