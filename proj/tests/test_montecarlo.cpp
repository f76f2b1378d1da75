#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "rwre/drift.hpp"
#include "rwre/montecarlo.hpp"

using namespace rwre;

namespace {

struct MeanAndError {
    double mean;
    double stderr_;
};

MeanAndError summarize(const std::vector<double> &xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

SimConfig config(long steps, long reps, std::uint64_t seed = 1) {
    SimConfig c;
    c.steps = steps;
    c.replications = reps;
    c.seed = seed;
    return c;
}

void expect_within_three_se(const DriftEstimate &e, double target) {
    EXPECT_LE(std::abs(e.mean - target), 3.0 * e.standard_error)
        << "mean " << e.mean << " target " << target << " stderr " << e.standard_error;
}

} // namespace

TEST(SampleEnvironment, DeterministicEnvironmentIsAllPlus) {
    Eigen::Matrix2d P;
    P << 0.5, 0.5, 0.5, 0.5;
    const EnvironmentSpec plus = EnvironmentSpec::create(P, Eigen::Vector2i(1, 1), "all plus");
    const SampledEnvironment env = sample_environment(plus, 1000, 3);
    for (long i = -1000; i <= 1000; ++i) {
        ASSERT_EQ(env.at(i), 1);
    }
}

TEST(SampleEnvironment, RejectsBadArguments) {
    EXPECT_THROW(sample_environment(build_iid(0.5), 0, 1), InvalidArgument);
    EXPECT_THROW(sample_environment(build_iid(0.5), 10, 1, SamplingStrategy::Reversal, -1), InvalidArgument);
}

TEST(SampleEnvironment, MarkovMarginalAndCorrelation) {
    const double a = 0.665, b = 0.035;
    std::vector<double> marginals;
    std::vector<double> correlations;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SampledEnvironment env = sample_environment(build_markov({a, b}), 100000, seed);
        double plus = 0.0, m1 = 0.0, lag = 0.0;
        const long L = env.half_width;
        for (long i = -L; i <= L; ++i) {
            plus += env.at(i) > 0;
            m1 += env.at(i);
            if (i < L) {
                lag += env.at(i) * env.at(i + 1);
            }
        }
        const double n = static_cast<double>(2 * L + 1);
        const double mean = m1 / n;
        marginals.push_back(plus / n);
        correlations.push_back((lag / (n - 1.0) - mean * mean) / (1.0 - mean * mean));
    }
    const MeanAndError marginal = summarize(marginals);
    EXPECT_LE(std::abs(marginal.mean - 0.95), 3.0 * marginal.stderr_);
    const MeanAndError rho = summarize(correlations);
    EXPECT_LE(std::abs(rho.mean - (1.0 - a - b)), 3.0 * rho.stderr_);
}

// One-step conditionals of the sampled sequence, read left to right across
// both half-lines, must follow the 2-dependent transition rule. Given the
// history the next sign is a fresh Bernoulli draw, so pooled counts carry a
// binomial standard error.
TEST(SampleEnvironment, TwoDepConditionalsOnBothHalves) {
    const TwoDepParams t{0.6, 0.4, 0.3, 0.2};
    const EnvironmentSpec spec = build_two_dep(t);
    // States (-,-), (-,+), (+,-), (+,+): next is + with a_-, 1-b_-, a_+, 1-b_+.
    const double expected[4] = {t.a_minus, 1.0 - t.b_minus, t.a_plus, 1.0 - t.b_plus};
    for (SamplingStrategy strategy : {SamplingStrategy::Reversal, SamplingStrategy::Reflection}) {
        for (const bool negative : {true, false}) {
            double up[4] = {}, total[4] = {};
            for (std::uint64_t seed = 1; seed <= 40; ++seed) {
                const SampledEnvironment env = sample_environment(spec, 50000, seed, strategy);
                const long L = env.half_width;
                const long first = negative ? -L : 0;
                const long last = negative ? -1 : L;
                for (long i = first; i + 2 <= last; ++i) {
                    const int h = 2 * (env.at(i) > 0) + (env.at(i + 1) > 0);
                    total[h] += 1.0;
                    up[h] += env.at(i + 2) > 0;
                }
            }
            for (int h = 0; h < 4; ++h) {
                const double se = std::sqrt(expected[h] * (1.0 - expected[h]) / total[h]);
                EXPECT_LE(std::abs(up[h] / total[h] - expected[h]), 3.5 * se)
                    << "strategy " << static_cast<int>(strategy) << " negative " << negative
                    << " history " << h;
            }
        }
    }
}

// Sign processes with a single state of one sign are renewal processes and
// look the same in both directions. This four-state chain is not: the block
// (+,+,-,-) and its mirror image have different probabilities, so the
// reversal kernel keeps the left-to-right law on the negative half-line while
// the reflected forward run shows the mirrored law there.
TEST(SampleEnvironment, NegativeHalfBlockLawByStrategy) {
    Eigen::Matrix4d P;
    P << 0.1, 0.8, 0.1, 0.0, 0.0, 0.1, 0.1, 0.8, 0.8, 0.1, 0.1, 0.0, 0.1, 0.0, 0.8, 0.1;
    const EnvironmentSpec spec = EnvironmentSpec::create(P, Eigen::Vector4i(-1, -1, 1, 1), "skewed");
    const StationaryDistribution pi = stationary_distribution(spec);
    const int pattern[4] = {1, 1, -1, -1};
    auto exact = [&](bool mirrored) {
        Eigen::RowVectorXd mass = pi.transpose();
        for (int k = 0; k < 4; ++k) {
            if (k > 0) {
                mass = mass * P;
            }
            const int sign = pattern[mirrored ? 3 - k : k];
            for (int y = 0; y < 4; ++y) {
                if (spec.signs()(y) != sign) {
                    mass(y) = 0.0;
                }
            }
        }
        return mass.sum();
    };
    const double forward = exact(false);
    const double backward = exact(true);
    ASSERT_GT(std::abs(forward - backward), 0.01);

    for (SamplingStrategy strategy : {SamplingStrategy::Reversal, SamplingStrategy::Reflection}) {
        double hits = 0.0, windows = 0.0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const SampledEnvironment env = sample_environment(spec, 50000, seed, strategy);
            for (long i = -env.half_width; i + 3 <= -1; ++i) {
                bool match = true;
                for (int k = 0; k < 4 && match; ++k) {
                    match = env.at(i + k) == pattern[k];
                }
                hits += match;
                windows += 1.0;
            }
        }
        const double target = strategy == SamplingStrategy::Reversal ? forward : backward;
        // Overlapping windows of a fast-mixing chain: 5 binomial standard errors.
        const double se = std::sqrt(target * (1.0 - target) / windows);
        EXPECT_LE(std::abs(hits / windows - target), 5.0 * se)
            << "strategy " << static_cast<int>(strategy) << ": " << hits / windows << " vs " << target;
    }
}

TEST(SimulateWalk, Contracts) {
    const SampledEnvironment env = sample_environment(build_iid(0.5), 1000, 9);
    SampledEnvironment plus{1000, std::vector<std::int8_t>(2001, 1)};
    EXPECT_EQ(simulate_walk(plus, 1.0, 1000, 4), 1000);
    EXPECT_EQ(simulate_walk(plus, 0.0, 1000, 4), -1000);
    EXPECT_THROW(simulate_walk(env, 0.5, 1001, 1), InvalidArgument);
    EXPECT_THROW(simulate_walk(env, 1.5, 10, 1), InvalidArgument);
    EXPECT_EQ(simulate_walk(env, 0.7, 1000, 5), simulate_walk(env, 0.7, 1000, 5));
}

TEST(SimulateWalk, FairStepsHaveZeroMean) {
    const SampledEnvironment env = sample_environment(build_markov({0.665, 0.035}), 2000, 2);
    std::vector<double> xs;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        xs.push_back(static_cast<double>(simulate_walk(env, 0.5, 2000, seed)));
    }
    const MeanAndError m = summarize(xs);
    EXPECT_LE(std::abs(m.mean), 3.0 * m.stderr_);
}

TEST(EstimateDrift, IidMatchesAnalyticDrift) {
    expect_within_three_se(estimate_drift(build_iid(0.8), 0.6, config(100000, 200)), 1.0 / 11.0);
}

TEST(EstimateDrift, HalfGivesZero) {
    expect_within_three_se(estimate_drift(build_two_dep({0.6, 0.4, 0.3, 0.2}), 0.5, config(20000, 100)), 0.0);
}

// Benchmarks sit close to p = 1/2, where the tail index of the trapping time
// is large and n = 1e5 steps already average out the traps.
TEST(EstimateDrift, MovingAverageMatchesClosedForm) {
    expect_within_three_se(estimate_drift(build_moving_average(0.7), 0.53, config(100000, 200)),
                           drift_closed_movavg(0.7, 0.53));
    expect_within_three_se(estimate_drift(build_moving_average(0.95), 0.6, config(100000, 200)),
                           drift_closed_movavg(0.95, 0.6));
}

TEST(EstimateDrift, TwoDepMatchesClosedForm) {
    const TwoDepParams t{0.6, 0.4, 0.3, 0.2};
    expect_within_three_se(estimate_drift(build_two_dep(t), 0.53, config(100000, 200)),
                           drift_closed_two_dep(t, 0.53));
}

// Near the cutoff the tail index drops towards 1 and X_n/n overshoots the
// limit for any practical n; the excess shrinks as n grows.
TEST(EstimateDrift, FiniteSampleExcessShrinksNearCutoff) {
    const TwoDepParams t{0.6, 0.4, 0.3, 0.2};
    const double limit = drift_closed_two_dep(t, 0.6);
    std::vector<double> excess;
    for (long n : {1000L, 10000L, 100000L}) {
        const DriftEstimate e = estimate_drift(build_two_dep(t), 0.6, config(n, 200, 21));
        excess.push_back(e.mean - limit);
        EXPECT_GT(e.mean - limit, 3.0 * e.standard_error) << n;
    }
    EXPECT_GT(excess[0], excess[1]);
    EXPECT_GT(excess[1], excess[2]);
}

TEST(EstimateDrift, BitIdenticalAcrossRunsAndThreadCounts) {
    SimConfig c = config(5000, 40, 77);
    c.threads = 1;
    const DriftEstimate one = estimate_drift(build_markov({0.3, 0.2}), 0.65, c);
    const DriftEstimate again = estimate_drift(build_markov({0.3, 0.2}), 0.65, c);
    c.threads = 4;
    const DriftEstimate four = estimate_drift(build_markov({0.3, 0.2}), 0.65, c);
    EXPECT_EQ(one.mean, again.mean);
    EXPECT_EQ(one.standard_error, again.standard_error);
    EXPECT_EQ(one.mean, four.mean);
    EXPECT_EQ(one.standard_error, four.standard_error);
    EXPECT_EQ(one.positive_fraction, four.positive_fraction);

    c.seed = 78;
    EXPECT_NE(estimate_drift(build_markov({0.3, 0.2}), 0.65, c).mean, one.mean);
}

TEST(EstimateDrift, RejectsBadConfig) {
    EXPECT_THROW(estimate_drift(build_iid(0.8), 0.6, config(0, 10)), InvalidArgument);
    EXPECT_THROW(estimate_drift(build_iid(0.8), 0.6, config(10, 0)), InvalidArgument);
    EXPECT_THROW(estimate_drift(build_iid(0.8), -0.1, config(10, 10)), InvalidArgument);
}

// The drift depends on the law of sign products over blocks of sites, which
// ignores the order inside a block, so both strategies estimate the same
// limit even for a non-reversible chain. That limit is -1/(2E[F]-1) here.
TEST(EstimateDrift, SamplingStrategiesAgree) {
    Eigen::Matrix3d P;
    P << 0.1, 0.8, 0.1, 0.1, 0.1, 0.8, 0.8, 0.1, 0.1;
    const EnvironmentSpec spec = EnvironmentSpec::create(P, Eigen::Vector3i(-1, 1, 1), "cycle");
    const DriftResult analytic = drift_generic(spec, 0.35);
    ASSERT_EQ(analytic.series, 'F');
    SimConfig c = config(100000, 200, 5);
    const DriftEstimate reversal = estimate_drift(spec, 0.35, c);
    c.strategy = SamplingStrategy::Reflection;
    const DriftEstimate reflection = estimate_drift(spec, 0.35, c);
    const double se = std::hypot(reversal.standard_error, reflection.standard_error);
    EXPECT_LE(std::abs(reversal.mean - reflection.mean), 3.0 * se);
    expect_within_three_se(reversal, analytic.value);
    expect_within_three_se(reflection, analytic.value);
}

TEST(EstimateDrift, ZeroDriftTransienceIsVisible) {
    const EnvironmentSpec spec = build_iid(0.8);
    double previous = 1.0;
    DriftEstimate last{};
    for (long n : {1000L, 10000L, 100000L}) {
        last = estimate_drift(spec, 0.9, config(n, 200, 11));
        EXPECT_LT(std::abs(last.mean), previous) << n;
        previous = std::abs(last.mean);
    }
    EXPECT_LT(std::abs(last.mean), std::max(0.02, 3.0 * last.standard_error));
    EXPECT_GT(last.positive_fraction, 0.95);
}

TEST(PairwiseSum, MatchesLongDoubleReference) {
    std::vector<double> xs;
    long double reference = 0.0L;
    for (int i = 1; i <= 100001; ++i) {
        xs.push_back(1.0 / i);
        reference += 1.0L / i;
    }
    EXPECT_NEAR(pairwise_sum(xs.data(), xs.size()), static_cast<double>(reference), 1e-13);
    EXPECT_EQ(pairwise_sum(xs.data(), 0), 0.0);
}

TEST(SubstreamSeed, DistinctAcrossReplicationAndRole) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 1000; ++r) {
        seen.insert(substream_seed(1, r, StreamRole::Environment));
        seen.insert(substream_seed(1, r, StreamRole::Walk));
        seen.insert(substream_seed(2, r, StreamRole::Walk));
    }
    EXPECT_EQ(seen.size(), 3000U);
}
