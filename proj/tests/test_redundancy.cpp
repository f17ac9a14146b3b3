#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "shannon_markov/errors.hpp"
#include "shannon_markov/redundancy.hpp"

using namespace shannon_markov;

namespace {

const double kLog3 = std::log2(3.0);

double rho(double u) { return std::ceil(u) - u; }

MarkovSource dyadic_memoryless() { return MarkovSource::from_specs({"1/2", "1/2"}, {{"1/2", "1/2"}, {"1/2", "1/2"}}); }

MarkovSource symmetric_third() { return MarkovSource::from_specs({"1", "0"}, {{"1/3", "2/3"}, {"2/3", "1/3"}}); }

MarkovSource absorbing(const std::string& a, const std::string& one_minus_a) {
    return MarkovSource::from_specs({"1", "0"}, {{one_minus_a, a}, {"0", "1"}});
}

MarkovSource half_quarter() { return MarkovSource::from_specs({"1", "0"}, {{"1/2", "1/2"}, {"1/4", "3/4"}}); }

// Exact rational test sources with r <= 3, some with zero entries.
std::vector<MarkovSource> exact_corpus() {
    return {
        symmetric_third(),
        half_quarter(),
        MarkovSource::from_specs({"1/3", "2/3"}, {{"0", "1"}, {"1", "0"}}),
        MarkovSource::from_specs({"1/5", "4/5"}, {{"1/5", "4/5"}, {"3/7", "4/7"}}),
        absorbing("1/3", "2/3"),
        MarkovSource::from_specs({"1/3", "1/3", "1/3"},
                                 {{"1/2", "1/3", "1/6"}, {"0", "1/5", "4/5"}, {"2/3", "0", "1/3"}}),
        MarkovSource::from_specs({"1/2", "1/4", "1/4"},
                                 {{"1/7", "2/7", "4/7"}, {"1/7", "2/7", "4/7"}, {"1/7", "2/7", "4/7"}}),
        MarkovSource::from_specs({"1", "0", "0"}, {{"0", "1/3", "2/3"}, {"1", "0", "0"}, {"1", "0", "0"}}),
    };
}

}  // namespace

TEST(NegLogMu, HandValues) {
    EXPECT_DOUBLE_EQ(neg_log_mu(dyadic_memoryless(), {0, 1, 0}), 3.0);
    EXPECT_NEAR(neg_log_mu(half_quarter(), {0, 1, 1}), 3.0 - kLog3, 1e-14);
    EXPECT_NEAR(neg_log_mu(absorbing("1/3", "2/3"), {0, 0, 1}), std::log2(4.5), 1e-14);
}

TEST(NegLogMu, ExactValueIsRationalForDyadicPaths) {
    auto s = dyadic_memoryless();
    LogTable t(s);
    auto v = neg_log_mu_value(s, t, {0, 1, 1, 0});
    ASSERT_TRUE(v.exact.has_value());
    EXPECT_EQ(*v.exact, Rational(4));
    auto w = neg_log_mu_value(symmetric_third(), LogTable(symmetric_third()), {0, 1});
    EXPECT_FALSE(w.exact.has_value());
}

TEST(NegLogMu, ZeroStepIsReported) {
    auto s = absorbing("1/3", "2/3");
    try {
        neg_log_mu(s, {0, 1, 0});
        FAIL() << "expected ZeroPathProbability";
    } catch (const ZeroPathProbability& e) {
        EXPECT_EQ(e.step(), 2u);
    }
    try {
        neg_log_mu(s, {1, 1});
        FAIL() << "expected ZeroPathProbability";
    } catch (const ZeroPathProbability& e) {
        EXPECT_EQ(e.step(), 0u);
    }
}

TEST(ExactRedundancy, DyadicIsExactlyZero) {
    auto s = dyadic_memoryless();
    for (int n = 1; n <= 20; ++n) {
        auto v = exact_redundancy(s, n);
        EXPECT_EQ(v.value, 0.0) << "n=" << n;
    }
}

TEST(ExactRedundancy, SwapChainIsConstant) {
    auto s = MarkovSource::from_specs({"1/3", "2/3"}, {{"0", "1"}, {"1", "0"}});
    for (int n = 1; n <= 40; ++n) EXPECT_NEAR(exact_redundancy(s, n).value, rho(kLog3), 1e-12);
    EXPECT_NEAR(rho(kLog3), 0.41504, 1e-5);
}

TEST(ExactRedundancy, SymmetricThirdTracksShiftedClosedForm) {
    // with p = (1, 0) the first symbol is free, so -log mu = (n-1) log2 3 - (number of 2/3 steps)
    auto v = exact_redundancy(symmetric_third(), 10, Strategy::Enumeration);
    EXPECT_NEAR(v.value, rho(9 * kLog3), 0.02);
}

TEST(ExactRedundancy, MatchesBruteForceRationalOracle) {
    for (const auto& s : exact_corpus()) {
        for (int n = 1; n <= 8; ++n) {
            long double oracle_value = oracle::brute_force_redundancy(s, n);
            EXPECT_NEAR(exact_redundancy(s, n, Strategy::Enumeration).value, static_cast<double>(oracle_value), 1e-12);
            EXPECT_NEAR(exact_redundancy(s, n, Strategy::CountDp).value, static_cast<double>(oracle_value), 1e-12);
        }
    }
}

TEST(ExactRedundancy, CountDpAgreesWithEnumerationOnRandomSources) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 24; ++trial) {
        int r = 2 + trial % 2;
        auto s = trial % 3 == 0 ? oracle::random_sparse_source(rng, r) : oracle::random_positive_source(rng, r);
        for (int n = 1; n <= 10; ++n) {
            double a = exact_redundancy(s, n, Strategy::Enumeration).value;
            double b = exact_redundancy(s, n, Strategy::CountDp).value;
            EXPECT_NEAR(a, b, 1e-12) << "trial " << trial << " n " << n;
        }
    }
}

TEST(ExactRedundancy, ValueStaysInUnitInterval) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = oracle::random_positive_source(rng, 2 + trial % 3);
        for (int n = 1; n <= 7; ++n) {
            double v = exact_redundancy(s, n).value;
            EXPECT_GE(v, 0.0);
            EXPECT_LT(v, 1.0);
        }
    }
}

TEST(ExactRedundancy, EqualsMeanLengthMinusEntropy) {
    for (const auto& s : exact_corpus()) {
        for (int n : {3, 6}) {
            auto lengths = shannon_lengths(s, n);
            long double mean_length = 0.0L, entropy = 0.0L;
            for (const auto& c : lengths) {
                mean_length += c.prob * static_cast<long double>(c.length);
                entropy += c.prob * static_cast<long double>(neg_log_mu(s, c.sequence));
            }
            EXPECT_NEAR(static_cast<double>(mean_length - entropy), exact_redundancy(s, n).value, 1e-12);
        }
    }
}

TEST(ExactRedundancy, AutoUsesCountDpWhenAllowed) {
    EXPECT_EQ(exact_redundancy(symmetric_third(), 30).method, Method::CountDp);
    ResourceLimits limits;
    limits.count_dp_max_n_r2 = 5;
    EXPECT_EQ(exact_redundancy(symmetric_third(), 8, Strategy::Auto, limits).method, Method::Enumeration);
}

TEST(ExactRedundancy, GuardsRaiseResourceLimit) {
    ResourceLimits limits;
    limits.max_enumeration = 100;
    EXPECT_THROW(exact_redundancy(symmetric_third(), 10, Strategy::Enumeration, limits), ResourceLimit);
    limits.count_dp_max_n_r2 = 5;
    EXPECT_THROW(exact_redundancy(symmetric_third(), 10, Strategy::CountDp, limits), ResourceLimit);
    EXPECT_THROW(exact_redundancy(symmetric_third(), 10, Strategy::Auto, limits), ResourceLimit);
}

TEST(ExactRedundancy, SparseSupportEnumeratesFarBeyondAlphabetPower) {
    // the absorbing chain has n positive-probability sequences of length n
    auto s = absorbing("1/3", "2/3");
    EXPECT_EQ(support_size(s, 30), 30u);
    ResourceLimits limits;
    limits.max_enumeration = 64;
    EXPECT_NO_THROW(exact_redundancy(s, 30, Strategy::Enumeration, limits));
}

TEST(SupportSize, CountsPositivePaths) {
    EXPECT_EQ(support_size(dyadic_memoryless(), 10), 1024u);
    EXPECT_EQ(support_size(symmetric_third(), 10), 512u);
    EXPECT_EQ(support_size(MarkovSource::from_specs({"1/3", "2/3"}, {{"0", "1"}, {"1", "0"}}), 50), 2u);
}

TEST(EnumerateSequences, ProbabilityMatchesNegLog) {
    auto seqs = enumerate_sequences(half_quarter(), 6);
    double total = 0.0;
    for (const auto& s : seqs) {
        EXPECT_NEAR(s.prob, std::exp2(-s.neg_log2), 1e-10 * s.prob);
        total += s.prob;
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
    EXPECT_EQ(seqs.size(), 32u);
}

TEST(TransitionCounts, FlowConservationAndMultiplicity) {
    for (const auto& s : exact_corpus()) {
        int n = 7;
        auto classes = transition_count_classes(s, n);
        boost::multiprecision::cpp_int total = 0;
        for (const auto& c : classes) {
            int r = s.size();
            int steps = 0;
            for (int v = 0; v < r; ++v) {
                int out = 0, in = 0;
                for (int u = 0; u < r; ++u) {
                    out += c.counts[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)];
                    in += c.counts[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
                }
                steps += out;
                int expected = (v == c.first_state ? 1 : 0) - (v == c.last_state ? 1 : 0);
                EXPECT_EQ(out - in, expected);
            }
            EXPECT_EQ(steps, n - 1);
            EXPECT_GT(c.multiplicity, 0);
            total += c.multiplicity;
        }
        EXPECT_EQ(total, support_size(s, n));
    }
}

TEST(MonteCarlo, DyadicGivesZeroWithZeroError) {
    auto v = monte_carlo_redundancy(dyadic_memoryless(), 50, 5000, 99);
    EXPECT_EQ(v.value, 0.0);
    ASSERT_TRUE(v.std_error.has_value());
    EXPECT_EQ(*v.std_error, 0.0);
    EXPECT_EQ(v.method, Method::MonteCarlo);
}

TEST(MonteCarlo, SameSeedIsBitIdentical) {
    auto a = monte_carlo_redundancy(half_quarter(), 40, 20000, 1);
    auto b = monte_carlo_redundancy(half_quarter(), 40, 20000, 1);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(*a.std_error, *b.std_error);
    auto c = monte_carlo_redundancy(half_quarter(), 40, 20000, 2);
    EXPECT_NE(a.value, c.value);
}

TEST(MonteCarlo, SymmetricThirdAtLongBlockLength) {
    // every path has -log mu = 99 log2 3 - (integer), so the estimator has no spread
    auto v = monte_carlo_redundancy(symmetric_third(), 100, 1'000'000, 1);
    EXPECT_LT(*v.std_error, 1e-12);
    EXPECT_NEAR(v.value, rho(99 * kLog3), 3.0 * *v.std_error + 1e-12);
}

TEST(ExactRedundancy, SymmetricThirdIsDeterministicEveryLength) {
    for (int n = 1; n <= 30; ++n) EXPECT_NEAR(exact_redundancy(symmetric_third(), n).value, rho((n - 1) * kLog3), 1e-12);
}

TEST(MonteCarlo, CoversExactValueAcrossSeeds) {
    auto s = half_quarter();
    int n = 9;
    double exact = exact_redundancy(s, n).value;
    int covered = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto v = monte_carlo_redundancy(s, n, 4000, seed);
        if (std::abs(v.value - exact) <= 4.0 * *v.std_error) ++covered;
    }
    EXPECT_GE(covered, 99);
}

TEST(ShannonLengths, DyadicLengthsAreBlockLength) {
    auto lengths = shannon_lengths(dyadic_memoryless(), 3);
    ASSERT_EQ(lengths.size(), 8u);
    for (const auto& c : lengths) EXPECT_EQ(c.length, 3);
    EXPECT_EQ(kraft_sum(lengths), 1.0L);
}

TEST(ShannonLengths, HalfQuarterAtLengthTwo) {
    auto lengths = shannon_lengths(half_quarter(), 2);
    ASSERT_EQ(lengths.size(), 2u);
    EXPECT_EQ(lengths[0].sequence, (std::vector<State>{0, 0}));
    EXPECT_EQ(lengths[0].length, 1);
    EXPECT_EQ(lengths[1].length, 1);
    EXPECT_EQ(kraft_sum(lengths), 1.0L);
}

TEST(ShannonLengths, AbsorbingChainSupport) {
    auto lengths = shannon_lengths(absorbing("1/3", "2/3"), 3);
    EXPECT_EQ(lengths.size(), 3u);
    EXPECT_LE(kraft_sum(lengths), 1.0L);
}

TEST(ShannonLengths, KraftHoldsEverywhere) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto s = trial % 2 ? oracle::random_sparse_source(rng, 3) : oracle::random_positive_source(rng, 2);
        for (int n = 1; n <= 8; ++n) EXPECT_LE(kraft_sum(shannon_lengths(s, n)), 1.0L + 1e-15L);
    }
}

TEST(RedundancyCsv, HeaderAndRows) {
    std::ostringstream os;
    write_redundancy_csv_header(os);
    write_redundancy_csv_row(os, RedundancyValue{3, 0.25, Method::CountDp, std::nullopt, false});
    write_redundancy_csv_row(os, RedundancyValue{4, 0.5, Method::MonteCarlo, 0.125, false});
    EXPECT_EQ(os.str(), "n,method,value,stderr\n3,count_dp,0.25,\n4,monte_carlo,0.5,0.125\n");
}

TEST(Strategy, Parses) {
    EXPECT_EQ(parse_strategy("auto"), Strategy::Auto);
    EXPECT_EQ(parse_strategy("count_dp"), Strategy::CountDp);
    EXPECT_EQ(parse_strategy("enumeration"), Strategy::Enumeration);
    EXPECT_THROW(parse_strategy("fast"), ParseError);
}
