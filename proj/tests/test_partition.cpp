#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracle_util.hpp"
#include "pskg/partition.hpp"
#include "pskg/random.hpp"

using Catch::Approx;

namespace {

// 2x2 initiator with row sums 0.55 / 0.45; only the marginal matters here.
pskg::Marginals balanced_marginals() {
    return pskg::Marginals(pskg::InitiatorMatrix(2, {0.30, 0.25, 0.20, 0.25}));
}

}  // namespace

TEST_CASE("locate_boundary endpoints and domain", "[partition]") {
    const pskg::Marginals m = balanced_marginals();
    CHECK(pskg::locate_boundary(m, 3, 0.0) == 0);
    CHECK(pskg::locate_boundary(m, 3, 1.0) == 7);
    CHECK_THROWS_AS(pskg::locate_boundary(m, 3, -0.01), std::invalid_argument);
    CHECK_THROWS_AS(pskg::locate_boundary(m, 3, 1.01), std::invalid_argument);
    CHECK_THROWS_AS(pskg::locate_boundary(m, 3, std::nan("")), std::invalid_argument);
}

TEST_CASE("cumulative load over the eight-vertex example", "[partition]") {
    const pskg::Marginals m = balanced_marginals();
    const std::vector<double> expected{0.0,      0.166375, 0.3025,   0.438625, 0.55,
                                       0.686125, 0.7975,   0.908875, 1.0};
    for (std::uint64_t u = 0; u <= 8; ++u) {
        CHECK(pskg::cumulative_load(m, 3, u) == Approx(expected[u]).margin(1e-15));
    }
    CHECK_THROWS_AS(pskg::cumulative_load(m, 3, 9), std::invalid_argument);

    // A boundary hit belongs to the right-hand vertex.
    CHECK(pskg::locate_boundary(m, 3, 0.55) == 4);
    CHECK(pskg::locate_boundary(m, 3, pskg::cumulative_load(m, 3, 2)) == 2);
    CHECK(pskg::locate_boundary(m, 3, pskg::cumulative_load(m, 3, 6)) == 6);
}

TEST_CASE("four workers over eight vertices split as expected", "[partition]") {
    const pskg::Marginals m = balanced_marginals();
    const pskg::PartitionTable table = pskg::compute_partition(m, 3, 4);
    REQUIRE(table.n_workers() == 4);
    CHECK(table.n_vertices == 8);

    const std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges{
        {0, 1}, {1, 3}, {3, 5}, {5, 8}};
    const std::vector<double> masses{0.166375, 0.27225, 0.2475, 0.313875};
    for (std::size_t w = 0; w < 4; ++w) {
        CHECK(table.workers[w].u_low == ranges[w].first);
        CHECK(table.workers[w].u_up == ranges[w].second);
        CHECK(table.workers[w].expected_mass == Approx(masses[w]).margin(1e-12));
    }
}

TEST_CASE("uniform marginals split exactly evenly", "[partition]") {
    const pskg::Marginals m(pskg::InitiatorMatrix(2, {0.25, 0.25, 0.25, 0.25}));
    const pskg::PartitionTable table = pskg::compute_partition(m, 4, 4);
    for (std::size_t w = 0; w < 4; ++w) {
        CHECK(table.workers[w].u_low == 4 * w);
        CHECK(table.workers[w].u_up == 4 * (w + 1));
        CHECK(table.workers[w].expected_mass == Approx(0.25).margin(1e-14));
    }
}

TEST_CASE("cumulative load agrees with brute-force prefix sums", "[partition]") {
    std::mt19937 rng(77);
    for (const std::size_t n : {2, 3, 4}) {
        const pskg::Marginals m(oracle::random_initiator(rng, n));
        const unsigned k = n == 2 ? 6 : 4;
        const std::vector<double> prefix =
            oracle::prefix_sums(pskg::kron_power_vector(m.u_vector(), k));
        for (std::uint64_t u = 0; u < prefix.size(); ++u) {
            REQUIRE(pskg::cumulative_load(m, k, u) == Approx(prefix[u]).margin(1e-12));
        }
    }
}

TEST_CASE("locate_boundary inverts cumulative load", "[partition]") {
    std::mt19937 seeds(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const std::size_t n : {2, 3, 4}) {
        const pskg::Marginals m(oracle::random_initiator(seeds, n));
        const unsigned k = n == 2 ? 6 : 4;
        for (int trial = 0; trial < 1000; ++trial) {
            const double r = unit(seeds);
            const std::uint64_t u = pskg::locate_boundary(m, k, r);
            REQUIRE(pskg::cumulative_load(m, k, u) <= r);
            REQUIRE(r < pskg::cumulative_load(m, k, u + 1));
        }
    }
}

TEST_CASE("partitions tile the vertex range for every worker count", "[partition]") {
    std::mt19937 rng(13);
    const pskg::Marginals m(oracle::random_initiator(rng, 2));
    const unsigned k = 4;
    const std::uint64_t n_vertices = 16;
    for (std::size_t n_workers = 1; n_workers <= n_vertices; ++n_workers) {
        const pskg::PartitionTable table = pskg::compute_partition(m, k, n_workers);
        REQUIRE(table.n_workers() == n_workers);
        CHECK(table.workers.front().u_low == 0);
        CHECK(table.workers.back().u_up == n_vertices);
        double total = 0.0;
        for (std::size_t w = 0; w < n_workers; ++w) {
            REQUIRE(table.workers[w].u_low <= table.workers[w].u_up);
            if (w > 0) REQUIRE(table.workers[w].u_low == table.workers[w - 1].u_up);
            REQUIRE(table.workers[w].expected_mass >= -1e-15);
            total += table.workers[w].expected_mass;
        }
        CHECK(total == Approx(1.0).margin(1e-12));
    }
    CHECK_THROWS_AS(pskg::compute_partition(m, k, 0), std::invalid_argument);
    CHECK_THROWS_AS(pskg::compute_partition(m, k, 17), std::invalid_argument);
}

TEST_CASE("imbalance bound value and scaling", "[partition]") {
    const pskg::ImbalanceBound b = pskg::imbalance_bound(16000.0, 16, 0.95);
    CHECK(b.per_worker_mean == Approx(1000.0).margin(1e-12));
    CHECK(b.delta == Approx(87.97473981325241).epsilon(1e-12));
    CHECK(b.alpha == 0.95);

    // Quadrupling the edges doubles the half-width.
    const pskg::ImbalanceBound b4 = pskg::imbalance_bound(64000.0, 16, 0.95);
    CHECK(b4.delta / b.delta == Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(pskg::imbalance_bound(0.0, 16, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(pskg::imbalance_bound(INFINITY, 16, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(pskg::imbalance_bound(16000.0, 1, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(pskg::imbalance_bound(16000.0, 16, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(pskg::imbalance_bound(16000.0, 16, 1.0), std::invalid_argument);
}

TEST_CASE("imbalance bound covers at the nominal rate", "[partition]") {
    // Perfectly balanced workers, so each load is Poisson(E / N_w).
    const double edges = 16000.0;
    const std::size_t n_workers = 16;
    const pskg::ImbalanceBound b = pskg::imbalance_bound(edges, n_workers, 0.95);
    const double threshold = b.per_worker_mean + b.delta;

    pskg::RandomStream rng(2024, 0);
    const int trials = 2000;
    int exceeded = 0;
    for (int t = 0; t < trials; ++t) {
        std::uint64_t max_load = 0;
        for (std::size_t w = 0; w < n_workers; ++w) {
            max_load = std::max(max_load, pskg::sample_poisson(b.per_worker_mean, rng));
        }
        if (static_cast<double>(max_load) > threshold) ++exceeded;
    }
    const double rate = static_cast<double>(exceeded) / trials;
    CHECK(rate <= 0.065);  // 0.05 nominal plus 3 binomial sigma
    CHECK(rate > 0.005);   // the bound is not vacuously loose here
}
