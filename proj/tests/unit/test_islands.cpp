#include <doctest.h>

#include "support.hpp"

#include <fmagent/islands/islands.hpp>

#include <algorithm>
#include <set>

using namespace fmagent;
using fmagent::testing::ok_report;
using fmagent::testing::real_candidate;

namespace {

    const Bounds kUnit2 = Bounds::uniform(2, 0.0, 1.0);

    std::vector<const Genome*> ptrs(const std::vector<Genome>& g)
    {
        std::vector<const Genome*> out;
        for (const Genome& x : g)
            out.push_back(&x);
        return out;
    }

    // Every index appears in exactly one group.
    void check_partition(const std::vector<std::vector<std::size_t>>& groups, std::size_t n, int islands)
    {
        REQUIRE(groups.size() == static_cast<std::size_t>(islands));
        std::multiset<std::size_t> seen;
        for (const auto& g : groups) {
            CHECK_FALSE(g.empty());
            seen.insert(g.begin(), g.end());
        }
        CHECK(seen.size() == n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(seen.count(i) == 1);
    }

} // namespace

TEST_CASE("cold_start_partition examples")
{
    SUBCASE("two separated groups land on different islands")
    {
        std::vector<Genome> g;
        for (double d : {0.0, 0.01, 0.02, 0.03})
            g.push_back(Genome::real(Eigen::Vector2d(0.05 + d, 0.05), kUnit2));
        for (double d : {0.0, 0.01, 0.02, 0.03})
            g.push_back(Genome::real(Eigen::Vector2d(0.9 + d, 0.95), kUnit2));
        const auto groups = cold_start_partition(ptrs(g), 2, 11);
        check_partition(groups, 8, 2);
        for (const auto& grp : groups) {
            std::set<bool> sides;
            for (std::size_t i : grp)
                sides.insert(i < 4);
            CHECK(sides.size() == 1);
        }
    }
    SUBCASE("one island takes everything")
    {
        std::vector<Genome> g(5, Genome::real(Eigen::Vector2d(0.2, 0.2), kUnit2));
        check_partition(cold_start_partition(ptrs(g), 1, 1), 5, 1);
    }
    SUBCASE("identical genomes still give no empty island")
    {
        std::vector<Genome> g(4, Genome::real(Eigen::Vector2d(0.5, 0.5), kUnit2));
        check_partition(cold_start_partition(ptrs(g), 4, 3), 4, 4);
    }
    SUBCASE("too few candidates")
    {
        std::vector<Genome> g(2, Genome::real(Eigen::Vector2d(0.5, 0.5), kUnit2));
        CHECK_THROWS_AS(cold_start_partition(ptrs(g), 3, 3), TooFewCandidates);
        CHECK_THROWS_AS(cold_start_partition(ptrs(g), 0, 3), std::invalid_argument);
    }
}

TEST_CASE("cold_start_partition is a partition with no empty island")
{
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const int islands = 1 + static_cast<int>(rng.index(6));
        const std::size_t n = static_cast<std::size_t>(islands) + rng.index(30);
        std::vector<Genome> g;
        const bool degenerate = rng.uniform() < 0.2;
        for (std::size_t i = 0; i < n; ++i) {
            // A few duplicated points make empty clusters likely.
            const Eigen::Vector2d v = degenerate ? Eigen::Vector2d(0.3, 0.3 + 0.1 * static_cast<double>(i % 2)) : Eigen::Vector2d(rng.uniform(), rng.uniform());
            g.push_back(Genome::real(v, kUnit2));
        }
        const auto groups = cold_start_partition(ptrs(g), islands, static_cast<std::uint64_t>(trial));
        check_partition(groups, n, islands);
        CHECK(groups == cold_start_partition(ptrs(g), islands, static_cast<std::uint64_t>(trial)));
    }
}

TEST_CASE("plan_migration")
{
    const CandidateId a{0, 1}, b{0, 2}, c{0, 3}, d{0, 4};
    SUBCASE("three-island ring")
    {
        std::vector<ElitePool> pools(3, ElitePool(4));
        pools[0].update(a, 1.0, 1);
        pools[1].update(b, 2.0, 2);
        pools[2].update(c, 3.0, 3);
        const auto moves = plan_migration(pools, 1);
        REQUIRE(moves.size() == 3);
        CHECK(moves[0].source == a);
        CHECK(moves[0].from == 0);
        CHECK(moves[0].to == 1);
        CHECK(moves[1].source == b);
        CHECK(moves[1].to == 2);
        CHECK(moves[2].source == c);
        CHECK(moves[2].to == 0);
    }
    SUBCASE("count larger than the pool sends what exists")
    {
        std::vector<ElitePool> pools(2, ElitePool(4));
        pools[0].update(a, 1.0, 1);
        pools[1].update(b, 2.0, 2);
        pools[1].update(d, 5.0, 4);
        pools[1].update(c, 3.0, 3);
        const auto moves = plan_migration(pools, 2);
        REQUIRE(moves.size() == 3);
        CHECK(moves[0].source == a);
        CHECK(moves[1].source == d); // best first
        CHECK(moves[2].source == c);
        CHECK(moves[1].to == 0);
    }
    SUBCASE("single island is a no-op")
    {
        std::vector<ElitePool> pools(1, ElitePool(4));
        pools[0].update(a, 1.0, 1);
        CHECK(plan_migration(pools, 2).empty());
    }
}

TEST_CASE("migration schedule and policy validation")
{
    MigrationPolicy p;
    p.interval = 5;
    CHECK_FALSE(migration_due(0, p));
    CHECK_FALSE(migration_due(4, p));
    CHECK(migration_due(5, p));
    CHECK(migration_due(10, p));
    CHECK_FALSE(migration_due(11, p));
    CHECK_NOTHROW(p.validate(10));
    p.count = 11;
    CHECK_THROWS(p.validate(10));
    p.count = 1;
    p.interval = 0;
    CHECK_THROWS(p.validate(10));
}

TEST_CASE("live_members ranks correct candidates and caps the population")
{
    PopulationDB db(3);
    const double fit[] = {0.4, 0.9, 0.1, 0.9, 0.7};
    std::vector<CandidateId> ids;
    for (std::uint64_t i = 0; i < 5; ++i) {
        ids.push_back(CandidateId{1, i});
        REQUIRE(db.insert_candidate(real_candidate(ids.back(), Eigen::Vector2d(0.1 * static_cast<double>(i), 0.5), kUnit2, 0)));
        db.record_fitness(ids.back(), ok_report(fit[i]));
    }
    const CandidateId bad{1, 10}, pending{1, 11}, other{1, 12};
    db.insert_candidate(real_candidate(bad, Eigen::Vector2d(0.5, 0.5), kUnit2, 0));
    db.record_fitness(bad, FitnessReport::failed("boom"));
    db.insert_candidate(real_candidate(pending, Eigen::Vector2d(0.5, 0.5), kUnit2, 0));
    db.insert_candidate(real_candidate(other, Eigen::Vector2d(0.5, 0.5), kUnit2, 1));
    db.record_fitness(other, ok_report(5.0));

    CHECK(live_members(db, 0, 10) == std::vector<CandidateId>{ids[1], ids[3], ids[4], ids[0], ids[2]});
    CHECK(live_members(db, 0, 2) == std::vector<CandidateId>{ids[1], ids[3]});
    CHECK(live_members(db, 1, 10) == std::vector<CandidateId>{other});
    CHECK(live_members(db, 7, 10).empty());

    IslandState island;
    island.id = 0;
    refresh_island(island, db, 2, 10, 5);
    CHECK(island.members.size() == 5);
    CHECK(island.clusters.labels.size() == 5);
    CHECK(island.diversity > 0.0);

    const SamplingPool pool = sampling_pool(island, db);
    REQUIRE(pool.entries.size() == 5);
    for (const SamplingPool::Entry& e : pool.entries) {
        CHECK(e.id != bad);
        CHECK(e.id != pending);
        CHECK(e.id != other);
    }
    CHECK(pool.entries[0].combined == 0.9);
    CHECK(pool.elites == std::vector<CandidateId>{ids[1], ids[3], ids[4]});
    CHECK(pool.diversity == island.diversity);
}
