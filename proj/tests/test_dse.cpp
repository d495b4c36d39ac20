#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "classd/dse.hpp"
#include "classd/error.hpp"

using namespace classd;
using namespace classd::dse;

namespace {

// data/behavior_estimates.txt, in microseconds and cents.
EstimateTable reference() {
  return EstimateTable({
      {"S0", 2'200, 5'400, 1},
      {"S1", 183'300, 305'600, 817},
      {"S2", 502'000, 836'700, 1073},
      {"S3", 988'100, 1'646'400, 1065},
      {"LINE", 77'400, 188'100, 360},
      {"MOLD", 749'100, 1'566'700, 160},
  });
}

std::vector<PartitionOption> option_rows(const EstimateTable& t, const CostModel& cm) {
  return {evaluate({"S3"}, t, cm), evaluate({"S1", "S2", "S3"}, t, cm),
          evaluate({"LINE", "MOLD"}, t, cm), evaluate({"MOLD"}, t, cm)};
}

}  // namespace

TEST_CASE("cost share: six equal sizes split $35 to the cent") {
  const std::vector<std::uint64_t> sizes(6, 100);
  const auto s = hw_cost_share(sizes, 3500);
  CHECK(s == std::vector<Cents>{584, 583, 583, 584, 583, 583});
  CHECK(std::accumulate(s.begin(), s.end(), Cents{0}) == 3500);
}

TEST_CASE("cost share: code sizes proportional to the reference shares") {
  const std::vector<std::uint64_t> sizes = {1, 817, 1073, 1065, 360, 160};
  // Total 3476 units split over 3476 cents is the identity.
  CHECK(hw_cost_share(sizes, 3476) == std::vector<Cents>{1, 817, 1073, 1065, 360, 160});
  const auto s = hw_cost_share(sizes, 3500);
  CHECK(std::accumulate(s.begin(), s.end(), Cents{0}) == 3500);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double exact = 3500.0 * static_cast<double>(sizes[i]) / 3476.0;
    CHECK(std::abs(static_cast<double>(s[i]) - exact) < 1.0);
  }
}

TEST_CASE("cost share edge cases") {
  CHECK(hw_cost_share(std::vector<std::uint64_t>{0, 0, 42, 0}, 3500) ==
        std::vector<Cents>{0, 0, 3500, 0});
  CHECK_THROWS_AS(hw_cost_share(std::vector<std::uint64_t>{0, 0, 0}, 3500), AllZeroSizes);
}

TEST_CASE("property: shares always sum to the total and stay within a cent") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::uint64_t> sizes(1 + rng() % 12);
    for (auto& z : sizes) z = rng() % 5000;
    sizes[rng() % sizes.size()] += 1;
    const Cents total = static_cast<Cents>(rng() % 100000);
    const auto s = hw_cost_share(sizes, total);
    const double sum = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0}));
    CHECK(std::accumulate(s.begin(), s.end(), Cents{0}) == total);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i] >= 0);
      CHECK(std::abs(static_cast<double>(s[i]) - total * static_cast<double>(sizes[i]) / sum) < 1.0);
    }
  }
}

TEST_CASE("the four reference options") {
  const auto t = reference();
  const CostModel cm;
  const auto rows = option_rows(t, cm);

  CHECK(rows[0].t_dsp == 2'902'500);
  CHECK(rows[0].t_hw == 988'100);
  CHECK(rows[0].t_total == 3'890'600);
  CHECK(rows[0].cost == 1965);

  CHECK(rows[1].t_dsp == 1'760'200);
  CHECK(rows[1].t_hw == 1'673'400);
  CHECK(rows[1].t_total == 3'433'600);
  CHECK(rows[1].cost == 3855);

  CHECK(rows[2].t_dsp == 2'794'100);
  CHECK(rows[2].t_hw == 826'500);
  CHECK(rows[2].t_total == 3'620'600);
  CHECK(rows[2].cost == 1420);

  // Reference values 2982.0 / 3731.0; the exact sums are 0.2 and 0.3 ms higher.
  CHECK(std::abs(rows[3].t_dsp - 2'982'000) <= 300);
  CHECK(std::abs(rows[3].t_total - 3'731'000) <= 300);
  CHECK(rows[3].t_dsp == 2'982'200);
  CHECK(rows[3].t_hw == 749'100);
  CHECK(rows[3].t_total == 3'731'300);
  CHECK(rows[3].cost == 1060);

  for (const auto& r : rows) CHECK(r.feasible);
}

TEST_CASE("all-software mapping misses the deadline") {
  const auto o = evaluate(std::vector<std::string>{}, reference(), CostModel{});
  CHECK(o.t_total == 4'548'900);
  CHECK(o.t_hw == 0);
  CHECK(o.cost == 900);
  CHECK_FALSE(o.feasible);
}

TEST_CASE("unknown behavior in a set") {
  CHECK_THROWS_AS(evaluate({"S9"}, reference(), CostModel{}), UnknownBehavior);
}

TEST_CASE("table totals") {
  const auto t = reference();
  CHECK(t.total_sw() == 4'548'900);
  // Reference HW total is 2502.5.
  CHECK(t.total_hw() == 2'502'100);
  CHECK(std::abs(t.total_hw() - 2'502'500) <= 500);
  CHECK(t.total_share() == 3476);
}

TEST_CASE("table validation") {
  CHECK_THROWS_AS(EstimateTable({{"A", 0, 5, 1}}), InvalidArgument);
  CHECK_THROWS_AS(EstimateTable({{"A", 1, 5, 1}, {"A", 2, 6, 1}}), InvalidArgument);
}

TEST_CASE("exhaustive enumeration") {
  const auto t = reference();
  const CostModel cm;
  const auto all = enumerate(t, cm);
  REQUIRE(all.size() == 64);
  // Golden count from tests/oracles/dse_bruteforce.py.
  CHECK(std::count_if(all.begin(), all.end(), [](auto& o) { return o.feasible; }) == 56);

  // Leading ranks from the same oracle.
  CHECK(all[0].hw_set == std::vector<std::string>{"MOLD"});
  CHECK(all[1].hw_set == std::vector<std::string>{"S0", "MOLD"});
  CHECK(all[2].hw_set == std::vector<std::string>{"LINE", "MOLD"});
  CHECK(all[3].hw_set == std::vector<std::string>{"S0", "LINE", "MOLD"});
  CHECK(all[4].hw_set == std::vector<std::string>{"S1", "MOLD"});

  for (std::size_t i = 1; i < all.size(); ++i) {
    const auto& a = all[i - 1];
    const auto& b = all[i];
    CHECK((a.feasible > b.feasible ||
           (a.feasible == b.feasible &&
            (a.cost < b.cost || (a.cost == b.cost && a.t_total <= b.t_total)))));
  }

  SUBCASE("pinning S0 to software") {
    const auto pinned = enumerate(t, cm, {{"S0", Side::Sw}});
    CHECK(pinned.size() == 32);
    CHECK(std::count_if(pinned.begin(), pinned.end(), [](auto& o) { return o.feasible; }) == 28);
    for (const auto& o : pinned) {
      CHECK(std::find(o.hw_set.begin(), o.hw_set.end(), "S0") == o.hw_set.end());
    }
  }
  SUBCASE("pinning to hardware") {
    const auto pinned = enumerate(t, cm, {{"S3", Side::Hw}, {"S2", Side::Hw}});
    CHECK(pinned.size() == 16);
    for (const auto& o : pinned) CHECK((o.hw_mask & t.mask_of({"S2", "S3"})) == t.mask_of({"S2", "S3"}));
  }
  SUBCASE("pinning an unknown behavior") {
    CHECK_THROWS_AS(enumerate(t, cm, {{"X", Side::Sw}}), UnknownBehavior);
  }
}

TEST_CASE("too many behaviors") {
  std::vector<BehaviorEstimate> rows;
  for (int i = 0; i < 21; ++i) rows.push_back({"B" + std::to_string(i), 1, 2, 1});
  CHECK_THROWS_AS(enumerate(EstimateTable(rows), CostModel{}), TooManyBehaviors);
}

TEST_CASE("selection") {
  const auto t = reference();
  CostModel cm;
  const auto four = option_rows(t, cm);

  const auto pick = select(four, cm);
  CHECK(pick.hw_set == std::vector<std::string>{"MOLD"});
  CHECK(pick.cost == 1060);

  cm.deadline = 3'500'000;
  const auto fast = select(four, cm);
  CHECK(fast.hw_set == std::vector<std::string>{"S1", "S2", "S3"});
  CHECK(fast.t_total == 3'433'600);

  // Over every mapping the cheapest under 3500 ms is {S3, MOLD} (oracle).
  const auto all = enumerate(t, cm);
  CHECK(std::count_if(all.begin(), all.end(), [](auto& o) { return o.feasible; }) == 32);
  const auto best = select(all, cm);
  CHECK(best.hw_set == std::vector<std::string>{"S3", "MOLD"});
  CHECK(best.t_total == 3'073'000);
  CHECK(best.cost == 2125);

  cm.deadline = 1'000'000;
  CHECK_THROWS_AS(select(four, cm), NoFeasibleOption);
  CHECK_THROWS_AS(select(all, cm), NoFeasibleOption);
}

TEST_CASE("selection ties go to the faster option, then the smaller set") {
  const EstimateTable t({{"A", 100, 200, 0}, {"B", 150, 200, 0}});
  const CostModel cm{0, 0, 1000};
  const auto pick = select(enumerate(t, cm), cm);
  CHECK(pick.hw_set == std::vector<std::string>{"A", "B"});

  const EstimateTable same({{"A", 200, 200, 0}, {"B", 200, 200, 0}});
  CHECK(select(enumerate(same, cm), cm).hw_set.empty());
}

TEST_CASE("option 3 against option 4") {
  const auto t = reference();
  const auto rows = option_rows(t, CostModel{});
  const Comparison c = compare(rows[2], rows[3]);
  // Reference 3.05; exact sums give 3.0575.
  CHECK(std::abs(c.time_delta_pct - 3.05) <= 0.01);
  CHECK(std::abs(c.cost_delta_pct - 25.35) <= 0.01);
  // The reference 25.53 is within a quarter point.
  CHECK(std::abs(c.cost_delta_pct - 25.53) <= 0.25);

  const Comparison same = compare(rows[0], rows[0]);
  CHECK(same.time_delta_pct == 0.0);
  CHECK(same.cost_delta_pct == 0.0);
}

TEST_CASE("property: moving a behavior to HW changes time by t_hw - t_sw") {
  const auto t = reference();
  const CostModel cm;
  for (std::uint32_t mask = 0; mask < 64; ++mask) {
    const auto base = evaluate(mask, t, cm);
    for (std::size_t b = 0; b < t.size(); ++b) {
      if (mask & (1u << b)) continue;
      const auto more = evaluate(mask | (1u << b), t, cm);
      CHECK(more.t_total - base.t_total == t.rows()[b].t_hw - t.rows()[b].t_sw);
      CHECK(more.t_total < base.t_total);
      CHECK(more.cost >= base.cost);
    }
  }
  const auto all = enumerate(t, cm);
  const auto fastest = std::min_element(all.begin(), all.end(),
                                        [](auto& a, auto& b) { return a.t_total < b.t_total; });
  CHECK(fastest->hw_mask == 63u);
  CHECK(fastest->t_total == 2'502'100);
}

TEST_CASE("property: scaling every time and the deadline keeps the choice") {
  const auto t = reference();
  for (std::int64_t k : {2, 3, 7, 10}) {
    std::vector<BehaviorEstimate> rows = t.rows();
    for (auto& r : rows) {
      r.t_hw *= k;
      r.t_sw *= k;
    }
    CostModel cm;
    cm.deadline *= k;
    const auto pick = select(enumerate(EstimateTable(rows), cm), cm);
    CHECK(pick.hw_set == std::vector<std::string>{"MOLD"});
    CHECK(pick.t_total == 3'731'300 * k);
  }
}

TEST_CASE("property: random tables agree with a direct search") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<BehaviorEstimate> rows;
    for (std::size_t i = 0; i < n; ++i) {
      const Micros sw = 1 + static_cast<Micros>(rng() % 10000);
      rows.push_back({"B" + std::to_string(i), 1 + static_cast<Micros>(rng() % 10000), sw,
                      static_cast<Cents>(rng() % 500)});
    }
    const EstimateTable t(rows);
    const CostModel cm{100, 0, static_cast<Micros>(1 + rng() % (10000 * n))};
    const auto all = enumerate(t, cm);
    CHECK(all.size() == (std::size_t{1} << n));

    bool any = false;
    Cents best_cost = 0;
    Micros best_time = 0;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      Micros time = 0;
      Cents cost = 100;
      for (std::size_t i = 0; i < n; ++i) {
        if (m & (1u << i)) {
          time += rows[i].t_hw;
          cost += rows[i].hw_cost_share;
        } else {
          time += rows[i].t_sw;
        }
      }
      if (time >= cm.deadline) continue;
      if (!any || cost < best_cost || (cost == best_cost && time < best_time)) {
        best_cost = cost;
        best_time = time;
      }
      any = true;
    }
    if (any) {
      const auto pick = select(all, cm);
      CHECK(pick.cost == best_cost);
      CHECK(pick.t_total == best_time);
    } else {
      CHECK_THROWS_AS(select(all, cm), NoFeasibleOption);
    }
  }
}

TEST_CASE("display formatting") {
  CHECK(format_ms(3'731'300) == "3731.3");
  CHECK(format_ms(2'200) == "2.2");
  CHECK(format_ms(2'250) == "2.3");
  CHECK(format_ms(0) == "0.0");
  CHECK(format_money(1060) == "10.60");
  CHECK(format_money(1) == "0.01");
  CHECK(format_money(-5) == "-0.05");
  CHECK(format_set({}) == "-");
  CHECK(format_set({"LINE", "MOLD"}) == "LINE,MOLD");
}
