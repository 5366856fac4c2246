#include <gtest/gtest.h>

#include <cstring>
#include <string>

#include "qes/sweep.hpp"

namespace qes {
namespace {

std::uint64_t bits(double x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof b);
  return b;
}

TEST(Records, FromCandidate) {
  const std::vector<QesCandidate> cands = solve_candidates(ModelSpec::rabi(1.0, 0.3), 1);
  const JuddianPointRecord r = make_record(cands.back());
  EXPECT_EQ(r.model, "rabi");
  EXPECT_EQ(r.sector, "");
  EXPECT_EQ(r.branch, "Nontrivial");
  EXPECT_NEAR(*r.delta, 0.8, 1e-12);
  ASSERT_TRUE(r.bae_residual.has_value());
  EXPECT_FALSE(r.reject_reason.has_value());
}

TEST(Records, RejectedCandidateHasNoDelta) {
  const std::vector<QesCandidate> cands = solve_candidates(ModelSpec::two_photon({3, 4}, 1.0, 0.4), 1);
  const JuddianPointRecord r = make_record(cands.front());
  EXPECT_EQ(r.reject_reason.value_or(""), "negative_delta_squared");
  EXPECT_FALSE(r.delta.has_value());
  EXPECT_LT(r.delta_squared, 0.0);
}

TEST(Records, JsonRoundTripIsBitExact) {
  for (const QesCandidate& c : solve_candidates(ModelSpec::two_mode({3, 2}, 1.0, 0.37), 4)) {
    const JuddianPointRecord r = make_record(c);
    const ordered_json back = ordered_json::parse(to_json(r).dump());
    EXPECT_EQ(bits(back["g"].get<double>()), bits(r.g));
    EXPECT_EQ(bits(back["energy"].get<double>()), bits(r.energy));
    EXPECT_EQ(bits(back["delta_squared"].get<double>()), bits(r.delta_squared));
    if (r.delta) {
      EXPECT_EQ(bits(back["delta"].get<double>()), bits(*r.delta));
    }
    ASSERT_EQ(back["roots"].size(), r.roots.size());
    for (std::size_t i = 0; i < r.roots.size(); ++i) {
      EXPECT_EQ(bits(back["roots"][i][0].get<double>()), bits(r.roots[i].real()));
      EXPECT_EQ(bits(back["roots"][i][1].get<double>()), bits(r.roots[i].imag()));
    }
    EXPECT_EQ(bits(back["residuals"]["ode"].get<double>()), bits(r.ode_residual));
  }
}

TEST(Records, JsonFieldOrder) {
  const JuddianPointRecord r = make_record(solve_candidates(ModelSpec::rabi(1.0, 0.3), 1).back());
  const ordered_json j = to_json(r);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> want{"model", "sector", "degree", "omega", "g", "delta", "delta_squared",
                                      "energy", "roots", "residuals", "branch"};
  EXPECT_EQ(keys, want);
}

TEST(Records, CsvRoundTrip) {
  const JuddianPointRecord r = make_record(solve_candidates(ModelSpec::two_photon({1, 4}, 1.0, 0.3), 1).back());
  const std::string row = csv_row(r, std::nullopt);
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= row.size(); ++i)
    if (i == row.size() || row[i] == ',') {
      fields.push_back(row.substr(start, i - start));
      start = i + 1;
    }
  ASSERT_EQ(fields.size(), 14u);
  EXPECT_EQ(fields[0], "two-photon");
  EXPECT_EQ(fields[1], "1/4");
  EXPECT_EQ(bits(std::stod(fields[6])), bits(r.delta_squared));
  EXPECT_EQ(bits(std::stod(fields[7])), bits(r.energy));
  EXPECT_EQ(fields[12], "");
}

TEST(Records, NumberFormat) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_optional(std::nullopt), "");
}

TEST(GridSpec, Parse) {
  const GridSpec g = GridSpec::parse("0.05:0.45:9");
  EXPECT_EQ(g.steps, 9);
  EXPECT_DOUBLE_EQ(g.at(0), 0.05);
  EXPECT_EQ(g.at(8), 0.45);
  EXPECT_NEAR(g.at(4), 0.25, 1e-15);
  EXPECT_THROW(GridSpec::parse("0:1"), Error);
  EXPECT_THROW(GridSpec::parse("0:1:1"), Error);
  EXPECT_EQ(GridSpec::parse("0.3:0.3:1").points(), std::vector<double>{0.3});
  EXPECT_THROW(GridSpec::parse("a:1:3"), Error);
  EXPECT_THROW(GridSpec::parse("0:1:3x"), Error);
}

TEST(Sweep, SortedAndThreadIndependent) {
  const ModelSpec base = ModelSpec::two_mode({1, 1}, 1.0, 0.1);
  const GridSpec grid = GridSpec::parse("0.1:0.8:15");
  const RecordFilter all{true, true};
  const SweepResult one = run_sweep(base, 3, grid, all, {}, 1);
  const SweepResult many = run_sweep(base, 3, grid, all, {}, 4);
  ASSERT_EQ(one.rows.size(), many.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    EXPECT_EQ(csv_row(one.rows[i].record, std::nullopt), csv_row(many.rows[i].record, std::nullopt));
    if (i > 0) {
      const JuddianPointRecord& a = one.rows[i - 1].record;
      const JuddianPointRecord& b = one.rows[i].record;
      EXPECT_TRUE(a.g < b.g || (a.g == b.g && a.delta_squared <= b.delta_squared));
    }
  }
}

TEST(Sweep, FilterAndVerify) {
  const ModelSpec base = ModelSpec::rabi(1.0, 0.1);
  const SweepResult res = run_sweep(base, 1, GridSpec::parse("0.05:0.45:9"), {}, {true, 0, 1e-8});
  ASSERT_EQ(res.rows.size(), 9u);
  for (const SweepRow& row : res.rows) {
    EXPECT_EQ(row.record.branch, "Nontrivial");
    EXPECT_NEAR(*row.record.delta, std::sqrt(1 - 4 * row.record.g * row.record.g), 1e-10);
    ASSERT_TRUE(row.oracle.has_value());
    EXPECT_TRUE(row.oracle->matched);
    EXPECT_LE(*row.oracle->gap, 1e-8);
  }
}

TEST(Sweep, InvalidGridPointRejectsWholeSweep) {
  EXPECT_THROW(run_sweep(ModelSpec::two_photon({1, 4}, 1.0, 0.1), 1, GridSpec::parse("0.1:0.6:6"), {}, {}), Error);
}

}  // namespace
}  // namespace qes
