#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qes/records.hpp"

namespace qes {

/// Inclusive grid "a:b:steps"; a single point needs a == b.
struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int steps = 2;

  double at(int i) const { return i == steps - 1 ? max : min + (max - min) * i / (steps - 1); }

  std::vector<double> points() const {
    std::vector<double> p(steps);
    for (int i = 0; i < steps; ++i) p[i] = at(i);
    return p;
  }

  static GridSpec parse(std::string_view text) {
    auto bad = [&] { return Error(ErrorCode::InvalidArgument, "range must be a:b:steps, got '" + std::string(text) + "'"); };
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw bad();
    auto num = [&](std::string_view s) {
      try {
        std::size_t used = 0;
        const double v = std::stod(std::string(s), &used);
        if (used != s.size() || !std::isfinite(v)) throw bad();
        return v;
      } catch (const std::logic_error&) {
        throw bad();
      }
    };
    GridSpec g;
    g.min = num(text.substr(0, c1));
    g.max = num(text.substr(c1 + 1, c2 - c1 - 1));
    const std::string_view st = text.substr(c2 + 1);
    auto [ptr, ec] = std::from_chars(st.data(), st.data() + st.size(), g.steps);
    if (ec != std::errc{} || ptr != st.data() + st.size() || g.steps < 1) throw bad();
    if (g.steps == 1 && g.min != g.max) throw bad();
    return g;
  }
};

// Worker count: hardware concurrency, capped by QES_RABI_THREADS when set.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("QES_RABI_THREADS")) {
    int v = 0;
    const std::string_view s(cap);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && v >= 1) n = std::min(n, static_cast<unsigned>(v));
  }
  return n;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

struct RecordFilter {
  bool include_rejected = false;
  bool include_degenerate = false;
};

struct SweepRow {
  JuddianPointRecord record;
  std::optional<OracleBlock> oracle;
};

inline bool emitted(const JuddianPointRecord& r, const RecordFilter& f) {
  if (r.reject_reason) return f.include_rejected;
  return r.branch == to_string(Branch::Nontrivial) || f.include_degenerate;
}

inline bool is_nontrivial(const SweepRow& row) {
  return !row.record.reject_reason && row.record.branch == to_string(Branch::Nontrivial);
}

struct VerifyOptions {
  bool enabled = false;
  int n_max = 0;  // 0 selects the model default
  double tol = 1e-8;
};

/// Records for a single (spec, degree); oracle blocks only on accepted Nontrivial rows.
inline std::vector<SweepRow> point_rows(const ModelSpec& spec, int degree, const RecordFilter& filter,
                                        const VerifyOptions& verify) {
  std::vector<SweepRow> rows;
  for (const QesCandidate& c : solve_candidates(spec, degree)) {
    SweepRow row{make_record(c), std::nullopt};
    if (!emitted(row.record, filter)) continue;
    if (verify.enabled && is_nontrivial(row)) {
      const int n_max = verify.n_max > 0 ? verify.n_max : default_nmax(spec.kind);
      row.oracle = verify_record(c.solution, n_max, verify.tol);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct SweepResult {
  GridSpec grid;
  std::vector<SweepRow> rows;  // sorted by (g, degree, delta_squared)
};

inline SweepResult run_sweep(const ModelSpec& base, int degree, const GridSpec& grid, const RecordFilter& filter,
                             const VerifyOptions& verify, unsigned threads = worker_count()) {
  const std::vector<double> gs = grid.points();
  for (double g : gs) {
    ModelSpec s = base;
    s.g = g;
    validate(s);
  }
  std::vector<std::vector<SweepRow>> per_point(gs.size());
  parallel_for(gs.size(), threads, [&](std::size_t i) {
    ModelSpec s = base;
    s.g = gs[i];
    per_point[i] = point_rows(s, degree, filter, verify);
  });
  SweepResult out{grid, {}};
  for (auto& rows : per_point)
    for (auto& r : rows) out.rows.push_back(std::move(r));
  std::stable_sort(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.record.g != b.record.g) return a.record.g < b.record.g;
    if (a.record.degree != b.record.degree) return a.record.degree < b.record.degree;
    return a.record.delta_squared < b.record.delta_squared;
  });
  return out;
}

}  // namespace qes
