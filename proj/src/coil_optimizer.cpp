#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "pcbot/coil.hpp"
#include "pcbot/errors.hpp"

namespace pcbot::coil {

namespace {

struct DescentRun {
  std::vector<double> pitches;
  double objective{0.0};
  int sweeps{0};
  long evaluations{0};
  std::vector<double> history;
};

class Objective {
 public:
  Objective(const CoilBounds& b, const CircuitConfig& c, const MagnetCoupling& m)
      : bounds_(b), circuit_(c), magnet_(m) {}

  double operator()(const std::vector<double>& pitches, long& counter) const {
    ++counter;
    return coil_objective(CoilSpec{bounds_, pitches}, circuit_, magnet_);
  }

 private:
  const CoilBounds& bounds_;
  const CircuitConfig& circuit_;
  const MagnetCoupling& magnet_;
};

// Golden-section search for the minimiser of f on [lo, hi].
template <typename F>
double golden_section(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

// Coordinate descent with two move families per sweep: single-pitch moves
// within the slack left by the other turns, and pitch transfers between
// neighbouring turns. The second family keeps progress possible when the
// span constraint is active. Only strict improvements are accepted, so the
// objective sequence is nonincreasing.
DescentRun descend(std::vector<double> s, const CoilBounds& bounds, const Objective& objective,
                   const OptimizerOptions& opt) {
  DescentRun run;
  const double smin = bounds.min_pitch();
  const double span = bounds.span();
  const double tol = 1e-6 * smin;
  double f = objective(s, run.evaluations);
  run.history.push_back(f);

  auto line_search = [&](auto&& apply, double lo, double hi) {
    if (!(hi - lo > tol)) return;
    std::vector<double> trial = s;
    auto eval = [&](double x) {
      apply(trial, x);
      return objective(trial, run.evaluations);
    };
    const double x = golden_section(eval, lo, hi, tol);
    const double fx = eval(x);
    if (fx < f) {
      f = fx;
      s = trial;
    }
  };

  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    const double f_prev = f;
    for (std::size_t k = 0; k < s.size(); ++k) {
      double rest = 0.0;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != k) rest += s[j];
      line_search([k](std::vector<double>& t, double x) { t[k] = x; }, smin, span - rest);
    }
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
      const double total = s[k] + s[k + 1];
      line_search(
          [k, total](std::vector<double>& t, double x) {
            t[k] = x;
            t[k + 1] = total - x;
          },
          smin, total - smin);
    }
    run.history.push_back(f);
    run.sweeps = sweep + 1;
    if (f_prev - f <= opt.rel_tol * f_prev) break;
  }
  run.pitches = std::move(s);
  run.objective = f;
  return run;
}

std::vector<DescentRun> descend_all(const std::vector<std::vector<double>>& starts,
                                    const CoilBounds& bounds, const Objective& objective,
                                    const OptimizerOptions& opt) {
  std::vector<DescentRun> runs(starts.size());
  if (opt.exec == Execution::Parallel) {
    const auto n = static_cast<long>(starts.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) runs[i] = descend(starts[i], bounds, objective, opt);
  } else {
    for (std::size_t i = 0; i < starts.size(); ++i)
      runs[i] = descend(starts[i], bounds, objective, opt);
  }
  return runs;
}

std::size_t best_index(const std::vector<DescentRun>& runs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].objective < runs[best].objective) best = i;
  return best;
}

std::vector<double> jittered_start(std::size_t turns, const CoilBounds& bounds, double jitter,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double smin = bounds.min_pitch();
  const double span = bounds.span();
  std::vector<double> s(turns);
  double sum = 0.0;
  for (auto& p : s) {
    p = std::max(smin, span / static_cast<double>(turns) * (1.0 + jitter * u(rng)));
    sum += p;
  }
  if (sum > span) {
    // Shrink the excess above the minimum pitch proportionally.
    const double free = span - smin * static_cast<double>(turns);
    const double excess = sum - smin * static_cast<double>(turns);
    for (auto& p : s) p = smin + (p - smin) * (free / excess);
  }
  return s;
}

}  // namespace

OptimizationResult refine_coil(const CoilSpec& start, const CircuitConfig& circuit,
                               const MagnetCoupling& magnet, const OptimizerOptions& options) {
  start.validate();
  const Objective objective(start.bounds, circuit, magnet);
  DescentRun run = descend(start.pitches, start.bounds, objective, options);
  OptimizationResult r;
  r.coil = CoilSpec{start.bounds, std::move(run.pitches)};
  r.objective = run.objective;
  r.iterations = run.sweeps;
  r.evaluations = run.evaluations;
  r.history = std::move(run.history);
  try {
    r.baseline_objective =
        coil_objective(simple_coil(start.bounds, options.baseline_width), circuit, magnet);
  } catch (const Error&) {
    r.baseline_objective = 0.0;
  }
  return r;
}

OptimizationResult optimize_coil(const CoilBounds& bounds, const CircuitConfig& circuit,
                                 const MagnetCoupling& magnet, const OptimizerOptions& options) {
  bounds.validate();
  const double smin = bounds.min_pitch();
  const double span = bounds.span();
  const auto max_turns = static_cast<std::size_t>(std::floor(span / smin + 1e-9));
  if (max_turns == 0)
    throw InfeasibleBoundsError("optimize_coil: not even one turn of minimum pitch fits");

  const Objective objective(bounds, circuit, magnet);

  // Stage 1: one fixed-width start per feasible turn count, plus the baseline.
  std::vector<std::vector<double>> starts;
  for (std::size_t n = 1; n <= max_turns; ++n)
    starts.emplace_back(n, std::max(smin, span / static_cast<double>(n)));
  std::optional<CoilSpec> baseline;
  try {
    baseline = simple_coil(bounds, options.baseline_width);
    starts.push_back(baseline->pitches);
  } catch (const Error&) {
    baseline.reset();
  }
  std::vector<DescentRun> runs = descend_all(starts, bounds, objective, options);

  // Stage 2: jittered restarts at the winning turn count.
  const std::size_t turns = runs[best_index(runs)].pitches.size();
  std::vector<std::vector<double>> restarts;
  for (int r = 0; r < options.restarts; ++r)
    restarts.push_back(jittered_start(turns, bounds, options.jitter,
                                      options.seed + 0x9E3779B97F4A7C15ULL * (r + 1)));
  auto more = descend_all(restarts, bounds, objective, options);
  runs.insert(runs.end(), std::make_move_iterator(more.begin()),
              std::make_move_iterator(more.end()));

  OptimizationResult result;
  for (const auto& run : runs) result.evaluations += run.evaluations;
  DescentRun& best = runs[best_index(runs)];
  result.coil = CoilSpec{bounds, std::move(best.pitches)};
  result.objective = best.objective;
  result.iterations = best.sweeps;
  result.history = std::move(best.history);
  result.baseline_objective = baseline ? coil_objective(*baseline, circuit, magnet) : 0.0;
  return result;
}

}  // namespace pcbot::coil
