#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <regex>
#include <sstream>
#include <vector>

#include "pcbot/config.hpp"
#include "pcbot/errors.hpp"
#include "pcbot/experiments.hpp"
#include "pcbot/io.hpp"
#include "pcbot/svg.hpp"

using namespace pcbot;

namespace {

// Minimal well-formedness check: balanced tags, quoted attributes.
bool well_formed_xml(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  const std::regex open(R"(^<([A-Za-z][\w:-]*)((\s+[\w:-]+="[^"<]*")*)\s*(/?)>$)");
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const std::size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    const std::string tag = text.substr(pos, end - pos + 1);
    pos = end + 1;
    if (tag.rfind("<?", 0) == 0) continue;
    if (tag.rfind("</", 0) == 0) {
      const std::string name = tag.substr(2, tag.size() - 3);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      continue;
    }
    std::smatch m;
    if (!std::regex_match(tag, m, open)) return false;
    if (m[4].str().empty()) stack.push_back(m[1].str());
  }
  return stack.empty();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

ExperimentConfig small_config() {
  auto cfg = default_config();
  cfg.simulate.repeats = 3;
  cfg.simulate.cycles = 3;
  cfg.simulate.rect_cycles_per_edge = 3;
  cfg.simulate.sample_stride = 50;
  return cfg;
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_EQ(io::format_number(5.0), "5");
  EXPECT_EQ(io::format_number(-2.5e-7), "-2.5e-07");
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 30));
    EXPECT_EQ(std::strtod(io::format_number(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(std::strtod(io::format_number(std::numeric_limits<double>::denorm_min()).c_str(), nullptr),
            std::numeric_limits<double>::denorm_min());
}

TEST(Csv, EquilibriumRoundTrip) {
  std::vector<magnetics::EquilibriumCell> cells{{7.5e-3, -5.0, 3.95e-3}, {7.5e-3, 1000.0, std::nullopt},
                                                {1.0 / 3.0, 0.1, 2.0 / 7.0}};
  std::stringstream s;
  io::write_equilibrium_csv(s, cells);
  EXPECT_EQ(s.str().substr(0, 22), "d_m,i_a,h_eq_m,exists\n");
  const auto back = io::read_equilibrium_csv(s);
  ASSERT_EQ(back.size(), cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    EXPECT_EQ(back[i].d, cells[i].d);
    EXPECT_EQ(back[i].current, cells[i].current);
    EXPECT_EQ(back[i].h_eq, cells[i].h_eq);
  }
}

TEST(Csv, CoilRoundTrip) {
  coil::CoilSpec c{coil::CoilBounds{}, {0.41e-3, 0.5e-3 / 3.0 + 0.4e-3, 1.23456789e-3}};
  std::stringstream s;
  io::write_coil_csv(s, c);
  const std::string text = s.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 3 * 4);
  const auto back = io::read_coil_csv(s, c.bounds);
  EXPECT_EQ(back.pitches, c.pitches);
}

TEST(Csv, CoilReaderRejectsInconsistentLayers) {
  std::stringstream s("turn,center_radius_m,width_m,layer,pitch_m\n0,1,1,0,0.001\n0,1,1,1,0.002\n");
  coil::CoilBounds b;
  b.layers = 2;
  EXPECT_THROW((void)io::read_coil_csv(s, b), Error);
}

TEST(Csv, CalibrationRoundTrip) {
  control::PhaseDirectionMap m{{0.0, 0.5, 1.0 / 3.0}, {-0.6, 0.1, 2.0}, {4.8e-3, 4.9e-3, 1e-9}};
  std::stringstream s;
  io::write_calibration_csv(s, m);
  const auto back = io::read_calibration_csv(s);
  EXPECT_EQ(back.phases, m.phases);
  EXPECT_EQ(back.directions, m.directions);
  EXPECT_EQ(back.steps, m.steps);
}

TEST(Csv, TrajectoryRoundTripFromSimulation) {
  const auto cfg = small_config();
  const auto run = experiments::simulate_run(cfg, {{{0.3, 0.1}, {1.1, 0.05}}}, 0);
  ASSERT_GT(run.log.samples.size(), 10u);
  std::stringstream s;
  io::write_trajectory_csv(s, run.log.samples);
  EXPECT_EQ(io::read_trajectory_csv(s), run.log.samples);

  std::stringstream c;
  io::write_cycle_starts_csv(c, run.log.cycle_starts);
  EXPECT_EQ(io::read_cycle_starts_csv(c), run.log.cycle_starts);
}

TEST(Csv, ReaderRejectsBadInput) {
  std::stringstream wrong_header("a,b\n1,2\n");
  EXPECT_THROW((void)io::read_calibration_csv(wrong_header), Error);
  std::stringstream bad_number("phase_rad,direction_rad,step_m\n1,x,2\n");
  EXPECT_THROW((void)io::read_calibration_csv(bad_number), Error);
  std::stringstream short_row("phase_rad,direction_rad,step_m\n1,2\n");
  EXPECT_THROW((void)io::read_calibration_csv(short_row), Error);
}

TEST(Json, ScheduleRoundTrip) {
  dynamics::ActuationSchedule s{{{0.1, 0.1}, {1.0 / 3.0, 0.05}, {6.2, 1e-3}}};
  const auto text = io::dump(io::to_json(s));
  EXPECT_EQ(io::schedule_from_json(nlohmann::json::parse(text)), s);
  EXPECT_THROW((void)io::schedule_from_json(nlohmann::json::parse("{\"a\": 1}")), ConfigError);
  EXPECT_THROW((void)io::schedule_from_json(nlohmann::json::parse("[{\"detach_phase\": 1}]")), ConfigError);
}

TEST(Json, SummaryBudgetAndBistabilityRoundTrip) {
  trajectory::Summary s{30, {0.047, -1e-4 / 3.0}, 0.0481, 0.1123, 0.0035};
  const auto s2 = io::summary_from_json(nlohmann::json::parse(io::dump(io::to_json(s))));
  EXPECT_EQ(s2.runs, s.runs);
  EXPECT_EQ(s2.mean_displacement, s.mean_displacement);
  EXPECT_EQ(s2.mean_distance, s.mean_distance);
  EXPECT_EQ(s2.direction_std, s.direction_std);
  EXPECT_EQ(s2.distance_std, s.distance_std);

  const auto b = power::battery_budget(power::PowerConfig{});
  const auto b2 = io::budget_from_json(nlohmann::json::parse(io::dump(io::to_json(b))));
  EXPECT_EQ(b2.actuation_cycles, b.actuation_cycles);
  EXPECT_EQ(b2.range, b.range);
  EXPECT_EQ(b2.runtime, b.runtime);
  EXPECT_EQ(b2.range_with_idle, b.range_with_idle);

  magnetics::BistabilityReport r;
  r.ordering_holds = true;
  r.margins = {2.19e-4, 4.5e-4, 6e-4, 1.0 / 3.0};
  r.h_eq_positive = 1.631e-3;
  const auto r2 = io::bistability_from_json(nlohmann::json::parse(io::dump(io::to_json(r))));
  EXPECT_EQ(r2.margins, r.margins);
  EXPECT_EQ(r2.ordering_holds, r.ordering_holds);
  EXPECT_EQ(r2.h_eq_positive, r.h_eq_positive);
}

TEST(Svg, WellFormedWithOnePathPerRun) {
  io::SvgPlot plot;
  plot.title = "a <test> & \"quotes\"";
  plot.runs = {{{0, 0}, {0.01, 0.0}, {0.02, 0.001}}, {{0, 0}, {0.0, 0.01}}, {}};
  plot.expected = {{0, 0}, {0.02, 0}};
  std::ostringstream out;
  io::write_svg(out, plot);
  EXPECT_TRUE(well_formed_xml(out.str())) << out.str();
  EXPECT_EQ(count(out.str(), "<path"), 3u);
}

TEST(Render, SimulationOutputsAreDeterministicAndWellFormed) {
  const auto cfg = small_config();
  const auto a = experiments::render(cfg, experiments::run_simulate(cfg, experiments::Pattern::Rect));
  const auto b = experiments::render(
      cfg, experiments::run_simulate(cfg, experiments::Pattern::Rect, nullptr, Execution::Serial));
  EXPECT_EQ(a, b);
  EXPECT_TRUE(well_formed_xml(a.at("trajectories.svg")));
  EXPECT_EQ(count(a.at("trajectories.svg"), "<path"), 3u);
  EXPECT_TRUE(a.count("run_002.csv"));
  EXPECT_TRUE(a.count("run_002_starts.csv"));
  std::stringstream starts(a.at("run_000_starts.csv"));
  EXPECT_EQ(io::read_cycle_starts_csv(starts).size(), 13u);
}

TEST(Render, OtherCommandsAreDeterministic) {
  const auto cfg = small_config();
  EXPECT_EQ(experiments::render(cfg, experiments::run_bistability(cfg)),
            experiments::render(cfg, experiments::run_bistability(cfg, Execution::Serial)));
  EXPECT_EQ(experiments::render(cfg, experiments::run_power(cfg)),
            experiments::render(cfg, experiments::run_power(cfg)));
}

TEST(Files, WriteThenRead) {
  const std::string path = ::testing::TempDir() + "pcbot_io_test.txt";
  io::write_file(path, "a\nb\n");
  EXPECT_EQ(io::read_file(path), "a\nb\n");
  EXPECT_THROW((void)io::read_file("/nonexistent/x"), Error);
}
