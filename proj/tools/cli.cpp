#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "polling/analytic/report.hpp"
#include "polling/analytic/vacation.hpp"
#include "polling/errors.hpp"
#include "polling/model_json.hpp"
#include "polling/sim/simulator.hpp"

namespace polling::cli {

using analytic::format_fixed;
using analytic::format_number;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Options {
  std::string model;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::size_t cycles = 100000;
  std::size_t reps = 10;
  std::optional<std::size_t> warmup;
  std::string sweep;
  bool hold_total = false;
  std::vector<std::size_t> queues;
  std::vector<std::string> disciplines{"gated", "mixed_ge"};
  std::optional<double> rho;
  std::optional<double> switchover;
  std::size_t points = 50;
};

Format format_of(const Options& o) { return o.format == "table" ? Format::table : Format::csv; }

// Evaluates f(0..n-1) on a worker pool; results and the first failure (by
// index) come back in index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F f) {
  std::vector<std::optional<T>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        results[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*results[i]));
  }
  return out;
}

PollingModel require_model(const Options& o) {
  if (o.model.empty()) throw SchemaError("--model is required");
  return load_model(o.model);
}

std::string cell(double x, Format f) { return f == Format::table ? format_fixed(x) : format_number(x); }

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string class_label(std::size_t queue, Priority c) {
  return "W_" + std::to_string(queue + 1) + std::string(to_string(c));
}

// ---- analyze -------------------------------------------------------------

void cmd_analyze(const Options& o, std::ostream& out) {
  const analytic::PerfReport r = analytic::analyze(require_model(o));
  if (format_of(o) == Format::table) analytic::write_table(out, r);
  else analytic::write_csv(out, r);
}

// ---- simulate ------------------------------------------------------------

void cmd_simulate(const Options& o, std::ostream& out) {
  const PollingModel m = require_model(o);
  const std::size_t warmup = o.warmup.value_or(o.cycles / 10);
  const sim::SimStats s = sim::replicate(m, o.seed, o.reps, o.cycles, warmup);
  if (format_of(o) == Format::table) {
    analytic::write_sim_table(out, m, s);
    return;
  }
  std::optional<double> rhs;
  try {
    rhs = analytic::pcl_rhs(analytic::Analyzer(m));
  } catch (const Error&) {
    // Models the analytic engine rejects (idle queues) get no right-hand side.
  }
  analytic::write_sim_csv(out, m, s, rhs);
}

// ---- compare -------------------------------------------------------------

constexpr Discipline kAllDisciplines[] = {Discipline::gated, Discipline::exhaustive, Discipline::mixed_ge};

void cmd_compare(const Options& o, std::ostream& out) {
  const PollingModel base = require_model(o);
  std::vector<std::size_t> queues;
  for (std::size_t q : o.queues) {
    if (q == 0 || q > base.size()) throw SchemaError("--queues: no queue " + std::to_string(q));
    queues.push_back(q - 1);
  }
  if (queues.empty()) queues = default_compare_queues(base);

  // The first listed queue varies slowest.
  std::size_t n_variants = 1;
  for (std::size_t k = 0; k < queues.size(); ++k) n_variants *= 3;
  std::vector<PollingModel> variants;
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < n_variants; ++v) {
    PollingModel m = base;
    std::string label;
    std::size_t code = v;
    for (std::size_t k = queues.size(); k-- > 0;) {
      m.queues[queues[k]].discipline = kAllDisciplines[code % 3];
      code /= 3;
    }
    for (std::size_t k = 0; k < queues.size(); ++k) {
      if (k) label += '/';
      label += std::string(to_string(m.queues[queues[k]].discipline));
    }
    variants.push_back(std::move(m));
    labels.push_back(label);
  }

  const auto reports = parallel_map<analytic::PerfReport>(
      variants.size(), [&](std::size_t v) { return analytic::analyze(variants[v]); });

  if (format_of(o) == Format::csv) {
    out << "variant," << analytic::kReportHeader << '\n';
    for (std::size_t v = 0; v < reports.size(); ++v) {
      for (const analytic::ClassResult& c : reports[v].classes)
        out << labels[v] << ',' << c.queue + 1 << ',' << to_string(c.cls) << ',' << to_string(c.discipline) << ','
            << format_number(c.mean_wait) << ',' << format_number(c.var_wait) << ',' << format_number(c.mean_qlen)
            << ",,,\n";
      const analytic::PclResult& p = reports[v].pcl;
      out << labels[v] << ",system,,,,,," << format_number(p.lhs) << ',' << format_number(p.rhs) << ','
          << format_number(p.residual) << '\n';
    }
    return;
  }

  // Table: one column per variant, as in a side-by-side comparison.
  constexpr std::size_t kWidth = 12;
  std::size_t label_width = 10;
  for (const std::string& l : labels) label_width = std::max(label_width, l.size() + 1);
  out << pad("", 10);
  for (const std::string& l : labels) out << pad(l, std::max(kWidth, label_width));
  out << '\n';
  const std::size_t col = std::max(kWidth, label_width);
  const auto& classes = reports.front().classes;
  auto row = [&](const std::string& name, auto value) {
    out << std::string(name).append(name.size() < 10 ? 10 - name.size() : 0, ' ');
    for (const analytic::PerfReport& r : reports) out << pad(format_fixed(value(r)), col);
    out << '\n';
  };
  for (std::size_t k = 0; k < classes.size(); ++k)
    row("E(" + class_label(classes[k].queue, classes[k].cls) + ")",
        [k](const analytic::PerfReport& r) { return r.classes[k].mean_wait; });
  for (std::size_t k = 0; k < classes.size(); ++k)
    row("Var(" + class_label(classes[k].queue, classes[k].cls) + ")",
        [k](const analytic::PerfReport& r) { return r.classes[k].var_wait; });
  for (std::size_t i = 0; i < base.size(); ++i)
    row("E(Z_" + std::to_string(i + 1) + ")", [i](const analytic::PerfReport& r) { return r.queues[i].leftover_work; });
}

// ---- sweep ---------------------------------------------------------------

std::vector<Discipline> parse_disciplines(const std::vector<std::string>& names) {
  std::vector<Discipline> out;
  for (const std::string& n : names) {
    try {
      out.push_back(discipline_from_string(n));
    } catch (const std::exception&) {
      throw SchemaError("--disciplines: unknown discipline '" + n + "'");
    }
  }
  return out;
}

void cmd_sweep(const Options& o, std::ostream& out) {
  if (o.sweep.empty()) throw SchemaError("--sweep is required");
  const PollingModel base = require_model(o);
  const SweepSpec spec = parse_sweep(o.sweep, o.hold_total);
  if (spec.queue >= base.size()) throw SchemaError("--sweep: no queue Q" + std::to_string(spec.queue + 1));
  const std::vector<Discipline> disciplines = parse_disciplines(o.disciplines);

  struct Row {
    double lambda_high, lambda_low, high, low;
  };
  const std::size_t n = spec.grid.size() * disciplines.size();
  const auto rows = parallel_map<Row>(n, [&](std::size_t k) {
    PollingModel m = apply_sweep_point(base, spec, spec.grid[k / disciplines.size()]);
    const QueueSpec& q = m.queues[spec.queue];
    m.queues[spec.queue].discipline = disciplines[k % disciplines.size()];
    const analytic::Analyzer a(m);
    Row r{q.lambda_high, q.lambda_low, kNaN, kNaN};
    if (q.lambda_high > 0.0) r.high = analytic::mean_wait_high(a, spec.queue);
    if (q.lambda_low > 0.0) r.low = analytic::mean_wait_low(a, spec.queue).value;
    return r;
  });

  const Format f = format_of(o);
  const char sep = f == Format::csv ? ',' : ' ';
  out << (f == Format::csv ? "queue,lambda_high,lambda_low,discipline,mean_wait_high,mean_wait_low\n"
                           : "queue lambda_high lambda_low discipline mean_wait_high mean_wait_low\n");
  for (std::size_t k = 0; k < n; ++k) {
    const Row& r = rows[k];
    out << spec.queue + 1 << sep << cell(r.lambda_high, f) << sep << cell(r.lambda_low, f) << sep
        << to_string(disciplines[k % disciplines.size()]) << sep << cell(r.high, f) << sep << cell(r.low, f) << '\n';
  }
}

// ---- check ---------------------------------------------------------------

void cmd_check(const Options& o, std::ostream& out, int& status) {
  const analytic::Analyzer a(require_model(o));
  analytic::PerfReport r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const QueueSpec& q = a.queue(i);
    for (Priority c : {Priority::high, Priority::low}) {
      if (q.lambda(c) <= 0.0) continue;
      analytic::ClassResult cr;
      cr.queue = i;
      cr.cls = c;
      cr.discipline = q.discipline;
      cr.mean_wait = analytic::mean_wait(a, i, c);
      r.classes.push_back(cr);
    }
  }
  status = write_check(out, a, r, format_of(o));
}

// ---- vacation ------------------------------------------------------------

void cmd_vacation(const Options& o, std::ostream& out) {
  double rho = 0.0, vacation = 0.0;
  if (!o.model.empty()) {
    const PollingModel m = load_model(o.model);
    if (m.size() != 1) throw SchemaError("vacation: model must have a single queue");
    const QueueSpec& q = m.queues[0];
    for (Priority c : {Priority::high, Priority::low}) {
      if (q.lambda(c) > 0.0 && q.service(c) != Distribution::exponential(1.0))
        throw SchemaError("vacation: services must be exponential with mean 1");
    }
    if (m.switchovers[0].family() != Family::deterministic)
      throw SchemaError("vacation: the vacation (switch-over) must be deterministic");
    validate(m);
    rho = q.rho();
    vacation = m.switchovers[0].mean();
  }
  if (o.rho) rho = *o.rho;
  if (o.switchover) vacation = *o.switchover;
  if (!(rho > 0.0)) throw SchemaError("vacation: rho must be positive (--model or --rho)");
  if (rho >= 1.0) throw UnstableSystem(rho);
  if (!(vacation > 0.0)) throw SchemaError("vacation: vacation length must be positive (--model or --switchover)");
  if (o.points < 2) throw SchemaError("vacation: --points must be at least 2");

  const std::optional<double> star = analytic::vacation_crossover(rho, vacation);
  const Format f = format_of(o);
  const char sep = f == Format::csv ? ',' : ' ';
  out << (f == Format::csv ? "lambda_high,gated,mixed_ge,lambda_star\n" : "lambda_high gated mixed_ge lambda_star\n");
  for (std::size_t k = 0; k < o.points; ++k) {
    const double high = rho * static_cast<double>(k) / static_cast<double>(o.points - 1);
    const double low = rho - high;
    out << cell(high, f) << sep
        << cell(analytic::vacation_mean_wait_low(high, low, vacation, analytic::VacationDiscipline::gated), f) << sep
        << cell(analytic::vacation_mean_wait_low(high, low, vacation, analytic::VacationDiscipline::mixed_ge), f)
        << sep << (star ? cell(*star, f) : std::string(f == Format::csv ? "" : "-")) << '\n';
  }
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model, "Model JSON file");
  cmd->add_option("--out", o.out, "Output file (default: standard output)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "table"}));
}

}  // namespace

SweepSpec parse_sweep(const std::string& text, bool hold_total) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 5) throw SchemaError("--sweep: expected PARAM:Qk:FIRST:LAST:POINTS, got '" + text + "'");

  SweepSpec s;
  s.hold_total = hold_total;
  if (parts[0] == "lambda_high") s.cls = Priority::high;
  else if (parts[0] == "lambda_low") s.cls = Priority::low;
  else throw SchemaError("--sweep: parameter must be lambda_high or lambda_low");

  auto number = [&](const std::string& p, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != p.size() || p.empty()) throw SchemaError(std::string("--sweep: bad ") + what + " '" + p + "'");
    return v;
  };
  const std::string& q = parts[1];
  if (q.size() < 2 || (q[0] != 'Q' && q[0] != 'q')) throw SchemaError("--sweep: queue must look like Q1");
  const double qn = number(q.substr(1), "queue");
  if (qn < 1 || qn != std::floor(qn)) throw SchemaError("--sweep: queue must be a positive integer");
  s.queue = static_cast<std::size_t>(qn) - 1;

  const double first = number(parts[2], "first value");
  const double last = number(parts[3], "last value");
  const double points = number(parts[4], "point count");
  if (points < 2 || points != std::floor(points)) throw SchemaError("--sweep: need an integer number of points >= 2");
  if (!(last > first)) throw SchemaError("--sweep: grid must be strictly increasing");
  if (first < 0.0) throw SchemaError("--sweep: rates must be nonnegative");
  const auto n = static_cast<std::size_t>(points);
  for (std::size_t k = 0; k < n; ++k)
    s.grid.push_back(k + 1 == n ? last : first + (last - first) * static_cast<double>(k) / static_cast<double>(n - 1));
  return s;
}

PollingModel apply_sweep_point(const PollingModel& model, const SweepSpec& spec, double value) {
  PollingModel m = model;
  QueueSpec& q = m.queues.at(spec.queue);
  double& swept = spec.cls == Priority::high ? q.lambda_high : q.lambda_low;
  double& other = spec.cls == Priority::high ? q.lambda_low : q.lambda_high;
  if (spec.hold_total) {
    const double total = q.lambda_high + q.lambda_low;
    double rest = total - value;
    if (std::abs(rest) <= 1e-12 * std::max(1.0, total)) rest = 0.0;
    if (rest < 0.0) throw SchemaError("--sweep: value exceeds the queue's total rate with --hold-total");
    other = rest;
  }
  swept = value;
  // A class that gains arrivals needs a service distribution.
  for (Priority c : {Priority::high, Priority::low}) {
    if (q.lambda(c) > 0.0 && q.service(c).mean() <= 0.0) {
      const Distribution& fallback = c == Priority::high ? q.service_low : q.service_high;
      (c == Priority::high ? q.service_high : q.service_low) = fallback;
    }
  }
  return m;
}

std::vector<std::size_t> default_compare_queues(const PollingModel& model) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < model.size(); ++i)
    if (model.queues[i].lambda_high > 0.0 && model.queues[i].lambda_low > 0.0) out.push_back(i);
  if (out.empty())
    for (std::size_t i = 0; i < model.size(); ++i) out.push_back(i);
  return out;
}

int write_check(std::ostream& os, const analytic::Analyzer& a, const analytic::PerfReport& report, Format format) {
  const analytic::PclResult p = analytic::pcl_check(a, report);
  const bool pass = p.residual <= kCheckTolerance;
  if (format == Format::csv) {
    os << "queue,discipline,leftover_work,pcl_lhs,pcl_rhs,residual\n";
    for (std::size_t i = 0; i < a.size(); ++i)
      os << i + 1 << ',' << to_string(a.queue(i).discipline) << ',' << format_number(analytic::leftover_work(a, i))
         << ",,,\n";
    os << "system,,," << format_number(p.lhs) << ',' << format_number(p.rhs) << ',' << format_number(p.residual)
       << '\n';
  } else {
    os << "queue discipline  E(Z)\n";
    for (std::size_t i = 0; i < a.size(); ++i)
      os << pad(std::to_string(i + 1), 5) << ' ' << pad(std::string(to_string(a.queue(i).discipline)), 10) << ' '
         << pad(format_fixed(analytic::leftover_work(a, i)), 10) << '\n';
    os << "lhs " << format_fixed(p.lhs, 6) << "  rhs " << format_fixed(p.rhs, 6) << "  residual "
       << format_number(p.residual, 3) << (pass ? "  ok\n" : "  FAILED\n");
  }
  return pass ? ExitCode::ok : ExitCode::check_failed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and simulated performance measures for two-class polling systems"};
  app.require_subcommand(1);
  Options o;

  CLI::App* analyze = app.add_subcommand("analyze", "Analytic report: waits, variances, queue lengths, moments");
  add_common(analyze, o);

  CLI::App* simulate = app.add_subcommand("simulate", "Replicated discrete-event simulation");
  add_common(simulate, o);
  simulate->add_option("--seed", o.seed, "Base seed");
  simulate->add_option("--cycles", o.cycles, "Cycles of queue 1 per replication")->check(CLI::PositiveNumber);
  simulate->add_option("--reps", o.reps, "Replications")->check(CLI::Range(2, 1000000));
  simulate->add_option("--warmup", o.warmup, "Discarded cycles (default: 10% of --cycles)");

  CLI::App* compare = app.add_subcommand("compare", "Gated, exhaustive and mixed_ge variants side by side");
  add_common(compare, o);
  compare->add_option("--queues", o.queues, "Queues to vary (1-based; default: queues with both classes)")
      ->delimiter(',');

  CLI::App* sweep = app.add_subcommand("sweep", "Mean waits over a grid of arrival rates");
  add_common(sweep, o);
  sweep->add_option("--sweep", o.sweep, "PARAM:Qk:FIRST:LAST:POINTS, PARAM in {lambda_high, lambda_low}");
  sweep->add_flag("--hold-total", o.hold_total, "Keep the swept queue's total arrival rate fixed");
  sweep->add_option("--disciplines", o.disciplines, "Disciplines of the swept queue")->delimiter(',');

  CLI::App* check = app.add_subcommand("check", "Pseudo-conservation law check");
  add_common(check, o);

  CLI::App* vacation = app.add_subcommand("vacation", "Single queue with vacations: gated vs mixed_ge");
  add_common(vacation, o);
  vacation->add_option("--rho", o.rho, "Total load (overrides the model)");
  vacation->add_option("--switchover", o.switchover, "Vacation length (overrides the model)");
  vacation->add_option("--points", o.points, "Grid points for the high-priority rate");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitCode::ok : ExitCode::io_error;
  }

  std::ostringstream buffer;
  int status = ExitCode::ok;
  try {
    if (*analyze) cmd_analyze(o, buffer);
    else if (*simulate) cmd_simulate(o, buffer);
    else if (*compare) cmd_compare(o, buffer);
    else if (*sweep) cmd_sweep(o, buffer);
    else if (*check) cmd_check(o, buffer, status);
    else if (*vacation) cmd_vacation(o, buffer);
  } catch (const UnstableSystem& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::unstable;
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::convergence;
  } catch (const IllConditioned& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::convergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::io_error;
  }

  if (o.out.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(o.out, std::ios::binary);
    file << buffer.str();
    if (!file) {
      err << "error: cannot write " << o.out << '\n';
      return ExitCode::io_error;
    }
  }
  return status;
}

}  // namespace polling::cli
