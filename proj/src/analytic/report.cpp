#include "polling/analytic/report.hpp"

#include <cmath>
#include <cstdio>

namespace polling::analytic {

std::string format_number(double x, int digits) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string format_fixed(double x, int decimals) {
  if (std::isnan(x)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

namespace {

std::string padded(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

void class_prefix(std::ostream& os, std::size_t queue, Priority c, Discipline d) {
  os << queue + 1 << ',' << to_string(c) << ',' << to_string(d) << ',';
}

const sim::ClassStats& sim_class(const sim::SimStats& s, std::size_t i, Priority c) {
  return c == Priority::high ? s.queues[i].high : s.queues[i].low;
}

}  // namespace

void write_csv(std::ostream& os, const PerfReport& report) {
  os << kReportHeader << '\n';
  for (const ClassResult& c : report.classes) {
    class_prefix(os, c.queue, c.cls, c.discipline);
    os << format_number(c.mean_wait) << ',' << format_number(c.var_wait) << ',' << format_number(c.mean_qlen)
       << ",,,\n";
  }
  os << "system,,,,,," << format_number(report.pcl.lhs) << ',' << format_number(report.pcl.rhs) << ','
     << format_number(report.pcl.residual) << '\n';
}

void write_table(std::ostream& os, const PerfReport& report) {
  os << "queue class discipline   E(W)       Var(W)     E(N)\n";
  for (const ClassResult& c : report.classes) {
    os << padded(std::to_string(c.queue + 1), 5) << ' ' << padded(std::string(to_string(c.cls)), 5) << ' '
       << padded(std::string(to_string(c.discipline)), 10) << ' ' << padded(format_fixed(c.mean_wait), 10) << ' '
       << padded(format_fixed(c.var_wait), 10) << ' ' << padded(format_fixed(c.mean_qlen), 10) << '\n';
  }
  os << "\nqueue  E(C)       E(C^2)     E(V)       E(V^2)     E(I)       E(I^2)     E(XH XL)   E(Z)\n";
  for (std::size_t i = 0; i < report.queues.size(); ++i) {
    const QueueMoments& q = report.queues[i];
    os << padded(std::to_string(i + 1), 5);
    for (double x : {q.cycle.first, q.cycle.second, q.visit.first, q.visit.second, q.intervisit.first,
                     q.intervisit.second, q.cross_moment, q.leftover_work})
      os << ' ' << padded(format_fixed(x), 10);
    os << '\n';
  }
  os << "\nconservation law: lhs " << format_fixed(report.pcl.lhs, 6) << "  rhs " << format_fixed(report.pcl.rhs, 6)
     << "  residual " << format_number(report.pcl.residual, 3) << '\n';
}

double simulated_pcl_lhs(const PollingModel& model, const sim::SimStats& stats) {
  double lhs = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const QueueSpec& q = model.queues[i];
    for (Priority c : {Priority::high, Priority::low})
      if (q.lambda(c) > 0.0) lhs += q.lambda(c) * q.service(c).mean() * sim_class(stats, i, c).mean_wait.mean;
  }
  return lhs;
}

void write_sim_csv(std::ostream& os, const PollingModel& model, const sim::SimStats& stats,
                   std::optional<double> pcl_rhs) {
  os << kReportHeader << ",ci_halfwidth,n_samples\n";
  for (std::size_t i = 0; i < model.size(); ++i) {
    const QueueSpec& q = model.queues[i];
    for (Priority c : {Priority::high, Priority::low}) {
      if (q.lambda(c) <= 0.0) continue;
      const sim::ClassStats& s = sim_class(stats, i, c);
      class_prefix(os, i, c, q.discipline);
      os << format_number(s.mean_wait.mean) << ',' << format_number(s.var_wait.mean) << ','
         << format_number(s.mean_qlen.mean) << ",,,," << format_number(s.mean_wait.half_width) << ','
         << s.n_samples << '\n';
    }
  }
  const double lhs = simulated_pcl_lhs(model, stats);
  os << "system,,,,,," << format_number(lhs) << ',';
  if (pcl_rhs) os << format_number(*pcl_rhs) << ',' << format_number(std::abs(lhs - *pcl_rhs) / *pcl_rhs);
  else os << ',';
  os << ",,\n";
}

void write_sim_table(std::ostream& os, const PollingModel& model, const sim::SimStats& stats) {
  os << "queue class discipline   E(W)       +-         Var(W)     E(N)       samples\n";
  for (std::size_t i = 0; i < model.size(); ++i) {
    const QueueSpec& q = model.queues[i];
    for (Priority c : {Priority::high, Priority::low}) {
      if (q.lambda(c) <= 0.0) continue;
      const sim::ClassStats& s = sim_class(stats, i, c);
      os << padded(std::to_string(i + 1), 5) << ' ' << padded(std::string(to_string(c)), 5) << ' '
         << padded(std::string(to_string(q.discipline)), 10) << ' ' << padded(format_fixed(s.mean_wait.mean), 10)
         << ' ' << padded(format_fixed(s.mean_wait.half_width), 10) << ' ' << padded(format_fixed(s.var_wait.mean), 10)
         << ' ' << padded(format_fixed(s.mean_qlen.mean), 10) << ' ' << s.n_samples << '\n';
    }
  }
  os << "\nqueue  E(C)       E(V)       E(I)       visit fraction\n";
  for (std::size_t i = 0; i < stats.queues.size(); ++i) {
    const sim::QueueStats& q = stats.queues[i];
    os << padded(std::to_string(i + 1), 5);
    for (double x : {q.cycle_mean.mean, q.visit_mean.mean, q.intervisit_mean.mean, q.visit_fraction.mean})
      os << ' ' << padded(format_fixed(x), 10);
    os << '\n';
  }
  os << "\nbusy fraction " << format_fixed(stats.busy_fraction.mean, 4) << " +- "
     << format_fixed(stats.busy_fraction.half_width, 4) << " (" << stats.n_reps << " replications, seed "
     << stats.base_seed << ")\n";
}

}  // namespace polling::analytic
