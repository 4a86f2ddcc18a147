#include "mecfl/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace mecfl {

const char* const kIterationCsvHeader =
    "iteration,test_loss,train_loss,weighted_score,t_total,t_edge,t_local_max,e_total_mean,e_total_max";
const char* const kSweepCsvHeader =
    "value,iterations,test_loss,train_loss,test_accuracy,t_local_train_max,t_local_max,t_edge,t_total,"
    "e_total_mean,e_total_max";

namespace {

double max_seconds(const std::vector<Seconds>& xs) {
  double m = 0.0;
  for (Seconds s : xs) m = std::max(m, s.value());
  return m;
}

double mean_joules(const std::vector<Joules>& xs) {
  if (xs.empty()) return 0.0;
  double total = 0.0;
  for (Joules e : xs) total += e.value();
  return total / static_cast<double>(xs.size());
}

double max_joules(const std::vector<Joules>& xs) {
  double m = 0.0;
  for (Joules e : xs) m = std::max(m, e.value());
  return m;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_iteration_csv(std::ostream& out, const std::vector<RoundMetrics>& trace) {
  out << kIterationCsvHeader << '\n';
  for (const RoundMetrics& m : trace) {
    out << m.iteration << ',' << format_double(m.test_loss) << ',' << format_double(m.train_loss) << ','
        << format_double(m.weighted_score) << ',' << format_double(m.t_total.value()) << ','
        << format_double(m.t_edge.value()) << ',' << format_double(max_seconds(m.t_local)) << ','
        << format_double(mean_joules(m.e_total)) << ',' << format_double(max_joules(m.e_total)) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    const RoundMetrics& m = r.final_round;
    out << format_double(r.value) << ',' << r.iterations << ',' << format_double(m.test_loss) << ','
        << format_double(m.train_loss) << ',' << format_double(r.test_accuracy) << ','
        << format_double(r.t_local_train_max) << ',' << format_double(max_seconds(m.t_local)) << ','
        << format_double(m.t_edge.value()) << ',' << format_double(m.t_total.value()) << ','
        << format_double(mean_joules(m.e_total)) << ',' << format_double(max_joules(m.e_total)) << '\n';
  }
}

void write_allocation_trace(std::ostream& out, const std::vector<AllocationState>& allocations) {
  for (std::size_t k = 0; k < allocations.size(); ++k) {
    const AllocationState& a = allocations[k];
    nlohmann::json line;
    line["iteration"] = k + 1;
    line["delta"] = std::vector<double>(a.delta().begin(), a.delta().end());
    line["gamma"] = std::vector<double>(a.gamma().begin(), a.gamma().end());
    line["uplink_offload"] = std::vector<double>(a.uplink_offload().begin(), a.uplink_offload().end());
    line["uplink_weight"] = std::vector<double>(a.uplink_weight().begin(), a.uplink_weight().end());
    line["lambda_offload"] = std::vector<double>(a.lambda_offload().begin(), a.lambda_offload().end());
    line["lambda_local"] = std::vector<double>(a.lambda_local().begin(), a.lambda_local().end());
    out << line.dump() << '\n';
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << contents;
  if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace mecfl
