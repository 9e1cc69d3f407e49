#include "cono/report.hpp"

#include "cono/error.hpp"

namespace cono {

double RunReport::total_cost() const {
  double total = 0.0;
  for (const auto& row : rows) total += row.cost;
  return total;
}

std::vector<double> RunReport::final_Q() const {
  if (rows.empty()) return Q0;
  return rows.back().Q;
}

bool RunReport::has_metric(const std::string& name) const {
  for (const auto& [key, value] : terminal) {
    if (key == name) return true;
  }
  return false;
}

double RunReport::metric(const std::string& name) const {
  for (const auto& [key, value] : terminal) {
    if (key == name) return value;
  }
  throw InvalidInput("report has no metric '" + name + "'");
}

void RunReport::set_metric(const std::string& name, double value) {
  for (auto& [key, v] : terminal) {
    if (key == name) {
      v = value;
      return;
    }
  }
  terminal.emplace_back(name, value);
}

}  // namespace cono
