#include "rmsolve/trace_io.hpp"

#include <cstdio>
#include <ostream>

namespace rmsolve {

const std::string& trace_csv_header() {
  static const std::string header =
      "iter,grad_evals,gap_last,gap_avg_uniform,gap_avg_lasthalf,reg_x,reg_y,rnorm_x,rnorm_y,"
      "pathlen_x,pathlen_y";
  return header;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  if (trace.tree_game) {
    os << "# gap columns: Nash gap of behavioral profiles; rnorm columns: root mean square of "
          "per-infoset regret norms; reg columns: sequence-form regrets\n";
  }
  os << trace_csv_header() << '\n';
  char buf[512];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof buf,
                  "%ld,%ld,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e\n", r.iter,
                  r.grad_evals, r.gap_last, r.gap_avg_uniform, r.gap_avg_lasthalf, r.reg_x, r.reg_y,
                  r.rnorm_x, r.rnorm_y, r.pathlen_x, r.pathlen_y);
    os << buf;
  }
}

}  // namespace rmsolve
