#include "boundpop/report.hpp"

#include <sstream>

namespace boundpop {

namespace {

std::string scalar(const Report &v) {
  if (v.is_string())
    return v.get<std::string>();
  if (v.is_null())
    return "NA";
  return v.dump();
}

std::string joined(const Report &arr) {
  std::string s;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (i)
      s += ',';
    s += scalar(arr[i]);
  }
  return s;
}

bool is_table(const Report &v) {
  return v.is_array() && !v.empty() && v.front().is_object();
}

void tsv_object(std::ostream &out, const Report &obj, const std::string &prefix) {
  for (const auto &[key, value] : obj.items()) {
    const std::string name = prefix + key;
    if (value.is_object()) {
      tsv_object(out, value, name + ".");
    } else if (is_table(value)) {
      out << "#" << name << '\n';
      bool first = true;
      for (const auto &[col, unused] : value.front().items()) {
        out << (first ? "" : "\t") << col;
        first = false;
      }
      out << '\n';
      for (const auto &row : value) {
        first = true;
        for (const auto &[col, cell] : row.items()) {
          out << (first ? "" : "\t") << (cell.is_array() ? joined(cell) : scalar(cell));
          first = false;
        }
        out << '\n';
      }
    } else if (value.is_array()) {
      out << name << '\t' << joined(value) << '\n';
    } else {
      out << name << '\t' << scalar(value) << '\n';
    }
  }
}

} // namespace

Report estimate_report(const CountHistogram &h, const RichnessEstimate &est) {
  Report r;
  r["n0_hat"] = est.n0_hat;
  r["s_hat"] = est.s_hat;
  r["f0_hat"] = est.f0_hat;
  r["order"] = est.order_used;
  r["fallback"] = est.fallback;
  r["points"] = est.rule.points;
  r["weights"] = est.rule.weights;
  r["distinct"] = h.distinct();
  r["individuals"] = h.individuals();
  return r;
}

void add_bootstrap(Report &r, const BootstrapSummary &s) {
  r["bagged"] = s.bagged_n0;
  r["bagged_s_hat"] = s.bagged_s_hat;
  r["variance"] = s.variance;
  r["variance_within"] = s.variance_within;
  r["variance_between"] = s.variance_between;
  r["ci"] = {s.ci_lower, s.ci_upper};
  r["replicates"] = s.replicates;
  r["failed"] = s.n_failed;
  r["seed"] = s.seed;
}

std::string render_json(const Report &report) { return report.dump(2) + "\n"; }

std::string render_tsv(const Report &report) {
  std::ostringstream out;
  tsv_object(out, report, "");
  return out.str();
}

std::string render(const Report &report, ReportFormat format) {
  return format == ReportFormat::json ? render_json(report) : render_tsv(report);
}

} // namespace boundpop
