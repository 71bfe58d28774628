#ifndef BOUNDPOP_REPORT_HPP
#define BOUNDPOP_REPORT_HPP

#include "boundpop/bootstrap.hpp"
#include "boundpop/estimator.hpp"

#include <json.hpp>

#include <string>

namespace boundpop {

using Report = nlohmann::ordered_json;

enum class ReportFormat { tsv, json };

Report estimate_report(const CountHistogram &h, const RichnessEstimate &est);
// Adds the bagged fields to an estimate report.
void add_bootstrap(Report &report, const BootstrapSummary &summary);

// Both renderings are driven by the same Report, so every number appears
// with identical digits in each.
std::string render_json(const Report &report);
std::string render_tsv(const Report &report);
std::string render(const Report &report, ReportFormat format);

} // namespace boundpop

#endif
