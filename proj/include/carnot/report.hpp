#pragma once

// JSON and CSV renderings of reports and certificates, and the command
// runner behind the C API: run_command(name, config) resolves a JSON config,
// runs the check and returns the report with a verdict.

#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "carnot/diffusion.hpp"
#include "carnot/inequality.hpp"
#include "carnot/spectral.hpp"

namespace carnot {

using Json = nlohmann::ordered_json;

Json to_json(const SpectralReport& r);
Json to_json(const TraceCheck& r);
Json to_json(const InequalityCertificate& c);
Json to_json(const BiasReport& r);
Json to_json(const Estimate& e);

/// %.17g; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double v);
std::string csv_row(std::span<const double> values);
/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

enum class Verdict { Pass = 0, Fail = 1, Warn = 2 };

struct RunResult {
  Json report;
  Verdict verdict = Verdict::Pass;
};

/// Commands: lambda, trace-check, rp-check, pp-check, iso-check, identities,
/// bias. Unknown config keys raise InvalidArgument. The resolved config
/// (defaults filled in) is echoed as report["config"].
RunResult run_command(const std::string& command, const Json& config);

std::vector<std::string> command_names();

}  // namespace carnot
