#pragma once

#include <string>
#include <string_view>

#include "carnot/group.hpp"

namespace carnot {

/// Parses a group spec document:
///   {"type":"graded","name":..,"layers":[..],"brackets":[{"i":..,"j":..,"k":..,"c":..}]}
///   {"type":"h-type","name":..,"n":..,"m":..,"J":[[[row],..],..]}
/// Indices are 0-based. Unknown keys are rejected.
GroupSpec parse_group_json(std::string_view text);
GroupSpec load_group_file(const std::string& path);

/// Preset name first, then a spec file path.
GroupSpec resolve_group(const std::string& name_or_path);

}  // namespace carnot
