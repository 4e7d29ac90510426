#pragma once

#include "json_reader.hpp"
#include "subrad/scenario.hpp"

namespace subrad::detail {

ModelParams read_model(Reader& reader, bool constant_field_allowed);
json model_json(const ModelParams& model, bool with_constant_field);

ScenarioConfig read_scenario(Reader& reader);
json scenario_json(const ScenarioConfig& config);

std::string read_file(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace subrad::detail
