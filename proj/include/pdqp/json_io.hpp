#pragma once

#include <string>

#include "pdqp/generator.hpp"
#include "pdqp/instance.hpp"

namespace pdqp {

/// Canonical JSON instance format. Field order is fixed and the encoder is
/// deterministic, so equal instances serialize to identical bytes. Infinite
/// bounds are encoded as the string sentinels "inf" / "-inf"; all other reals
/// round-trip exactly (shortest representation).
std::string write_instance_json(const QpInstance& inst);
QpInstance read_instance_json(const std::string& text);

std::string write_point_json(const PrimalDualPoint& p);
PrimalDualPoint read_point_json(const std::string& text);

GeneratorConfig read_generator_config_json(const std::string& text);
std::string write_generator_config_json(const GeneratorConfig& cfg);

/// Loads .json or .qps by extension (anything not ending in .json is parsed
/// as QPS).
QpInstance load_instance_file(const std::string& path);
void save_instance_file(const QpInstance& inst, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace pdqp
