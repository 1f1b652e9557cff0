#pragma once

#include <filesystem>
#include <string>

#include "dualdi/classifier.hpp"

namespace dualdi {

/// Text checkpoint, format version 1 (see docs/checkpoint-format.md):
///
///   dualdi-model 1
///   classes <K>
///   <name>            (K lines)
///   input_side <S>
///   channels <C>
///   config <free text up to end of line>
///   weights <K*D>
///   <value>           (K*D lines, row-major, %.17g)
///   bias <K>
///   <value>           (K lines)
///   input_mean <D>
///   <value>           (D lines)
///   input_std <D>
///   <value>           (D lines)
///   end
///
/// Values use 17 significant digits, so a load/save round trip is exact.
std::string format_checkpoint(const ClassifierModel& model, const std::string& config_echo);
ClassifierModel parse_checkpoint(const std::string& text, std::string* config_echo = nullptr);

void save_checkpoint(const std::filesystem::path& path, const ClassifierModel& model,
                     const std::string& config_echo);
ClassifierModel load_checkpoint(const std::filesystem::path& path,
                                std::string* config_echo = nullptr);

}  // namespace dualdi
