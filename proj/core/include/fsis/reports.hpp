#pragma once

#include <string>

#include <json.hpp>

#include "fsis/assumption.hpp"
#include "fsis/evolution.hpp"
#include "fsis/scan.hpp"
#include "fsis/spectrum.hpp"

namespace fsis {

using Json = nlohmann::ordered_json;

/// Floating point fields are written with 17 significant digits so that a
/// round trip through text reproduces the value bit-exactly. NaN is written
/// as the literal `nan` in CSV and as the string "nan" in JSON, and flagged.
std::string fmt17(double v);
Json json_number(double v, bool* nan_flag);

std::string to_csv(const EnergyTrace& trace);
std::string to_csv(const SpectrumReport& report);
std::string to_csv(const ScanResult& scan);
std::string to_csv(const AssumptionReport& report);

Json to_json(const SpectrumReport& report, bool* nan_flag);
Json to_json(const AssumptionReport& report, bool* nan_flag);

enum class ReportFormat { JsonFormat, CsvFormat };
ReportFormat parse_format(const std::string& name);

/// Generic serialization entry point: stable field ordering, 17 significant
/// digits; round-trip load reproduces values bit-exactly.
std::string serialize_report(const SpectrumReport& report, ReportFormat format, bool* nan_flag);
std::string serialize_report(const EnergyTrace& trace, ReportFormat format, bool* nan_flag);

SpectrumReport parse_spectrum_csv(const std::string& text);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace fsis
