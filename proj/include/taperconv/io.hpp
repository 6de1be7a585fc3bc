#pragma once

#include "taperconv/config.hpp"
#include "taperconv/experiments.hpp"
#include "taperconv/spectrum.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace taperconv {

inline constexpr int kOutputDigits = 12;

// Shortest form with 12 significant digits ("%.12g").
std::string format_number(double v);

// v rounded to 12 significant digits, for JSON output.
double round_output(double v);

// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_field(const std::string& s);

// "# taperconv <version>" and "# config: <resolved JSON>" lines.
void write_csv_preamble(std::ostream& out, const RunConfig& config);

// {"version": ..., "config": ...}; commands add their results to it.
nlohmann::ordered_json output_header(const RunConfig& config);

nlohmann::ordered_json grid_json(const WavelengthGrid& grid);
nlohmann::ordered_json profile_json(const TaperProfile& profile);

void write_spectrum_csv_rows(std::ostream& out, const Spectrum& s);

// Sweep records: one CSV row or one JSON object per record, carrying the
// record's full per-point snapshot.
std::string record_csv_header();
void write_record_csv(std::ostream& out, const SweepRecord& r);
nlohmann::ordered_json record_json(const SweepRecord& r);

} // namespace taperconv
