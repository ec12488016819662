#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swbin/phase.hpp"
#include "swbin/simulate.hpp"
#include "swbin/source.hpp"
#include "swbin/spectrum.hpp"

namespace swbin {

struct SourceFile {
  JointSource source;
  std::optional<MismatchModel> model;
};

// Parses { "alphabet_x": [...], "alphabet_y": [...], "p": [[...]] } with an
// optional "p_tilde". Errors name the offending field/row/column.
SourceFile parse_source_json(const std::string& text);
SourceFile load_source(const std::string& path);

// True when the JSON declares { "closed_form": "harmonic", ... } instead
// of a discrete source.
bool is_closed_form_json(const std::string& text);
HarmonicSpectrum parse_harmonic_json(const std::string& text);

// Fixed float formatting contract: 12 significant digits, shortest form.
std::string format_double(double v);

// CSV emission; every table carries a header row.
std::string spectrum_table_csv(const std::vector<SpectrumPoint>& pts);
std::string boundaries_csv(std::vector<BoundaryPoint> pts);  // sorted copy
std::string dominance_csv(const std::vector<DominanceCell>& cells);

// JSON round-trip for simulation artifacts.
std::string sim_report_to_json(const SimReport& rep);
SimReport sim_report_from_json(const std::string& text);
std::string dilution_report_to_json(const DilutionReport& rep);
DilutionReport dilution_report_from_json(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace swbin
