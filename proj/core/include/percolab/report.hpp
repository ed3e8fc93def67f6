#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "percolab/percolation.hpp"
#include "percolab/provenance.hpp"
#include "percolab/rational.hpp"

namespace percolab {

inline constexpr const char* kVersion = "0.3.0";

// Machine-readable record of one command. Every number is stored together
// with its provenance, and every such field is also listed in the report's
// provenance ledger. Output is deterministic: keys keep insertion order,
// floats are printed with 17 significant digits and timings are only emitted
// on request.
class RunReport {
 public:
  RunReport(std::string command, std::string group, std::string multiset,
            std::optional<std::uint64_t> seed);
  ~RunReport();
  RunReport(RunReport&&) noexcept;
  RunReport& operator=(RunReport&&) noexcept;

  // Stages appear in the order they are first touched.
  void number(const std::string& stage, const std::string& field, double value,
              Provenance provenance);
  // An exact rational: stored as "num/den" plus its nearest double.
  void exact(const std::string& stage, const std::string& field, const Rational& value);
  void integer(const std::string& stage, const std::string& field, std::int64_t value,
               Provenance provenance);
  void flag(const std::string& stage, const std::string& field, bool value);
  void text(const std::string& stage, const std::string& field, const std::string& value);
  // Rows of numbers under one provenance.
  void table(const std::string& stage, const std::string& field,
             const std::vector<std::string>& columns,
             const std::vector<std::vector<double>>& rows, Provenance provenance);
  // Pre-serialized JSON (witness data); ParseError if it does not parse.
  void json(const std::string& stage, const std::string& field, const std::string& json_text);
  void seconds(const std::string& stage, double elapsed);

  // Verdict of a certifying command. `holds` is recorded only when every
  // input is certified; otherwise the verdict is absent and the outcome is
  // "not-certified".
  void outcome(bool inputs_certified, bool holds, const std::string& reason);
  // "certified", "not-certified" or "none".
  std::string status() const;

  std::string to_json(bool include_timing = false) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SvgCurve {
  std::string label;
  std::vector<ThetaPoint> points;
  // Draw the Wilson band (sampled curves) or a plain line (oracles).
  bool band = true;
};

struct SvgRule {
  std::string label;
  double value = 0.0;
  // Horizontal rules mark theta levels, vertical ones mark p values.
  bool vertical = false;
};

struct SvgPlot {
  std::string title;
  std::vector<SvgCurve> curves;
  std::vector<SvgRule> rules;
  int width = 640;
  int height = 420;
};

// Standalone SVG with p on [0, 1] and theta on [0, 1].
void write_svg(std::ostream& os, const SvgPlot& plot);

// Writes to a temporary file next to `path` and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace percolab
