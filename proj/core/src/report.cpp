#include "percolab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "json.hpp"
#include "percolab/errors.hpp"

namespace percolab {

using Json = nlohmann::ordered_json;

namespace {

// nlohmann prints doubles with the shortest round-trip form, which is
// deterministic; non-finite values become null, so they are kept as text.
Json number_json(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

}  // namespace

struct RunReport::Impl {
  Json root;
  Json timing = Json::object();
  std::string status = "none";

  Json& stage(const std::string& name) {
    auto& stages = root["stages"];
    for (auto& s : stages)
      if (s["name"] == name) return s;
    stages.push_back({{"name", name}, {"fields", Json::object()}});
    return stages.back();
  }

  void put(const std::string& stage_name, const std::string& field, Json value,
           std::optional<Provenance> provenance) {
    auto& fields = stage(stage_name)["fields"];
    if (fields.contains(field))
      throw InvariantViolation("report field " + stage_name + "." + field + " set twice");
    if (provenance) {
      value["provenance"] = to_string(*provenance);
      root["provenance_ledger"].push_back(
          {{"stage", stage_name}, {"field", field}, {"provenance", to_string(*provenance)}});
    }
    fields[field] = std::move(value);
  }
};

RunReport::RunReport(std::string command, std::string group, std::string multiset,
                     std::optional<std::uint64_t> seed)
    : impl_(std::make_unique<Impl>()) {
  auto& r = impl_->root;
  r["tool"] = "percolab";
  r["version"] = kVersion;
  r["command"] = std::move(command);
  r["group"] = std::move(group);
  r["multiset"] = std::move(multiset);
  r["seed"] = seed ? Json(*seed) : Json(nullptr);
  r["stages"] = Json::array();
  r["provenance_ledger"] = Json::array();
  r["outcome"] = "none";
}

RunReport::~RunReport() = default;
RunReport::RunReport(RunReport&&) noexcept = default;
RunReport& RunReport::operator=(RunReport&&) noexcept = default;

void RunReport::number(const std::string& stage, const std::string& field, double value,
                       Provenance provenance) {
  impl_->put(stage, field, {{"value", number_json(value)}}, provenance);
}

void RunReport::exact(const std::string& stage, const std::string& field,
                      const Rational& value) {
  impl_->put(stage, field, {{"value", to_double(value)}, {"exact", to_string(value)}},
             Provenance::exact);
}

void RunReport::integer(const std::string& stage, const std::string& field,
                        std::int64_t value, Provenance provenance) {
  impl_->put(stage, field, {{"value", value}}, provenance);
}

void RunReport::flag(const std::string& stage, const std::string& field, bool value) {
  impl_->put(stage, field, value, std::nullopt);
}

void RunReport::text(const std::string& stage, const std::string& field,
                     const std::string& value) {
  impl_->put(stage, field, value, std::nullopt);
}

void RunReport::table(const std::string& stage, const std::string& field,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows, Provenance provenance) {
  Json rows_json = Json::array();
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw ArgumentError("table row width differs from the column count");
    Json r = Json::array();
    for (double v : row) r.push_back(number_json(v));
    rows_json.push_back(std::move(r));
  }
  impl_->put(stage, field, {{"columns", columns}, {"rows", std::move(rows_json)}}, provenance);
}

void RunReport::json(const std::string& stage, const std::string& field,
                     const std::string& json_text) {
  Json parsed;
  try {
    parsed = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("embedded JSON: ") + e.what());
  }
  impl_->put(stage, field, std::move(parsed), std::nullopt);
}

void RunReport::seconds(const std::string& stage, double elapsed) {
  impl_->timing[stage] = elapsed;
}

void RunReport::outcome(bool inputs_certified, bool holds, const std::string& reason) {
  auto& r = impl_->root;
  impl_->status = inputs_certified && holds ? "certified" : "not-certified";
  r["outcome"] = impl_->status;
  r["reason"] = reason;
  if (inputs_certified)
    r["verdict"] = {{"holds", holds}};
  else
    r.erase("verdict");
}

std::string RunReport::status() const { return impl_->status; }

std::string RunReport::to_json(bool include_timing) const {
  Json out = impl_->root;
  if (include_timing) out["timing"] = impl_->timing;
  return out.dump(2) + "\n";
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b"};

}  // namespace

void write_svg(std::ostream& os, const SvgPlot& plot) {
  const double left = 56, right = 16, top = 36, bottom = 44;
  const double w = plot.width - left - right, h = plot.height - top - bottom;
  auto X = [&](double p) { return fmt(left + std::clamp(p, 0.0, 1.0) * w); };
  auto y_of = [&](double t) { return top + (1.0 - std::clamp(t, 0.0, 1.0)) * h; };
  auto Y = [&](double t) { return fmt(y_of(t)); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\""
     << plot.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fmt(left) << "\" y=\"20\" font-size=\"13\">" << escape(plot.title)
     << "</text>\n";
  os << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(w)
     << "\" height=\"" << fmt(h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 10; i += 2) {
    const double v = i / 10.0;
    os << "<text x=\"" << X(v) << "\" y=\"" << fmt(top + h + 16)
       << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
    os << "<text x=\"" << fmt(left - 6) << "\" y=\"" << Y(v)
       << "\" text-anchor=\"end\" dominant-baseline=\"middle\">" << fmt(v) << "</text>\n";
  }
  os << "<text x=\"" << fmt(left + w / 2) << "\" y=\"" << fmt(plot.height - 6.0)
     << "\" text-anchor=\"middle\">p</text>\n";
  os << "<text x=\"14\" y=\"" << fmt(top + h / 2) << "\" transform=\"rotate(-90 14 "
     << fmt(top + h / 2) << ")\" text-anchor=\"middle\">theta</text>\n";

  std::size_t colour = 0;
  double legend_y = top + 14;
  for (const auto& c : plot.curves) {
    const char* col = kPalette[colour++ % std::size(kPalette)];
    if (c.band && !c.points.empty()) {
      os << "<polygon fill=\"" << col << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
      for (const auto& p : c.points) os << X(p.p) << ',' << Y(p.ci.hi) << ' ';
      for (auto it = c.points.rbegin(); it != c.points.rend(); ++it)
        os << X(it->p) << ',' << Y(it->ci.lo) << ' ';
      os << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : c.points) os << X(p.p) << ',' << Y(p.theta) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << fmt(left + 8) << "\" y=\"" << fmt(legend_y) << "\" fill=\"" << col
       << "\">" << escape(c.label) << "</text>\n";
    legend_y += 14;
  }
  for (const auto& r : plot.rules) {
    if (r.vertical) {
      os << "<line x1=\"" << X(r.value) << "\" y1=\"" << fmt(top) << "\" x2=\"" << X(r.value)
         << "\" y2=\"" << fmt(top + h) << "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";
      os << "<text x=\"" << X(r.value) << "\" y=\"" << fmt(top - 4)
         << "\" text-anchor=\"middle\" fill=\"#555\">" << escape(r.label) << "</text>\n";
    } else {
      os << "<line x1=\"" << fmt(left) << "\" y1=\"" << Y(r.value) << "\" x2=\""
         << fmt(left + w) << "\" y2=\"" << Y(r.value)
         << "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";
      os << "<text x=\"" << fmt(left + w - 4) << "\" y=\"" << fmt(y_of(r.value) - 4)
         << "\" text-anchor=\"end\" fill=\"#555\">" << escape(r.label) << "</text>\n";
    }
  }
  os << "</svg>\n";
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ArgumentError("cannot write " + tmp.string());
    f << contents;
    if (!f.flush()) throw ArgumentError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace percolab
