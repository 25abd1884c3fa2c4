#include "fglab/report.hpp"

#include <iostream>

namespace fglab::lab {

json ExperimentConfig::echo() const {
  json j;
  j["experiment"] = experiment;
  j["p"] = p;
  j["h"] = h;
  j["field_deg"] = field_deg;
  j["prec"] = prec;
  j["seed"] = seed;
  j["format"] = format;
  j["policy"] = policy;
  return j;
}

json Report::to_json() const {
  json j;
  j["config"] = config_;
  json rows = json::array();
  for (const auto& c : checks_) {
    json r;
    r["name"] = c.name;
    r["anchor"] = c.anchor;
    r["inputs_digest"] = c.inputs_digest;
    r["measured"] = c.measured;
    r["expected"] = c.expected;
    r["pass"] = c.pass;
    rows.push_back(std::move(r));
  }
  j["checks"] = std::move(rows);
  j["all_pass"] = all_pass();
  j["timing"] = nullptr;  // wall-clock goes to stderr; reports stay reproducible
  return j;
}

namespace {
std::string csv_escape(const std::string& s) {
  bool needs = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}
}  // namespace

std::string Report::to_csv() const {
  std::string out = "name,anchor,inputs_digest,measured,expected,pass\n";
  for (const auto& c : checks_) {
    out += csv_escape(c.name) + "," + csv_escape(c.anchor) + "," + csv_escape(c.inputs_digest) +
           "," + csv_escape(c.measured) + "," + csv_escape(c.expected) + "," +
           (c.pass ? "true" : "false") + "\n";
  }
  return out;
}

void Report::emit(const ExperimentConfig& cfg) const {
  std::string payload =
      cfg.format == "csv" ? to_csv() : to_json().dump(2) + "\n";
  if (cfg.out.empty())
    std::cout << payload;
  else
    io::write_file(cfg.out, payload);
}

}  // namespace fglab::lab
