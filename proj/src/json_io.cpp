#include "fglab/json_io.hpp"

#include <fstream>
#include <sstream>

namespace fglab::io {

json field_to_json(const FieldSpec& F) {
  json j;
  j["p"] = F.p();
  j["n"] = F.n();
  j["modulus"] = json::array();
  for (auto c : F.modulus()) j["modulus"].push_back(static_cast<int>(c));
  return j;
}

const FieldSpec* field_from_json(const json& j) {
  int p = j.at("p").get<int>();
  int n = j.at("n").get<int>();
  return FieldSpec::get(p, n, j.at("modulus").get<std::vector<int>>());
}

json fq_to_json(const Fq& a) {
  json j = json::array();
  for (int v : a.coords()) j.push_back(v);
  return j;
}

Fq fq_from_json(const json& j, const FieldSpec* F) {
  return F->element(j.get<std::vector<int>>());
}

json series_to_json(const TruncSeries<GfRing>& f) {
  json j;
  j["domain"] = {{"kind", "gf"}};
  j["domain"].update(field_to_json(*f.ring().F));
  j["N"] = f.prec();
  if (!f.ring().is_zero(f.coeff_or_zero(0))) j["c0"] = fq_to_json(f[0]);
  json coeffs = json::array();
  for (int d = 1; d <= f.prec(); ++d) coeffs.push_back(fq_to_json(f[d]));
  j["coeffs"] = std::move(coeffs);
  return j;
}

TruncSeries<GfRing> series_from_json(const json& j) {
  const FieldSpec* F = field_from_json(j.at("domain"));
  int N = j.at("N").get<int>();
  GfRing ring(F);
  TruncSeries<GfRing> f(ring, N);
  if (j.contains("c0")) f.set(0, fq_from_json(j.at("c0"), F));
  const json& coeffs = j.at("coeffs");
  for (int d = 1; d <= N && d <= static_cast<int>(coeffs.size()); ++d)
    f.set(d, fq_from_json(coeffs[static_cast<size_t>(d - 1)], F));
  return f;
}

json series_to_json(const TruncSeries<RatRing>& f) {
  json j;
  j["domain"] = {{"kind", "rat"}};
  j["N"] = f.prec();
  if (sgn(f.coeff_or_zero(0)) != 0) j["c0"] = f[0].get_str();
  json coeffs = json::array();
  for (int d = 1; d <= f.prec(); ++d) coeffs.push_back(f[d].get_str());
  j["coeffs"] = std::move(coeffs);
  return j;
}

TruncSeries<RatRing> rat_series_from_json(const json& j) {
  RatRing Q;
  int N = j.at("N").get<int>();
  TruncSeries<RatRing> f(Q, N);
  if (j.contains("c0")) {
    mpq_class c(j.at("c0").get<std::string>());
    c.canonicalize();
    f.set(0, c);
  }
  const json& coeffs = j.at("coeffs");
  for (int d = 1; d <= N && d <= static_cast<int>(coeffs.size()); ++d) {
    mpq_class c(coeffs[static_cast<size_t>(d - 1)].get<std::string>());
    c.canonicalize();
    f.set(d, c);
  }
  return f;
}

json biv_to_json(const BivSeries<GfRing>& B) {
  json j;
  j["domain"] = {{"kind", "gf"}};
  j["domain"].update(field_to_json(*B.ring().F));
  j["N"] = B.prec();
  json coeffs = json::array();
  for (int d = 0; d <= B.prec(); ++d)
    for (int i = 0; i <= d; ++i) {
      const Fq& c = B.get(i, d - i);
      if (c.is_zero()) continue;
      coeffs.push_back(json::array({i, d - i, fq_to_json(c)}));
    }
  j["coeffs"] = std::move(coeffs);
  return j;
}

BivSeries<GfRing> biv_from_json(const json& j) {
  const FieldSpec* F = field_from_json(j.at("domain"));
  GfRing ring(F);
  BivSeries<GfRing> B(ring, j.at("N").get<int>());
  for (const auto& e : j.at("coeffs"))
    B.set(e[0].get<int>(), e[1].get<int>(), fq_from_json(e[2], F));
  return B;
}

json biv_to_json(const BivSeries<RatRing>& B) {
  json j;
  j["domain"] = {{"kind", "rat"}};
  j["N"] = B.prec();
  json coeffs = json::array();
  for (int d = 0; d <= B.prec(); ++d)
    for (int i = 0; i <= d; ++i) {
      const mpq_class& c = B.get(i, d - i);
      if (sgn(c) == 0) continue;
      coeffs.push_back(json::array({i, d - i, c.get_str()}));
    }
  j["coeffs"] = std::move(coeffs);
  return j;
}

BivSeries<RatRing> rat_biv_from_json(const json& j) {
  RatRing Q;
  BivSeries<RatRing> B(Q, j.at("N").get<int>());
  for (const auto& e : j.at("coeffs")) {
    mpq_class c(e[2].get<std::string>());
    c.canonicalize();
    B.set(e[0].get<int>(), e[1].get<int>(), c);
  }
  return B;
}

json law_to_json(const fgl::FormalGroupLaw& L, json meta) {
  json j;
  j["field"] = field_to_json(*L.ring().F);
  j["N"] = L.prec();
  j["G"] = biv_to_json(L.table()).at("coeffs");
  j["meta"] = std::move(meta);
  return j;
}

BivSeries<GfRing> law_table_from_json(const json& j) {
  const FieldSpec* F = field_from_json(j.at("field"));
  GfRing ring(F);
  BivSeries<GfRing> B(ring, j.at("N").get<int>());
  for (const auto& e : j.at("G"))
    B.set(e[0].get<int>(), e[1].get<int>(), fq_from_json(e[2], F));
  return B;
}

fgl::FormalGroupLaw law_from_json(const json& j, fgl::ValidationOptions opts) {
  return fgl::FormalGroupLaw::validate(law_table_from_json(j), opts);
}

uint64_t fnv1a(std::string_view s) {
  uint64_t hash = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 0x100000001B3ull;
  }
  return hash;
}

std::string fnv1a_hex(std::string_view s) {
  std::ostringstream os;
  os << std::hex << fnv1a(s);
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace fglab::io
