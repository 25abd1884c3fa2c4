#pragma once

#include <json.hpp>
#include <string>

#include "fglab/fgl.hpp"

namespace fglab::io {

using json = nlohmann::ordered_json;

json field_to_json(const FieldSpec& F);
const FieldSpec* field_from_json(const json& j);

json fq_to_json(const Fq& a);  // little-endian coordinate vector
Fq fq_from_json(const json& j, const FieldSpec* F);

/// {domain, N, coeffs} with coeffs listing degrees 1..N ("c0" added only
/// when a constant term is present).
json series_to_json(const TruncSeries<GfRing>& f);
TruncSeries<GfRing> series_from_json(const json& j);

json series_to_json(const TruncSeries<RatRing>& f);
TruncSeries<RatRing> rat_series_from_json(const json& j);

/// {domain, N, coeffs: [[i, j, elem], ...]} with entries sorted by (i+j, i);
/// only nonzero entries are stored.
json biv_to_json(const BivSeries<GfRing>& B);
BivSeries<GfRing> biv_from_json(const json& j);

json biv_to_json(const BivSeries<RatRing>& B);
BivSeries<RatRing> rat_biv_from_json(const json& j);

/// Group-law file: {field, N, G, meta}.
json law_to_json(const fgl::FormalGroupLaw& L, json meta);
fgl::FormalGroupLaw law_from_json(const json& j, fgl::ValidationOptions opts = {});
/// Reads the raw coefficient table without validating (for verify-law).
BivSeries<GfRing> law_table_from_json(const json& j);

uint64_t fnv1a(std::string_view s);
std::string fnv1a_hex(std::string_view s);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace fglab::io
