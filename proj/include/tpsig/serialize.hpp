#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "tpsig/bounds.hpp"
#include "tpsig/error.hpp"
#include "tpsig/format.hpp"
#include "tpsig/signal.hpp"

namespace tpsig {

namespace detail_ser {

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

inline std::string u32_array_json(const std::vector<std::uint32_t>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(std::string("missing key: ") + key);
  return *it;
}

inline std::uint32_t as_u32(const nlohmann::json& v, const char* what,
                            std::uint64_t min_value) {
  if (!v.is_number_integer())
    throw SchemaError(std::string(what) + " must be an integer");
  const std::int64_t x = v.get<std::int64_t>();
  if (x < static_cast<std::int64_t>(min_value) || x > 0x7fffffff)
    throw SchemaError(std::string(what) + " out of range");
  return static_cast<std::uint32_t>(x);
}

inline std::vector<std::uint32_t> as_u32_array(const nlohmann::json& v,
                                               const char* what) {
  if (!v.is_array())
    throw SchemaError(std::string(what) + " must be an array of integers");
  std::vector<std::uint32_t> out;
  out.reserve(v.size());
  for (const auto& cell : v) out.push_back(as_u32(cell, what, 0));
  return out;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  return out + "\"";
}

}  // namespace detail_ser

// Schema: {"n": int, "M": int, "signals": [[[re,im],...],...],
//          "meta": {"construction": string, "field": {...}|null, "e": int|null}}.
// Reals carry 17 significant digits so a write/read cycle is bit-exact.
inline std::string set_to_json(const SignalSet& set) {
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(set.n) + ",\n";
  out += "  \"M\": " + std::to_string(set.M()) + ",\n";
  out += "  \"signals\": [\n";
  for (std::uint32_t j = 0; j < set.M(); ++j) {
    out += "    [";
    for (std::uint32_t t = 0; t < set.n; ++t) {
      if (t) out += ",";
      out += "[" + fmt17(set.signals[j][t].real()) + "," +
             fmt17(set.signals[j][t].imag()) + "]";
    }
    out += (j + 1 < set.M()) ? "],\n" : "]\n";
  }
  out += "  ],\n";
  out += "  \"meta\": {\"construction\": \"" +
         detail_ser::json_escape(set.meta.construction) + "\", \"field\": ";
  if (set.meta.field) {
    const FieldMeta& f = *set.meta.field;
    out += "{\"p\": " + std::to_string(f.p) + ", \"m\": " + std::to_string(f.m) +
           ", \"modulus\": " + detail_ser::u32_array_json(f.modulus) +
           ", \"gamma\": " + detail_ser::u32_array_json(f.gamma) + "}";
  } else {
    out += "null";
  }
  out += ", \"e\": ";
  out += set.meta.e ? std::to_string(*set.meta.e) : std::string("null");
  out += "}\n}\n";
  return out;
}

inline SignalSet set_from_json(const std::string& text) {
  using nlohmann::json;
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("malformed JSON");
  if (!doc.is_object()) throw SchemaError("top level must be a JSON object");

  SignalSet set;
  set.n = detail_ser::as_u32(detail_ser::require(doc, "n"), "n", 2);
  const std::uint32_t M =
      detail_ser::as_u32(detail_ser::require(doc, "M"), "M", 1);
  const json& sig = detail_ser::require(doc, "signals");
  if (!sig.is_array()) throw SchemaError("signals must be an array");
  if (sig.size() != M)
    throw SchemaError("M does not match the number of signals");
  for (const auto& row : sig) {
    if (!row.is_array() || row.size() != set.n)
      throw SchemaError("each signal must list exactly n samples");
    Signal s;
    s.reserve(set.n);
    for (const auto& cell : row) {
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
          !cell[1].is_number())
        throw SchemaError("each sample must be a [re, im] pair of numbers");
      const double re = cell[0].get<double>();
      const double im = cell[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im))
        throw SchemaError("samples must be finite");
      s.push_back({re, im});
    }
    set.signals.push_back(std::move(s));
  }

  if (doc.contains("meta") && !doc["meta"].is_null()) {
    const json& meta = doc["meta"];
    if (!meta.is_object()) throw SchemaError("meta must be an object or null");
    if (meta.contains("construction")) {
      if (!meta["construction"].is_string())
        throw SchemaError("meta.construction must be a string");
      set.meta.construction = meta["construction"].get<std::string>();
    }
    if (meta.contains("field") && !meta["field"].is_null()) {
      const json& f = meta["field"];
      if (!f.is_object())
        throw SchemaError("meta.field must be an object or null");
      FieldMeta fm;
      fm.p = detail_ser::as_u32(detail_ser::require(f, "p"), "meta.field.p", 2);
      fm.m = detail_ser::as_u32(detail_ser::require(f, "m"), "meta.field.m", 1);
      fm.modulus =
          detail_ser::as_u32_array(detail_ser::require(f, "modulus"),
                                   "meta.field.modulus");
      fm.gamma = detail_ser::as_u32_array(detail_ser::require(f, "gamma"),
                                          "meta.field.gamma");
      set.meta.field = std::move(fm);
    }
    if (meta.contains("e") && !meta["e"].is_null())
      set.meta.e = detail_ser::as_u32(meta["e"], "meta.e", 1);
  }
  return set;
}

inline std::string profile_to_json(const CorrelationProfile& p) {
  std::string out = "{\n";
  out += "  \"nu\": " + fmt17(p.nu) + ",\n";
  out += "  \"theta\": " + fmt17(p.theta) + ",\n";
  out += "  \"lambda\": " + fmt17(p.lambda) + ",\n";
  out += "  \"papr_max\": " + fmt17(p.papr_max) + ",\n";
  if (p.nu_witness)
    out += "  \"nu_witness\": [" + std::to_string(p.nu_witness->j) + "," +
           std::to_string(p.nu_witness->j2) + "],\n";
  else
    out += "  \"nu_witness\": null,\n";
  out += "  \"theta_witness\": [" + std::to_string(p.theta_witness.j) + "," +
         std::to_string(p.theta_witness.j2) + "," +
         std::to_string(p.theta_witness.tau) + "],\n";
  out += "  \"lambda_witness\": [" + std::to_string(p.lambda_witness.j) + "," +
         std::to_string(p.lambda_witness.j2) + "," +
         std::to_string(p.lambda_witness.w) + "," +
         std::to_string(p.lambda_witness.tau) + "]\n";
  return out + "}\n";
}

inline std::string profile_to_table(const CorrelationProfile& p) {
  std::string out = "measure   value          witness\n";
  auto line = [&](const char* name, double v, const std::string& wit) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-8s  %13.9f  %s\n", name, v, wit.c_str());
    out += buf;
  };
  line("nu", p.nu,
       p.nu_witness ? "(j=" + std::to_string(p.nu_witness->j) +
                          ", j2=" + std::to_string(p.nu_witness->j2) + ")"
                    : std::string("-"));
  line("theta", p.theta,
       "(j=" + std::to_string(p.theta_witness.j) +
           ", j2=" + std::to_string(p.theta_witness.j2) +
           ", tau=" + std::to_string(p.theta_witness.tau) + ")");
  line("lambda", p.lambda,
       "(j=" + std::to_string(p.lambda_witness.j) +
           ", j2=" + std::to_string(p.lambda_witness.j2) +
           ", w=" + std::to_string(p.lambda_witness.w) +
           ", tau=" + std::to_string(p.lambda_witness.tau) + ")");
  line("papr", p.papr_max, "-");
  return out;
}

inline std::string report_to_json(const BoundReport& r) {
  std::string out = "{\n  \"entries\": [\n";
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    const BoundEntry& e = r.entries[i];
    out += "    {\"bound_name\": \"" + detail_ser::json_escape(e.name) +
           "\", \"kind\": \"" + bound_kind_name(e.kind) +
           "\", \"value\": " + fmt17(e.value) +
           ", \"applicable\": " + (e.applicable ? "true" : "false") +
           ", \"note\": \"" + detail_ser::json_escape(e.note) + "\"}";
    out += (i + 1 < r.entries.size()) ? ",\n" : "\n";
  }
  out += "  ],\n  \"verdict\": ";
  if (r.verdict) {
    out += "{\"kind\": \"" + verdict_to_string(*r.verdict) +
           "\", \"delta\": " + fmt17(r.verdict->delta) +
           ", \"certificate\": \"" +
           detail_ser::json_escape(r.verdict->certificate) + "\"}";
  } else {
    out += "null";
  }
  return out + "\n}\n";
}

inline std::string report_to_table(const BoundReport& r) {
  std::size_t name_w = 10;
  for (const BoundEntry& e : r.entries) name_w = std::max(name_w, e.name.size());
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%-*s  %-16s  %-13s  %-10s  %s\n",
                int(name_w), "bound_name", "kind", "value", "applicable",
                "note");
  out += buf;
  for (const BoundEntry& e : r.entries) {
    std::snprintf(buf, sizeof(buf), "%-*s  %-16s  %13.9f  %-10s  %s\n",
                  int(name_w), e.name.c_str(), bound_kind_name(e.kind),
                  e.value, e.applicable ? "yes" : "no", e.note.c_str());
    out += buf;
  }
  if (r.verdict)
    out += "verdict: " + verdict_to_string(*r.verdict) + " -- " +
           r.verdict->certificate + "\n";
  return out;
}

inline std::string report_to_csv(const BoundReport& r) {
  std::string out = "bound_name,kind,value,applicable,note\n";
  for (const BoundEntry& e : r.entries) {
    out += detail_ser::csv_field(e.name) + "," + bound_kind_name(e.kind) + "," +
           fmt17(e.value) + "," + (e.applicable ? "true" : "false") + "," +
           detail_ser::csv_field(e.note) + "\n";
  }
  return out;
}

}  // namespace tpsig
