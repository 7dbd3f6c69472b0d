#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rcg/charts.hpp"
#include "rcg/errors.hpp"
#include "rcg/manifold.hpp"
#include "rcg/radial.hpp"

namespace rcg {

// Text grammar shared by the CLI and JSON configs:
//   law    kind:key=value,...      e.g.  truncnormal:mu=1.0,sigma=0.35
//   chart  kind[:alpha=value]      e.g.  exp | lambert | bexp:alpha=0.5 | gcl
// Parse errors are syntactic; range checks live in the constructors.

struct ParsedLaw {
  LawKind kind = LawKind::TruncNormal;
  std::vector<double> params;
  bool operator==(const ParsedLaw&) const = default;
};

struct ParsedChart {
  ChartKind kind = ChartKind::Exp;
  double alpha = 0.0;
  bool operator==(const ParsedChart&) const = default;
};

namespace detail {

inline std::vector<std::string> law_param_names(LawKind k) {
  switch (k) {
    case LawKind::TruncNormal: return {"mu", "sigma"};
    case LawKind::HalfNormal: return {"sigma"};
    case LawKind::Gamma: return {"k", "beta"};
    case LawKind::Weibull: return {"k", "lambda"};
    case LawKind::LogNormal: return {"mu", "sigma"};
    case LawKind::HalfCauchy: return {"s"};
  }
  throw ParseError("unknown law kind");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline double parse_number(const std::string& tok, const std::string& context) {
  if (tok.empty()) throw ParseError(context + ": empty number");
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size())
    throw ParseError(context + ": bad number '" + tok + "'");
  return v;
}

// key=value pairs, every expected key exactly once, nothing extra.
inline std::vector<double> parse_kv(const std::string& args,
                                    const std::vector<std::string>& names,
                                    const std::string& context) {
  std::vector<double> vals(names.size());
  std::vector<bool> seen(names.size(), false);
  for (const std::string& pair : split(args, ',')) {
    std::size_t eq = pair.find('=');
    if (eq == std::string::npos)
      throw ParseError(context + ": expected key=value, got '" + pair + "'");
    std::string key = pair.substr(0, eq);
    bool matched = false;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (key != names[i]) continue;
      if (seen[i]) throw ParseError(context + ": duplicate key '" + key + "'");
      vals[i] = parse_number(pair.substr(eq + 1), context);
      seen[i] = true;
      matched = true;
      break;
    }
    if (!matched) throw ParseError(context + ": unknown key '" + key + "'");
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!seen[i]) throw ParseError(context + ": missing key '" + names[i] + "'");
  return vals;
}

// Shortest decimal that round-trips the double.
inline std::string fmt_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

}  // namespace detail

inline ParsedLaw parse_law(const std::string& text) {
  std::size_t colon = text.find(':');
  std::string name = text.substr(0, colon);
  ParsedLaw out;
  bool known = false;
  for (LawKind k : {LawKind::TruncNormal, LawKind::HalfNormal, LawKind::Gamma,
                    LawKind::Weibull, LawKind::LogNormal, LawKind::HalfCauchy})
    if (name == law_kind_name(k)) {
      out.kind = k;
      known = true;
      break;
    }
  if (!known) throw ParseError("law: unknown kind '" + name + "'");
  auto names = detail::law_param_names(out.kind);
  if (colon == std::string::npos)
    throw ParseError("law: missing parameters for '" + name + "'");
  out.params = detail::parse_kv(text.substr(colon + 1), names, "law");
  return out;
}

inline std::string render_law(const ParsedLaw& law) {
  std::string out = law_kind_name(law.kind);
  auto names = detail::law_param_names(law.kind);
  for (std::size_t i = 0; i < names.size(); ++i)
    out += (i == 0 ? ":" : ",") + names[i] + "=" + detail::fmt_double(law.params[i]);
  return out;
}

inline ParsedChart parse_chart(const std::string& text) {
  std::size_t colon = text.find(':');
  std::string name = text.substr(0, colon);
  ParsedChart out;
  if (name == "exp") out.kind = ChartKind::Exp;
  else if (name == "lambert") out.kind = ChartKind::Lambert;
  else if (name == "bexp") out.kind = ChartKind::BExp;
  else if (name == "gcl") out.kind = ChartKind::Gcl;
  else throw ParseError("chart: unknown kind '" + name + "'");

  if (out.kind == ChartKind::BExp) {
    if (colon == std::string::npos) throw ParseError("chart: bexp needs alpha=...");
    out.alpha = detail::parse_kv(text.substr(colon + 1), {"alpha"}, "chart")[0];
  } else if (colon != std::string::npos) {
    throw ParseError("chart: '" + name + "' takes no parameters");
  }
  return out;
}

inline std::string render_chart(const ParsedChart& chart) {
  if (chart.kind == ChartKind::BExp)
    return std::string("bexp:alpha=") + detail::fmt_double(chart.alpha);
  return chart_kind_name(chart.kind);
}

inline ManifoldKind parse_manifold_kind(const std::string& name) {
  if (name == "sphere") return ManifoldKind::Sphere;
  if (name == "hyperbolic") return ManifoldKind::Hyperbolic;
  throw ParseError("manifold: unknown kind '" + name + "'");
}

inline BaseConvention parse_convention(const std::string& name) {
  if (name == "paper") return BaseConvention::Verbatim;
  if (name == "equal-area") return BaseConvention::EqualArea;
  throw ParseError("base-convention: expected 'paper' or 'equal-area', got '" + name + "'");
}

// ---------------------------------------------------------------------------
// Run configuration (JSON file <-> CLI flags; explicit flags win).
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string manifold = "sphere";
  int dim = 2;
  double R_c = 1.0;
  std::string law = "truncnormal:mu=1.0,sigma=0.35";
  std::string chart = "exp";
  std::string base_convention = "paper";
  std::uint64_t seed = 2024;
  std::uint64_t n = 1000;
  bool operator==(const RunConfig&) const = default;
};

inline nlohmann::ordered_json render_config(const RunConfig& c) {
  return nlohmann::ordered_json{
      {"manifold", c.manifold}, {"dim", c.dim},
      {"R_c", c.R_c},           {"law", c.law},
      {"chart", c.chart},       {"base_convention", c.base_convention},
      {"seed", c.seed},         {"n", c.n}};
}

inline RunConfig parse_config(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "manifold") c.manifold = value.get<std::string>();
      else if (key == "dim") c.dim = value.get<int>();
      else if (key == "R_c") c.R_c = value.get<double>();
      else if (key == "law") c.law = value.get<std::string>();
      else if (key == "chart") c.chart = value.get<std::string>();
      else if (key == "base_convention") c.base_convention = value.get<std::string>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "n") c.n = value.get<std::uint64_t>();
      else throw ParseError("config: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception&) {
      throw ParseError("config: bad value for key '" + key + "'");
    }
  }
  parse_manifold_kind(c.manifold);
  parse_law(c.law);
  parse_chart(c.chart);
  parse_convention(c.base_convention);
  return c;
}

inline RunConfig parse_config_text(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace rcg
