#pragma once

#include <json.hpp>

#include <sstream>
#include <string>

#include "x0models/arith.hpp"
#include "x0models/divisors.hpp"
#include "x0models/fiber.hpp"
#include "x0models/selfint.hpp"

namespace x0models {

// Exact values are serialized as decimal strings ("num" or "num/den"),
// never as floats. Floats appear only in fields whose name says so.

inline nlohmann::json invariants_to_json(std::uint64_t N, const FactoredLevel& level,
                                         const Invariants& inv) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : level.blocks)
    blocks.push_back({{"p", b.p}, {"n", b.n}, {"M", b.M}});
  return {
      {"N", N},
      {"blocks", blocks},
      {"coprime_to_6", level.coprime_to_6},
      {"excluded", level.excluded},
      {"d", inv.d.str()},
      {"eps2", inv.eps2.str()},
      {"eps3", inv.eps3.str()},
      {"epsinf", inv.epsinf.str()},
      {"g", inv.g.str()},
  };
}

inline nlohmann::json component_kind_to_json(const ComponentKind& kind) {
  nlohmann::json j;
  switch (kind.family) {
    case ComponentFamily::igusa:
      j["family"] = "C";
      break;
    case ComponentFamily::e:
      j["family"] = "E";
      break;
    case ComponentFamily::f:
      j["family"] = "F";
      break;
  }
  if (kind.index == index_infinity)
    j["index"] = "inf";
  else
    j["index"] = kind.index;
  j["copy"] = kind.copy;
  return j;
}

inline ComponentKind component_kind_from_json(const nlohmann::json& j) {
  ComponentKind kind;
  const std::string fam = j.at("family").get<std::string>();
  if (fam == "C")
    kind.family = ComponentFamily::igusa;
  else if (fam == "E")
    kind.family = ComponentFamily::e;
  else if (fam == "F")
    kind.family = ComponentFamily::f;
  else
    throw invalid_input("unknown component family: " + fam);
  if (j.at("index").is_string()) {
    if (j.at("index").get<std::string>() != "inf")
      throw invalid_input("unknown component index");
    kind.index = index_infinity;
  } else {
    kind.index = j.at("index").get<int>();
  }
  kind.copy = j.at("copy").get<int>();
  return kind;
}

inline nlohmann::json fiber_to_json(const FiberModel& fib) {
  nlohmann::json comps = nlohmann::json::array();
  for (std::size_t i = 0; i < fib.components.size(); ++i) {
    nlohmann::json c = component_kind_to_json(fib.components[i].kind);
    c["label"] = component_label(fib.components[i].kind);
    c["multiplicity"] = fib.components[i].multiplicity.str();
    c["genus"] = fib.components[i].genus.str();
    c["self_intersection"] = numerator(fib.matrix.at(i, i)).str();
    comps.push_back(std::move(c));
  }
  nlohmann::json matrix = nlohmann::json::array();
  for (std::size_t i = 0; i < fib.matrix.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < fib.matrix.dim(); ++j)
      row.push_back(rational_to_string(fib.matrix.at(i, j)));
    matrix.push_back(std::move(row));
  }
  return {
      {"p", fib.p},
      {"n", fib.n},
      {"M", fib.M},
      {"N", fib.level()},
      {"model", fib.model == ModelTag::edixhoven ? "edixhoven" : "minimal"},
      {"components", comps},
      {"matrix", matrix},
  };
}

inline FiberModel fiber_from_json(const nlohmann::json& j) {
  FiberModel fib;
  fib.p = j.at("p").get<std::uint64_t>();
  fib.n = j.at("n").get<int>();
  fib.M = j.at("M").get<std::uint64_t>();
  const std::string model = j.at("model").get<std::string>();
  if (model == "edixhoven")
    fib.model = ModelTag::edixhoven;
  else if (model == "minimal")
    fib.model = ModelTag::minimal;
  else
    throw invalid_input("unknown model tag: " + model);
  for (const auto& c : j.at("components")) {
    FiberComponent comp;
    comp.kind = component_kind_from_json(c);
    comp.multiplicity = Integer(c.at("multiplicity").get<std::string>());
    comp.genus = Integer(c.at("genus").get<std::string>());
    fib.components.push_back(std::move(comp));
  }
  const auto& matrix = j.at("matrix");
  fib.matrix = RationalMatrix(fib.components.size());
  if (matrix.size() != fib.components.size())
    throw invalid_input("matrix dimension disagrees with component count");
  for (std::size_t i = 0; i < fib.matrix.dim(); ++i)
    for (std::size_t j2 = 0; j2 < fib.matrix.dim(); ++j2)
      fib.matrix.at(i, j2) =
          rational_from_string(matrix.at(i).at(j2).get<std::string>());
  return fib;
}

inline nlohmann::json vertical_divisor_to_json(const VerticalDivisor& v,
                                               const FiberModel& fib) {
  nlohmann::json coeffs = nlohmann::json::array();
  nlohmann::json labels = nlohmann::json::array();
  for (std::size_t i = 0; i < v.coefficients.dim(); ++i) {
    coeffs.push_back(rational_to_string(v.coefficients[i]));
    labels.push_back(component_label(fib.components[i].kind));
  }
  return {{"p", v.p}, {"labels", labels}, {"coefficients", coeffs}};
}

inline VerticalDivisor vertical_divisor_from_json(const nlohmann::json& j) {
  VerticalDivisor v;
  v.p = j.at("p").get<std::uint64_t>();
  std::vector<Rational> coeffs;
  for (const auto& c : j.at("coefficients"))
    coeffs.push_back(rational_from_string(c.get<std::string>()));
  v.coefficients = RationalVector(std::move(coeffs));
  return v;
}

/// One JSON line of a sweep: exact coefficients plus the float summary.
inline nlohmann::json finite_part_to_json(const FinitePartResult& r) {
  nlohmann::json primes = nlohmann::json::array();
  for (const auto& term : r.primes)
    primes.push_back({{"p", term.p},
                      {"n", term.n},
                      {"M", term.M},
                      {"coeff", rational_to_string(term.coeff)}});
  return {
      {"N", r.N},
      {"g", r.g.str()},
      {"primes", primes},
      {"b_float", r.value_float},
      {"ratio", r.ratio_to_g_logN},
  };
}

/// CSV of the intersection matrix: header row of component labels in
/// canonical order, one labelled row per component.
inline std::string fiber_to_csv(const FiberModel& fib) {
  std::ostringstream out;
  for (const auto& c : fib.components) out << "," << component_label(c.kind);
  out << "\n";
  for (std::size_t i = 0; i < fib.matrix.dim(); ++i) {
    out << component_label(fib.components[i].kind);
    for (std::size_t j = 0; j < fib.matrix.dim(); ++j)
      out << "," << rational_to_string(fib.matrix.at(i, j));
    out << "\n";
  }
  return out.str();
}

inline std::string fiber_to_text(const FiberModel& fib) {
  std::ostringstream out;
  out << "fibre of X0(" << fib.level() << ") over p=" << fib.p << " (p^n*M = " << fib.p
      << "^" << fib.n << " * " << fib.M << ", model "
      << (fib.model == ModelTag::edixhoven ? "edixhoven" : "minimal") << ")\n";
  out << "components (label multiplicity genus self-intersection):\n";
  for (std::size_t i = 0; i < fib.components.size(); ++i) {
    const auto& c = fib.components[i];
    out << "  " << component_label(c.kind) << "  m=" << c.multiplicity.str()
        << "  g=" << c.genus.str() << "  self=" << numerator(fib.matrix.at(i, i)).str()
        << "\n";
  }
  out << "intersection matrix:\n";
  for (std::size_t i = 0; i < fib.matrix.dim(); ++i) {
    out << " ";
    for (std::size_t j = 0; j < fib.matrix.dim(); ++j)
      out << " " << rational_to_string(fib.matrix.at(i, j));
    out << "\n";
  }
  return out.str();
}

}  // namespace x0models
