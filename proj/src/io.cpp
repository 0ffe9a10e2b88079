#include "chol/io.hpp"

#include <algorithm>

namespace chol::io {

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::MalformedInput, (where.empty() ? std::string("/") : where) + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) malformed(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) malformed(where, std::string("missing \"") + key + "\"");
  return *it;
}

int positive_int(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > 64) {
    malformed(where, "expected an integer in [1, 64]");
  }
  return j.get<int>();
}

cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  malformed(where, "expected a number or [re, im]");
}

}  // namespace

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedInput,
                "JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what(),
                {static_cast<int>(e.byte)});
  }
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

Point point_from_json(const json& j, const std::string& where) {
  const json& kind = field(j, "kind", where);
  if (!kind.is_string()) malformed(where + "/kind", "expected a string");
  const int rows = positive_int(field(j, "rows", where), where + "/rows");
  const int cols = positive_int(field(j, "cols", where), where + "/cols");
  const std::string k = kind.get<std::string>();
  std::optional<MatrixSpace> space;
  if (k == "gen") {
    space = MatrixSpace::gen(rows, cols);
  } else if (k == "sym" || k == "skew") {
    if (rows != cols) malformed(where, k + " matrices must be square");
    space = k == "sym" ? MatrixSpace::sym(rows) : MatrixSpace::skew(rows);
  } else {
    malformed(where + "/kind", "unknown matrix kind \"" + k + "\"");
  }
  const json& entries = field(j, "entries", where);
  if (!entries.is_array()) malformed(where + "/entries", "expected an array");
  if (static_cast<int>(entries.size()) != space->dim()) {
    malformed(where + "/entries", "expected " + std::to_string(space->dim()) +
                                      " free coordinates, got " + std::to_string(entries.size()));
  }
  CVector coords(space->dim());
  for (int s = 0; s < space->dim(); ++s) {
    coords[s] = complex_from_json(entries[s], where + "/entries/" + std::to_string(s));
  }
  return Point{*space, coords};
}

json point_to_json(const Point& p) {
  std::string kind = "gen";
  if (p.space.kind() == SpaceKind::Sym) kind = "sym";
  if (p.space.kind() == SpaceKind::Skew) kind = "skew";
  json entries = json::array();
  for (int s = 0; s < p.coords.size(); ++s) entries.push_back(complex_to_json(p.coords[s]));
  return {{"kind", kind}, {"rows", p.space.rows()}, {"cols", p.space.cols()}, {"entries", entries}};
}

json matrix_to_json(const CMatrix& a) {
  const MatrixSpace space = MatrixSpace::gen(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  return point_to_json(Point{space, space.encode(a)});
}

MatrixLoop loop_from_json(const json& j) {
  const json& kind = field(j, "kind", "");
  if (!kind.is_string()) malformed("/kind", "expected a string");
  Family family;
  try {
    family = parse_family(kind.get<std::string>());
  } catch (const Error&) {
    malformed("/kind", "unknown factorization kind \"" + kind.get<std::string>() + "\"");
  }
  const json& samples = field(j, "samples", "");
  if (!samples.is_array() || samples.size() < 2) malformed("/samples", "expected at least 2 samples");
  MatrixLoop loop{family, 0, {}};
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const std::string where = "/samples/" + std::to_string(s);
    Point p = point_from_json(samples[s], where);
    if (s == 0) {
      try {
        loop.m = size_parameter(family, p.space);
      } catch (const Error& e) {
        malformed(where, e.what());
      }
    } else if (!(p.space == loop.samples.front().space)) {
      malformed(where, "sample shape differs from the first sample");
    }
    loop.samples.push_back(std::move(p));
  }
  return loop;
}

json loop_to_json(const MatrixLoop& loop) {
  json samples = json::array();
  for (const Point& p : loop.samples) samples.push_back(point_to_json(p));
  return {{"kind", std::string(to_string(loop.kind))}, {"samples", samples}};
}

Filtration filtration_from_json(const json& j, const MatrixSpace& space) {
  if (!j.is_array() || j.empty()) malformed("", "expected a nonempty array of coordinate lists");
  const auto& names = space.variable_names();
  Filtration out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "/" + std::to_string(i);
    if (!j[i].is_array()) malformed(where, "expected an array of coordinate names");
    std::vector<int> step;
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      const json& name = j[i][k];
      auto it = name.is_string() ? std::find(names.begin(), names.end(), name.get<std::string>())
                                 : names.end();
      if (it == names.end()) {
        malformed(where + "/" + std::to_string(k), "unknown coordinate for " + space.name());
      }
      step.push_back(static_cast<int>(it - names.begin()));
    }
    std::sort(step.begin(), step.end());
    out.push_back(std::move(step));
  }
  return out;
}

json filtration_to_json(const Filtration& f, const MatrixSpace& space) {
  json out = json::array();
  for (const auto& step : f) {
    json names = json::array();
    for (int s : step) names.push_back(space.variable_names()[s]);
    out.push_back(names);
  }
  return out;
}

json polynomial_to_json(const Polynomial& p, const std::vector<std::string>& names) {
  json terms = json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    terms.push_back({{"coefficient", {it->second.re().get_str(), it->second.im().get_str()}},
                     {"exponents", it->first.exponents()}});
  }
  return {{"text", p.to_string(names)}, {"terms", terms}};
}

json factorization_to_json(const Factorization& f) {
  json minors = json::array();
  for (cplx v : f.minors) minors.push_back(complex_to_json(v));
  json out = {{"kind", std::string(to_string(f.kind))},
              {"B", matrix_to_json(f.B)},
              {"K", matrix_to_json(f.K)},
              {"residual", f.residual},
              {"conditioning", f.conditioning},
              {"minors", minors}};
  // null for the congruence kinds, where C = B^T.
  out["C"] = f.C ? matrix_to_json(*f.C) : json(nullptr);
  return out;
}

}  // namespace chol::io
