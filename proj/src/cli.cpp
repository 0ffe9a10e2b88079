#include "chol/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "chol/blockrep.hpp"
#include "chol/factor.hpp"
#include "chol/family.hpp"
#include "chol/invariants.hpp"
#include "chol/io.hpp"

namespace chol::cli {

using io::json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotInOpenOrbit:
    case ErrorKind::PathHitsVariety:
    case ErrorKind::NotInvariant:
    case ErrorKind::NotBlockTriangular:
    case ErrorKind::SamplingTooCoarse:
      return kNegative;
    case ErrorKind::IncompatibleGroup:
    case ErrorKind::MalformedInput:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::InvalidArgument:
      return kMalformed;
    case ErrorKind::CapacityExceeded:
    case ErrorKind::DivisionByZero:
    case ErrorKind::ResidualNotConstant:
    case ErrorKind::ResidualTooLarge:
    case ErrorKind::InvarianceViolated:
    case ErrorKind::NotConstant:
    case ErrorKind::SingularLambda:
    case ErrorKind::RelationViolated:
    case ErrorKind::ClosureFailed:
      return kInternal;
  }
  return kInternal;
}

namespace {

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  double tol = kMinorTolerance;
};

std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::MalformedInput, "cannot read " + path);
    buf << in.rdbuf();
  }
  return buf.str();
}

void emit(const json& doc, const std::string& out_path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write " + out_path);
  file << text;
}

json error_json(const Error& e) {
  json j = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  if (!e.indices().empty()) j["indices"] = e.indices();
  if (const auto* orbit = dynamic_cast<const NotInOpenOrbit*>(&e)) {
    j["minor"] = std::string(to_string(orbit->family()));
    j["k"] = orbit->index();
    j["magnitude"] = orbit->magnitude();
  }
  return j;
}

std::string matrix_text(const Eigen::MatrixXi& a) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    s += i ? ",[" : "[";
    for (Eigen::Index j = 0; j < a.cols(); ++j) s += (j ? "," : "") + std::to_string(a(i, j));
    s += "]";
  }
  return s + "]";
}

json cplx_matrix_json(const CMatrix& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(io::complex_to_json(a(i, j)));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Verbs

int cmd_factor(const Globals& g, const std::string& kind, const std::string& in,
               const std::string& out_path, std::ostream& out) {
  const Family family = parse_family(kind);
  const Point a = io::point_from_json(io::parse(read_input(in)));
  FactorOptions opts;
  opts.minor_tol = g.tol;
  const Factorization f = factor(a, family, opts);
  json doc = io::factorization_to_json(f);
  doc["input"] = io::point_to_json(a);
  emit(doc, out_path, out);
  return kOk;
}

int cmd_analyze(const Globals& g, const std::string& rep_name, int m,
                const std::string& filtration_path, const std::string& out_path,
                std::ostream& out) {
  const Representation rep = build_representation(parse_family(rep_name), m);
  const auto& names = rep.space.variable_names();
  const ExceptionalFactored ex = exceptional_equation(rep);

  json factors = json::array();
  for (std::size_t i = 0; i < ex.factors.size(); ++i) {
    json f = io::polynomial_to_json(ex.factors[i].poly, names);
    f["label"] = ex.labels[i];
    f["multiplicity"] = ex.factors[i].multiplicity;
    factors.push_back(f);
  }
  json doc = {{"seed", g.seed},
              {"rep", std::string(to_string(rep.family))},
              {"m", m},
              {"space", rep.space.name()},
              {"coordinates", names},
              {"determinant", io::polynomial_to_json(ex.determinant, names)},
              {"constant", ex.constant.to_string()},
              {"factors", factors},
              {"equation", factored_string(ex.factors, names)},
              {"verdict", std::string(to_string(ex.verdict))}};

  const Filtration filtration =
      filtration_path.empty()
          ? shipped_filtration(rep)
          : io::filtration_from_json(io::parse(read_input(filtration_path)), rep.space);
  Rng rng = Rng(g.seed).split("analyze");
  const BlockReport blocks = verify_block_structure(rep, filtration, rng);
  json p = json::array();
  for (const auto& pj : blocks.p) p.push_back(pj.to_string(names));
  doc["filtration"] = io::filtration_to_json(filtration, rep.space);
  doc["blocks"] = blocks.block_sizes;
  doc["p"] = p;
  emit(doc, out_path, out);
  return kOk;
}

int cmd_cohomology(const Globals& g, const std::string& rep_name, int m, int trials, int samples,
                   const std::string& out_path, std::ostream& out) {
  const Representation rep = build_representation(parse_family(rep_name), m);
  const auto& names = rep.space.variable_names();
  Rng rng(g.seed);
  Rng char_rng = rng.split("characters");
  const LambdaMatrix lambda = lambda_matrix(rep, char_rng);
  Rng inv_rng = rng.split("characters");
  const auto invariants = basic_invariants(rep, inv_rng);
  const CMatrix grid = torus_loop_grid(rep, samples);
  Rng fiber_rng = rng.split("fiber");
  const FiberReport fiber = fiber_relation_check(rep, trials, 10, fiber_rng);

  json inv = json::array();
  for (const auto& r : invariants) {
    json row = json::array();
    for (Eigen::Index j = 0; j < r.lambda_row.size(); ++j) {
      row.push_back(io::complex_to_json(r.lambda_row[j]));
    }
    inv.push_back({{"label", r.label}, {"poly", io::polynomial_to_json(r.f, names)}, {"lambda", row}});
  }
  json lam = json::array();
  for (Eigen::Index i = 0; i < lambda.entries.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < lambda.entries.cols(); ++j) row.push_back(lambda.entries(i, j));
    lam.push_back(row);
  }
  json doc = {{"seed", g.seed},
              {"rep", std::string(to_string(rep.family))},
              {"m", m},
              {"space", rep.space.name()},
              {"torus", lambda.torus_labels},
              {"invariants", inv},
              {"lambda", lam},
              {"lambda_integrality_residual", lambda.integrality_residual},
              {"integrals", cplx_matrix_json(grid)},
              {"integral_max_deviation", (grid - lambda.raw).cwiseAbs().maxCoeff()},
              {"fiber",
               {{"points", fiber.points},
                {"tangents", fiber.tangents},
                {"max_residual", fiber.max_residual},
                {"min_control", fiber.min_control},
                {"control_failures", fiber.control_failures}}}};
  if (rep.space.dim() <= static_cast<int>(kMaxSymbolicSize)) {
    const ExceptionalFactored ex = exceptional_equation(rep);
    doc["equation"] = factored_string(ex.factors, names);
    doc["verdict"] = std::string(to_string(ex.verdict));
  }
  emit(doc, out_path, out);
  return fiber.control_failures == 0 ? kOk : kInternal;
}

int cmd_lift(const Globals& g, const std::string& in, const std::string& out_path,
             std::ostream& out) {
  const MatrixLoop loop = io::loop_from_json(io::parse(read_input(in)));
  const LiftCheck check = liftable(loop);
  json doc = {{"seed", g.seed},
              {"kind", std::string(to_string(loop.kind))},
              {"m", loop.m},
              {"samples", loop.samples.size()},
              {"winding", check.obstruction.winding},
              {"mod2", check.obstruction.mod2},
              {"liftable", check.liftable}};
  if (!check.liftable) {
    emit(doc, out_path, out);
    return kNegative;
  }
  FactorOptions opts;
  opts.minor_tol = g.tol;
  const LiftResult lift = lift_family(loop, opts);
  json factors = json::array();
  for (const auto& f : lift.factors) {
    json entry = {{"B", io::matrix_to_json(f.B)}, {"residual", f.residual}};
    entry["C"] = f.C ? io::matrix_to_json(*f.C) : json(nullptr);
    factors.push_back(entry);
  }
  doc["closure_gap"] = lift.closure_gap;
  doc["max_step"] = lift.max_step;
  doc["lipschitz"] = lift.lipschitz;
  doc["factors"] = factors;
  emit(doc, out_path, out);
  return kOk;
}

int cmd_reproduce(const Globals& g, const std::string& table, std::ostream& out) {
  const auto lines = reproduce(table, g.seed);
  bool all = true;
  out << "seed " << g.seed << "\n";
  for (const auto& line : lines) {
    out << line.text << " " << (line.pass ? "PASS" : "FAIL") << "\n";
    all = all && line.pass;
  }
  return all ? kOk : kInternal;
}

// ---------------------------------------------------------------------------
// Reference tables

struct TableRow {
  const char* space;
  const char* group;
  Family family;
  int m;
  const char* equation;
  Verdict verdict;
};

constexpr TableRow kTable2[] = {
    {"Sym_2", "B_2", Family::CholeskySym, 2, "x*(x*z - y^2)", Verdict::Free},
    {"M_{2,2}", "B_2 x N_2", Family::LU, 2, "x*(x*w - y*z)", Verdict::FreeStar},
    {"Sk_4", "D_4", Family::CholeskySkew, 4, "x*(x*w - y*v + z*u)", Verdict::FreeStar},
    {"M_{2,2}", "B_2 x C_2", Family::ModifiedLU, 2, "x*y*(x*w - y*z)", Verdict::Free},
    {"M_{2,3}", "B_2 x C_3", Family::ModifiedRect, 3, "x*y*(x*v - y*u)*(y*w - z*v)", Verdict::Free},
};

ReproLine table_line(const std::string& prefix, const Representation& rep,
                     const Polynomial& expected, const std::string& expected_text,
                     Verdict verdict, bool require_simple) {
  const ExceptionalFactored ex = exceptional_equation(rep);
  bool pass = equal_up_to_constant(ex.reduced(), expected) && ex.verdict == verdict;
  if (require_simple) {
    for (const auto& f : ex.factors) pass = pass && f.multiplicity == 1;
  }
  std::string text = prefix + " " + expected_text + " " + std::string(to_string(ex.verdict));
  if (!pass) text += " (computed " + factored_string(ex.factors, rep.space.variable_names()) + ")";
  return {text, pass};
}

}  // namespace

std::vector<ReproLine> reproduce(const std::string& table, std::uint64_t seed) {
  std::vector<ReproLine> out;
  if (table == "2") {
    for (const TableRow& row : kTable2) {
      const Representation rep = build_representation(row.family, row.m);
      const Polynomial expected = parse_polynomial(row.equation, rep.space.variable_names());
      out.push_back(table_line(std::string(row.space) + " " + row.group, rep, expected,
                               row.equation, row.verdict, false));
    }
  } else if (table == "example-4.4") {
    const Representation rep = build_representation(Family::CholeskySym, 3);
    const Polynomial det = det_poly(rep.space.symbolic_matrix());
    const Polynomial expected = parse_polynomial("x*(x*w - y^2)", rep.space.variable_names()) * det;
    out.push_back(table_line("Sym_3 B_3", rep, expected, "x*(x*w - y^2)*det(A)", Verdict::Free, true));
  } else if (table == "lambda") {
    Rng rng(seed);
    for (Family f : kAllFamilies) {
      for (int m = std::max(2, min_size(f)); m <= 3; ++m) {
        const Representation rep = build_representation(f, m);
        Rng sub = rng.split(std::string(to_string(f)) + std::to_string(m));
        bool pass = true;
        std::string text = "lambda " + std::string(to_string(f)) + " m=" + std::to_string(m) + " ";
        try {
          const LambdaMatrix l = lambda_matrix(rep, sub);
          const CMatrix grid = torus_loop_grid(rep);
          pass = l.integrality_residual < 1e-8 && (grid - l.raw).cwiseAbs().maxCoeff() < 1e-6;
          if (f == Family::CholeskySym) {
            for (int i = 0; i < m; ++i) {
              for (int j = 0; j < m; ++j) pass = pass && l.entries(i, j) == (j <= i ? 2 : 0);
            }
          }
          text += matrix_text(l.entries);
        } catch (const Error& e) {
          pass = false;
          text += e.what();
        }
        out.push_back({text, pass});
      }
    }
  } else {
    throw Error(ErrorKind::InvalidArgument,
                "unknown table \"" + table + "\" (expected 2, example-4.4 or lambda)");
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cholesky-type factorizations and their exceptional orbit varieties", "cholfd"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "seed for every randomized check");
  app.add_option("--tol", g.tol, "relative threshold below which a minor counts as zero")
      ->check(CLI::PositiveNumber);

  const std::vector<std::string> kinds{"sym", "lu", "skew", "mlu", "mrect"};
  std::string kind, in, out_path, filtration, table;
  int m = 2;
  int trials = 50;
  int samples = 256;

  auto* factor_cmd = app.add_subcommand("factor", "factor one matrix");
  factor_cmd->add_option("--kind", kind, "factorization kind")->required()->check(CLI::IsMember(kinds));
  factor_cmd->add_option("--in", in, "matrix JSON file, - for stdin")->required();
  factor_cmd->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* analyze_cmd = app.add_subcommand("analyze", "exceptional orbit equation and block form");
  analyze_cmd->add_option("--rep", kind, "representation")->required()->check(CLI::IsMember(kinds));
  analyze_cmd->add_option("--m", m, "size parameter")->required()->check(CLI::Range(1, 64));
  analyze_cmd->add_option("--filtration", filtration, "filtration JSON file");
  analyze_cmd->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* coh_cmd = app.add_subcommand("cohomology", "relative invariants, Lambda and fiber relation");
  coh_cmd->add_option("--rep", kind, "representation")->required()->check(CLI::IsMember(kinds));
  coh_cmd->add_option("--m", m, "size parameter")->required()->check(CLI::Range(1, 64));
  coh_cmd->add_option("--trials", trials, "fiber points")->check(CLI::Range(1, 100000));
  coh_cmd->add_option("--samples", samples, "samples per torus loop")->check(CLI::Range(2, 1 << 20));
  coh_cmd->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* lift_cmd = app.add_subcommand("lift", "winding obstruction and continuous factorization");
  lift_cmd->add_option("--in", in, "loop JSON file, - for stdin")->required();
  lift_cmd->add_option("--out", out_path, "write JSON here instead of stdout");

  auto* repro_cmd = app.add_subcommand("reproduce", "regenerate a reference table");
  repro_cmd->add_option("--table", table, "2, example-4.4 or lambda")
      ->required()
      ->check(CLI::IsMember({"2", "example-4.4", "lambda"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*factor_cmd) return cmd_factor(g, kind, in, out_path, out);
    if (*analyze_cmd) return cmd_analyze(g, kind, m, filtration, out_path, out);
    if (*coh_cmd) return cmd_cohomology(g, kind, m, trials, samples, out_path, out);
    if (*lift_cmd) return cmd_lift(g, in, out_path, out);
    if (*repro_cmd) return cmd_reproduce(g, table, out);
  } catch (const Error& e) {
    err << error_json(e).dump() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace chol::cli
