#include "becurv/cli.hpp"

#include "becurv/bakry_emery.hpp"
#include "becurv/curvature_function.hpp"
#include "becurv/errors.hpp"
#include "becurv/graph.hpp"
#include "becurv/grid.hpp"
#include "becurv/modifications.hpp"
#include "becurv/oracle.hpp"
#include "becurv/products.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

namespace becurv::cli {

namespace {

using json = nlohmann::ordered_json;

const char* const kDefaultGrid = "log:0.01:100:41";

json dim_json(const Dimension& n) {
  if (n.is_infinite()) return "inf";
  return n.value();
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json matrix_json(const Eigen::MatrixXd& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write \"" + path + "\"");
  f << text;
}

std::vector<std::size_t> vertices_with_neighbours(const WeightedGraph& g) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.neighbors(i).empty()) out.push_back(i);
  }
  return out;
}

struct Options {
  Tolerances tol;
  std::string graph;
  std::string graph2;
  std::string vertex;
  std::string dim;
  std::string grid;
  std::string output;
  std::string summary;
  std::string report;
  std::string alpha = "1";
  std::string beta = "1";
  std::string op;
  std::string y;
  std::string yp;
  std::string z;
  std::string c;
  bool verify = false;
};

int cmd_curvature(const Options& o, std::ostream& out) {
  const WeightedGraph g = load_graph_file(o.graph);
  const Dimension n = parse_dimension(o.dim);
  if (!o.vertex.empty()) {
    out << format_number(curvature_function(g, o.vertex, o.tol)(n)) << "\n";
    return kOk;
  }
  out << "vertex,K\n";
  for (auto i : vertices_with_neighbours(g)) {
    out << g.id(i) << "," << format_number(curvature_function(g, g.id(i), o.tol)(n)) << "\n";
  }
  return kOk;
}

int cmd_curvature_function(const Options& o, std::ostream& out) {
  const WeightedGraph g = load_graph_file(o.graph);
  auto grid = parse_grid(o.grid);
  if (grid.empty() || !grid.back().is_infinite()) grid.push_back(Dimension::infinity());
  const CurvatureFunction cf = curvature_function(g, o.vertex, o.tol);

  std::string csv = "N,K\n";
  for (const auto& n : grid) {
    csv += (n.is_infinite() ? std::string("inf") : format_number(n.value())) + "," + format_number(cf(n)) + "\n";
  }
  const CurvatureProfile p = spectral_characterization(cf);
  json s;
  s["vertex"] = o.vertex;
  s["K_inf"] = p.k_inf;
  s["K0_inf"] = p.k0_inf;
  s["N0"] = opt_json(p.n0);
  s["N1"] = dim_json(p.n1);
  s["sharp_up_to"] = p.sharp_up_to ? dim_json(*p.sharp_up_to) : json(nullptr);
  s["v0_is_eigvec"] = p.v0_is_eigvec;
  s["v0_perp_emin"] = p.v0_perp_emin;

  if (o.summary.empty()) {
    write_text(o.output, csv + "# " + s.dump() + "\n", out);
  } else {
    write_text(o.output, csv, out);
    write_text(o.summary, s.dump(2) + "\n", out);
  }
  return kOk;
}

int cmd_matrix(const Options& o, std::ostream& out) {
  const WeightedGraph g = load_graph_file(o.graph);
  const CurvatureMatrix cm = curvature_matrix(two_ball(g, o.vertex));
  json j;
  j["vertex"] = o.vertex;
  j["S1"] = cm.ball.s1;
  j["v0"] = vector_json(cm.v0);
  j["A_inf"] = matrix_json(cm.a_inf.matrix());
  j["Q"] = matrix_json(cm.q.matrix());
  if (!o.dim.empty()) {
    const Dimension n = parse_dimension(o.dim);
    j["N"] = dim_json(n);
    j["A_N"] = matrix_json(a_n(cm, n).matrix());
  }
  write_text(o.output, j.dump(2) + "\n", out);
  return kOk;
}

int cmd_scalar(const Options& o, std::ostream& out) {
  const WeightedGraph g = load_graph_file(o.graph);
  const Dimension n = parse_dimension(o.dim);
  if (!o.vertex.empty()) {
    out << format_number(scalar_curvature(two_ball(g, o.vertex), n)) << "\n";
    return kOk;
  }
  out << "vertex,S\n";
  for (auto i : vertices_with_neighbours(g)) {
    out << g.id(i) << "," << format_number(scalar_curvature(two_ball(g, g.id(i)), n)) << "\n";
  }
  return kOk;
}

int cmd_product(const Options& o, std::ostream& out) {
  const ProductSpec spec{load_graph_file(o.graph), load_graph_file(o.graph2), parse_real(o.alpha),
                         parse_real(o.beta)};
  write_text(o.output, dump_graph(cartesian_product(spec)), out);
  return kOk;
}

int cmd_modify(const Options& o, std::ostream& out) {
  const WeightedGraph g = load_graph_file(o.graph);
  if (o.c.empty()) throw UsageError("--c is required");
  const double c = parse_real(o.c);
  ModificationSpec spec;
  if (o.op == "o1") {
    if (o.y.empty() || o.yp.empty()) throw UsageError("--op o1 needs --y and --yp");
    spec = EdgeIncrease{o.y, o.yp, c};
  } else {
    if (o.z.empty()) throw UsageError("--op o2 needs --z");
    spec = VertexRemoval{o.z, c};
  }
  if (!o.verify) {
    write_text(o.output, dump_graph(apply_modification(g, o.vertex, spec)), out);
    return kOk;
  }
  const MonotonicityReport r = verify_monotonicity(g, o.vertex, spec, parse_grid(o.grid));
  write_text(o.output, dump_graph(r.modified), out);

  json j;
  j["vertex"] = o.vertex;
  j["samples"] = json::array();
  for (const auto& s : r.samples) j["samples"].push_back({{"N", dim_json(s.n)}, {"K", s.k}, {"K_modified", s.k_modified}});
  j["min_gain"] = r.min_gain;
  j["q_gain_min_eigenvalue"] = r.q_gain_min_eigenvalue;
  j["row_sum_error"] = opt_json(r.row_sum_error);
  j["max_offdiagonal"] = opt_json(r.max_offdiagonal);
  j["violations"] = r.violations;
  j["ok"] = r.ok();
  write_text(o.report, j.dump(2) + "\n", out);
  return r.ok() ? kOk : kViolations;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const WeightedGraph g = load_graph_file(o.graph);
  const auto grid = parse_grid(o.grid);
  json j;
  j["vertices"] = json::array();
  json all = json::array();
  for (auto i : vertices_with_neighbours(g)) {
    const auto& id = g.id(i);
    const CurvatureFunction cf = curvature_function(g, id, o.tol);
    const BoundsReport b = check_bounds(cf, grid);
    const CurvatureProfile p = spectral_characterization(cf);
    const DecompositionReport d = verify_decomposition(cf.matrix().ball, o.tol.decomposition);
    json v;
    v["vertex"] = id;
    v["min_lower_slack"] = b.min_lower_slack;
    v["min_upper_slack"] = b.min_upper_slack;
    v["decomposition_discrepancy"] = d.max_discrepancy();
    v["bounds_violations"] = b.violations;
    v["spectral_violations"] = p.violations;
    v["strictness"] = b.strictness;
    j["vertices"].push_back(v);
    for (const auto& s : b.violations) all.push_back(id + ": " + s);
    for (const auto& s : p.violations) all.push_back(id + ": " + s);
    if (!d.ok()) all.push_back(id + ": decomposition discrepancy " + format_number(d.max_discrepancy()));
  }
  const EquivalenceReport e = equivalence_suite(g, grid, o.tol);
  j["equivalence"] = {{"max_deviation", e.max_deviation},
                      {"worst_vertex", e.worst_vertex},
                      {"worst_N", dim_json(e.worst_n)},
                      {"evaluations", e.evaluations}};
  for (const auto& s : e.violations) all.push_back(s);
  j["violations"] = all;
  j["ok"] = all.empty();
  write_text(o.output, j.dump(2) + "\n", out);
  return all.empty() ? kOk : kViolations;
}

void error_json(std::ostream& err, const char* kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bakry-Emery curvature of weighted graphs", "becurv"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--eps-mult", o.tol.eps_mult, "Eigenvalue clustering tolerance (relative)");
  app.add_option("--eigvec", o.tol.eigvec, "v0 eigenvector / orthogonality tolerance (relative)");
  app.add_option("--equality", o.tol.equality, "Slack for sharpness, bounds and shape checks");
  app.add_option("--oracle-psd", o.tol.oracle_psd, "PSD slack inside the oracle");
  app.add_option("--oracle-width", o.tol.oracle_width, "Oracle bisection width");

  const auto graph_arg = [&](CLI::App* s) { s->add_option("graph", o.graph, "Graph JSON file")->required(); };

  auto* curv = app.add_subcommand("curvature", "K(N) at one vertex, or at every vertex as CSV");
  graph_arg(curv);
  curv->add_option("--vertex", o.vertex);
  curv->add_option("--dim", o.dim, "Positive decimal, p/q or inf")->required();

  auto* fn = app.add_subcommand("curvature-function", "CSV of N,K on a grid (inf appended) and a JSON summary");
  graph_arg(fn);
  fn->add_option("--vertex", o.vertex)->required();
  fn->add_option("--grid", o.grid, "lin:a:b:k, log:a:b:k or a comma list")->default_val(kDefaultGrid);
  fn->add_option("-o,--output", o.output, "CSV destination (default stdout)");
  fn->add_option("--summary", o.summary, "JSON summary destination (default: last CSV line, after '# ')");

  auto* mat = app.add_subcommand("matrix", "Q, A_inf and v0 at a vertex as JSON");
  graph_arg(mat);
  mat->add_option("--vertex", o.vertex)->required();
  mat->add_option("--dim", o.dim, "Also emit A_N");
  mat->add_option("-o,--output", o.output);

  auto* sc = app.add_subcommand("scalar", "Generalised scalar curvature tr A_N");
  graph_arg(sc);
  sc->add_option("--vertex", o.vertex);
  sc->add_option("--dim", o.dim)->default_val("inf");

  auto* prod = app.add_subcommand("product", "Weighted Cartesian product of two graphs");
  graph_arg(prod);
  prod->add_option("graph2", o.graph2, "Second factor")->required();
  prod->add_option("--alpha", o.alpha)->default_val("1");
  prod->add_option("--beta", o.beta)->default_val("1");
  prod->add_option("-o,--output", o.output);

  auto* mod = app.add_subcommand("modify", "Edge increase (o1) or vertex removal (o2) at a vertex");
  graph_arg(mod);
  mod->add_option("--vertex", o.vertex)->required();
  mod->add_option("--op", o.op)->required()->check(CLI::IsMember({"o1", "o2"}));
  mod->add_option("--y", o.y);
  mod->add_option("--yp", o.yp);
  mod->add_option("--z", o.z);
  mod->add_option("--c", o.c);
  mod->add_flag("--verify", o.verify, "Also check monotonicity on --grid");
  mod->add_option("--grid", o.grid)->default_val("0.5,1,2,5,inf");
  mod->add_option("-o,--output", o.output, "Modified graph destination (default stdout)");
  mod->add_option("--report", o.report, "Monotonicity report destination (default stdout)");

  auto* ver = app.add_subcommand("verify", "Oracle equivalence, bounds and spectral checks on every vertex");
  graph_arg(ver);
  ver->add_option("--grid", o.grid)->default_val("log:0.1:100:10,inf");
  ver->add_option("-o,--output", o.output);

  std::vector<std::string> argv_store{"becurv"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kUsageError;
  }

  try {
    if (curv->parsed()) return cmd_curvature(o, out);
    if (fn->parsed()) return cmd_curvature_function(o, out);
    if (mat->parsed()) return cmd_matrix(o, out);
    if (sc->parsed()) return cmd_scalar(o, out);
    if (prod->parsed()) return cmd_product(o, out);
    if (mod->parsed()) return cmd_modify(o, out);
    return cmd_verify(o, out);
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kUsageError;
  } catch (const FormatError& e) {
    error_json(err, "format", e.what());
  } catch (const DomainError& e) {
    error_json(err, "domain", e.what());
  } catch (const ContractViolation& e) {
    error_json(err, "contract", e.what());
  } catch (const LinalgError& e) {
    error_json(err, "linalg", e.what());
  }
  return kDomainError;
}

}  // namespace becurv::cli
