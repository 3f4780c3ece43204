// stellar: Majorana constellations, coupled-basis decompositions, collective
// evolutions, and randomized invariant verification, emitted as JSON.
//
// Exit codes: 0 success, 1 I/O or parse error, 2 domain/precondition error,
// 3 verification failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <stellar/dfs.hpp>
#include <stellar/io.hpp>
#include <stellar/majorana.hpp>
#include <stellar/schur.hpp>
#include <stellar/verify.hpp>

namespace {

using stellar::cplx;
using stellar::domain_error;
using stellar::json;
using stellar::parse_error;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open \"" + path + "\"");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw parse_error(std::string("invalid JSON in \"") + path + "\": " + e.what());
  }
}

stellar::StateDocument load_state(const std::string& path) {
  stellar::StateDocument doc = stellar::parse_state(read_json_file(path));
  if (doc.renormalized)
    std::cerr << "warning: state in \"" << path << "\" was not normalized; renormalizing\n";
  return doc;
}

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw parse_error("cannot write \"" + out_path + "\"");
  out << text;
}

double parse_number_strict(const std::string& text) {
  const char* s = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0') throw domain_error("cannot parse number \"" + text + "\"");
  return v;
}

// Angles accept plain floats and pi expressions: "pi", "-pi/3", "2*pi/3",
// "0.5*pi", "pi/4".
double parse_angle(std::string t) {
  t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
  for (std::size_t p = t.find("\xcf\x80"); p != std::string::npos; p = t.find("\xcf\x80"))
    t.replace(p, 2, "pi");
  const std::size_t p = t.find("pi");
  if (p == std::string::npos) return parse_number_strict(t);
  std::string left = t.substr(0, p);
  const std::string right = t.substr(p + 2);
  double coef = 1.0;
  if (left == "-") {
    coef = -1.0;
  } else if (!left.empty() && left != "+") {
    if (left.back() == '*') left.pop_back();
    coef = parse_number_strict(left);
  }
  double divisor = 1.0;
  if (!right.empty()) {
    if (right[0] != '/') throw domain_error("cannot parse angle \"" + t + "\"");
    divisor = parse_number_strict(right.substr(1));
    if (divisor == 0.0) throw domain_error("zero divisor in angle \"" + t + "\"");
  }
  return coef * M_PI / divisor;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

// "axis,angle" with axis in {x, y, z}: the SU(2) rotation
// cos(a/2) - i sin(a/2) sigma_axis.
Eigen::Matrix2cd axis_rotation(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos) throw domain_error("--su2 expects \"axis,angle\"");
  std::string axis = text.substr(0, comma);
  axis.erase(std::remove(axis.begin(), axis.end(), ' '), axis.end());
  const double angle = parse_angle(text.substr(comma + 1));
  Eigen::Matrix2cd sigma;
  if (axis == "x")
    sigma = stellar::pauli_x();
  else if (axis == "y")
    sigma = stellar::pauli_y();
  else if (axis == "z")
    sigma = stellar::pauli_z();
  else
    throw domain_error("rotation axis must be x, y, or z");
  return std::cos(0.5 * angle) * Eigen::Matrix2cd::Identity() -
         cplx(0.0, std::sin(0.5 * angle)) * sigma;
}

// Project an N-qubit state onto its top-spin block, rejecting states that
// put weight above `tol` anywhere else.
stellar::SpinState symmetric_projection(const stellar::MultiQubitState& q, double tol = 1e-8) {
  const auto dec = stellar::decompose(q);
  double worst = 0.0;
  int worst_two_j = 0, worst_alpha = 0;
  const stellar::SpinState* top = nullptr;
  for (const auto& blk : dec.blocks) {
    if (blk.two_j == q.n()) {
      if (blk.rep_state) top = &*blk.rep_state;
      continue;
    }
    if (std::abs(blk.xi) > worst) {
      worst = std::abs(blk.xi);
      worst_two_j = blk.two_j;
      worst_alpha = blk.alpha;
    }
  }
  if (worst > tol) {
    std::ostringstream msg;
    msg << "state is not symmetric: block j=" << 0.5 * worst_two_j << ", alpha=" << worst_alpha
        << " carries |xi|=" << worst;
    throw domain_error(msg.str());
  }
  if (!top) throw domain_error("state has no weight in the symmetric block");
  return *top;
}

stellar::ConstellationSphere representation_sphere_of(const stellar::PointConstellation& pc,
                                                      int two_j) {
  stellar::ConstellationSphere sphere;
  sphere.label = "representation";
  stellar::ConstellationGroup g;
  g.j = 0.5 * two_j;
  g.alpha = 0;
  g.grouped = stellar::group_constellation(pc.points);
  sphere.groups.push_back(std::move(g));
  return sphere;
}

json points_report(const stellar::SpinState& s, const stellar::PointConstellation& pc) {
  const auto poly = stellar::majorana_poly(s);
  double max_residual = 0.0;
  json residuals = json::array();
  for (const cplx& z : pc.source_roots.finite_roots) {
    const double r = std::abs(stellar::evaluate(poly, z));
    max_residual = std::max(max_residual, r);
    residuals.push_back(stellar::round12(r));
  }
  json rep;
  rep["nominal_degree"] = poly.nominal_degree;
  rep["finite_roots"] = static_cast<int>(pc.source_roots.finite_roots.size());
  rep["infinity_count"] = pc.source_roots.infinity_count;
  rep["root_residuals"] = residuals;
  rep["max_root_residual"] = stellar::round12(max_residual);
  return rep;
}

std::vector<stellar::ConstellationSphere> decomposition_spheres(
    const stellar::SchurDecomposition& dec, double eps, bool multiplicity_majorana) {
  std::vector<stellar::ConstellationSphere> spheres(2);
  spheres[0].label = "representation";
  spheres[1].label = "multiplicity";

  for (const auto& blk : dec.blocks) {
    if (std::abs(blk.xi) <= 0.0 || !blk.rep_state) continue;
    stellar::ConstellationGroup g;
    g.j = 0.5 * blk.two_j;
    g.alpha = blk.alpha;
    g.grouped = stellar::group_constellation(stellar::majorana_points(*blk.rep_state, eps).points);
    spheres[0].groups.push_back(std::move(g));
  }

  int prev_two_j = -1;
  for (const auto& blk : dec.blocks) {
    if (blk.two_j == prev_two_j) continue;
    prev_two_j = blk.two_j;
    const Eigen::VectorXcd xi = dec.multiplicity_state(blk.two_j);
    const int d = static_cast<int>(xi.size());
    if (d < 2 || xi.norm() < 1e-12) continue;
    stellar::ConstellationGroup g;
    g.j = 0.5 * blk.two_j;
    g.alpha = -1;  // multiplicity sphere carries no path label
    if (d == 2) {
      g.grouped = stellar::group_constellation(
          stellar::majorana_points(stellar::SpinState(1, xi), eps).points);
    } else if (multiplicity_majorana) {
      g.grouped = stellar::group_constellation(
          stellar::majorana_points(stellar::SpinState(d - 1, xi), eps).points);
    } else {
      g.no_sphere = true;
      g.amps = xi / xi.norm();
    }
    spheres[1].groups.push_back(std::move(g));
  }
  return spheres;
}

json decomposition_report(const stellar::SchurDecomposition& dec,
                          const stellar::MultiQubitState& original) {
  json xi_rows = json::array();
  for (const auto& blk : dec.blocks) {
    json row;
    row["j"] = stellar::round12(0.5 * blk.two_j);
    row["alpha"] = blk.alpha;
    row["xi_abs"] = stellar::round12(std::abs(blk.xi));
    xi_rows.push_back(std::move(row));
  }
  json rep;
  rep["xi"] = std::move(xi_rows);
  rep["reconstruction_residual"] =
      stellar::round12((stellar::reconstruct(dec).amps() - original.amps()).norm());
  return rep;
}

json constellation_document(const stellar::StateDocument& sd, double eps, int nmax) {
  if (!sd.is_qubits())
    return stellar::constellation_json(
        {representation_sphere_of(stellar::majorana_points(sd.spin(), eps), sd.spin().two_j())});
  if (sd.qubits().n() > nmax)
    throw domain_error("qubit register exceeds --nmax=" + std::to_string(nmax));
  return stellar::constellation_json(
      decomposition_spheres(stellar::decompose(sd.qubits()), eps, false));
}

std::string u128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + int(v % 10)));
    v /= 10;
  }
  return s;
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_points(const std::string& input, const std::string& out, double eps, int nmax,
               bool verbose) {
  const stellar::StateDocument sd = load_state(input);
  stellar::SpinState s = [&]() {
    if (!sd.is_qubits()) return sd.spin();
    if (sd.qubits().n() > nmax)
      throw domain_error("qubit register exceeds --nmax=" + std::to_string(nmax));
    return symmetric_projection(sd.qubits());
  }();
  const auto pc = stellar::majorana_points(s, eps);
  json doc = stellar::constellation_json({representation_sphere_of(pc, s.two_j())});
  if (verbose) doc["report"] = points_report(s, pc);
  write_text(out, stellar::dump_document(doc));
  return 0;
}

int cmd_decompose(const std::string& input, const std::string& out, double eps, int nmax,
                  bool multiplicity_majorana) {
  const stellar::StateDocument sd = load_state(input);
  if (!sd.is_qubits()) throw domain_error("decompose expects a qubits state file");
  if (sd.qubits().n() > nmax)
    throw domain_error("qubit register exceeds --nmax=" + std::to_string(nmax));
  const auto dec = stellar::decompose(sd.qubits());
  json doc = stellar::constellation_json(decomposition_spheres(dec, eps, multiplicity_majorana));
  doc["report"] = decomposition_report(dec, sd.qubits());
  write_text(out, stellar::dump_document(doc));
  return 0;
}

int cmd_evolve(const std::string& input, const std::string& out, const std::string& matrix_path,
               const std::string& su2_text, const std::string& perm_text,
               const std::string& logical_text, const std::string& before_path,
               const std::string& after_path, double eps, int nmax) {
  const int flags = int(!matrix_path.empty()) + int(!su2_text.empty()) + int(!perm_text.empty()) +
                    int(!logical_text.empty());
  if (flags != 1)
    throw domain_error("exactly one of --matrix, --su2, --perm, --logical is required");

  const stellar::StateDocument sd = load_state(input);
  if (!before_path.empty())
    write_text(before_path, stellar::dump_document(constellation_document(sd, eps, nmax)));

  stellar::StateDocument evolved = sd;
  if (!su2_text.empty() || !matrix_path.empty()) {
    const Eigen::Matrix2cd m = !su2_text.empty() ? axis_rotation(su2_text)
                                                 : stellar::parse_matrix2(read_json_file(matrix_path));
    if (std::abs(m.determinant()) < 1e-12) throw domain_error("evolution matrix is singular");
    if (sd.is_qubits()) {
      evolved.state = stellar::MultiQubitState(
          sd.qubits().n(), stellar::collective_op(m, sd.qubits().n()).apply(sd.qubits().amps()));
    } else {
      evolved.state = stellar::apply_gl2(sd.spin(), m);
    }
  } else if (!perm_text.empty()) {
    if (!sd.is_qubits()) throw domain_error("--perm requires a qubits state file");
    const stellar::Permutation s = stellar::Permutation::from_cycles(perm_text, sd.qubits().n());
    evolved.state = stellar::MultiQubitState(
        sd.qubits().n(), stellar::permutation_op(s, sd.qubits().n()).apply(sd.qubits().amps()));
  } else {
    if (!sd.is_qubits() || sd.qubits().n() != 3)
      throw domain_error("--logical requires a 3-qubit state file");
    const auto parts = split(logical_text, ',');
    if (parts.size() != 3) throw domain_error("--logical expects \"alpha,beta,gamma\"");
    const Eigen::MatrixXcd u =
        stellar::logical_unitary(parse_angle(parts[0]), parse_angle(parts[1]),
                                 parse_angle(parts[2]));
    evolved.state = stellar::MultiQubitState(3, u * sd.qubits().amps());
  }

  write_text(out, stellar::dump_document(stellar::state_to_json(evolved)));
  if (!after_path.empty())
    write_text(after_path, stellar::dump_document(constellation_document(evolved, eps, nmax)));
  return 0;
}

int cmd_verify(const std::string& out, const std::string& suite, int n, int trials,
               std::uint64_t seed) {
  if (trials < 1) throw domain_error("--trials must be at least 1");
  std::vector<std::pair<std::string, std::vector<stellar::PropertyResult>>> suites;

  const bool all = suite == "all";
  if (all || suite == "rigid")
    suites.push_back({"rigid", {stellar::check_rigid_rotation(trials, seed)}});
  if (all || suite == "mobius")
    suites.push_back({"mobius", {stellar::check_mobius_covariance(trials, seed)}});
  if (all || suite == "schur") {
    if (n < 1 || n > 8) throw domain_error("--n must be between 1 and 8 for the schur suite");
    suites.push_back({"schur",
                      {stellar::check_block_structure(n, trials, seed, false),
                       stellar::check_block_structure(n, trials, seed, true),
                       stellar::check_dimension_completeness()}});
  }
  if (all || suite == "dfs")
    suites.push_back({"dfs",
                      {stellar::check_logical_immunity(trials, seed),
                       stellar::check_logical_euler(trials, seed)}});

  bool all_pass = true;
  json doc;
  doc["v"] = 1;
  doc["kind"] = "verify";
  doc["seed"] = seed;
  doc["suites"] = json::array();
  for (const auto& [name, props] : suites) {
    json js;
    js["name"] = name;
    js["properties"] = json::array();
    bool suite_pass = true;
    for (const auto& p : props) {
      json jp;
      jp["name"] = p.name;
      jp["trials"] = p.trials;
      jp["max_deviation"] = stellar::round12(p.max_deviation);
      jp["tolerance"] = stellar::round12(p.tolerance);
      jp["pass"] = p.pass;
      js["properties"].push_back(std::move(jp));
      suite_pass = suite_pass && p.pass;
      std::cerr << (p.pass ? "[PASS] " : "[FAIL] ") << name << "/" << p.name
                << ": max deviation " << p.max_deviation << " (tolerance " << p.tolerance
                << ", " << p.trials << " trials)\n";
    }
    js["pass"] = suite_pass;
    all_pass = all_pass && suite_pass;
    doc["suites"].push_back(std::move(js));
  }
  doc["pass"] = all_pass;
  write_text(out, stellar::dump_document(doc));
  std::cerr << (all_pass ? "verification passed\n" : "verification FAILED\n");
  return all_pass ? 0 : 3;
}

int cmd_dims(const std::string& out, int n, int d) {
  const auto rows = stellar::irrep_dimensions(n, d);

  unsigned __int128 total = 0;
  for (const auto& r : rows)
    total += static_cast<unsigned __int128>(r.dim_gl) * static_cast<unsigned __int128>(r.dim_s);
  unsigned __int128 expected = 1;
  for (int k = 0; k < n; ++k) expected *= static_cast<unsigned>(d);

  std::ostringstream table;
  table << "irreducible blocks for n=" << n << ", d=" << d << "\n";
  table << "partition            dim_GL      dim_S\n";
  for (const auto& r : rows) {
    std::ostringstream part;
    part << "[";
    for (std::size_t i = 0; i < r.partition.size(); ++i)
      part << (i ? "," : "") << r.partition[i];
    part << "]";
    table << part.str();
    for (std::size_t pad = part.str().size(); pad < 18; ++pad) table << ' ';
    table << "  " << r.dim_gl;
    for (std::size_t pad = std::to_string(r.dim_gl).size(); pad < 10; ++pad) table << ' ';
    table << "  " << r.dim_s << "\n";
  }
  table << "sum of dim_GL * dim_S = " << u128_to_string(total) << " (d^n = "
        << u128_to_string(expected) << (total == expected ? ", complete)\n" : ", MISMATCH)\n");
  if (d == 2) {
    table << "spin view (d = 2):\n";
    for (const auto& r : rows) {
      const int two_j = r.partition[0] - (r.partition.size() > 1 ? r.partition[1] : 0);
      table << "  j=" << 0.5 * two_j << "  dim=" << r.dim_gl << "  multiplicity=" << r.dim_s
            << "\n";
    }
  }
  std::cout << table.str();

  if (!out.empty()) {
    json doc;
    doc["v"] = 1;
    doc["kind"] = "dims";
    doc["n"] = n;
    doc["d"] = d;
    doc["rows"] = json::array();
    for (const auto& r : rows) {
      json row;
      row["partition"] = r.partition;
      row["dim_gl"] = r.dim_gl;
      row["dim_s"] = r.dim_s;
      doc["rows"].push_back(std::move(row));
    }
    doc["total"] = u128_to_string(total);
    doc["complete"] = (total == expected);
    if (d == 2) {
      doc["spin_view"] = json::array();
      for (const auto& r : rows) {
        const int two_j = r.partition[0] - (r.partition.size() > 1 ? r.partition[1] : 0);
        json row;
        row["j"] = stellar::round12(0.5 * two_j);
        row["multiplicity"] = r.dim_s;
        doc["spin_view"].push_back(std::move(row));
      }
    }
    write_text(out, stellar::dump_document(doc));
  }
  return 0;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Majorana constellations and collective-symmetry toolkit"};
  app.require_subcommand(1);

  std::string out_path;
  std::uint64_t seed = 42;
  double eps = 1e-6;
  int nmax = 12;
  app.add_option("--out", out_path, "Write the JSON document here instead of stdout");
  app.add_option("--seed", seed, "PRNG seed for randomized verification");
  app.add_option("--eps", eps, "Tolerance for root clustering and certification");
  app.add_option("--nmax", nmax, "Largest accepted qubit register");

  std::string points_input;
  bool points_verbose = false;
  CLI::App* points = app.add_subcommand("points", "Majorana constellation of a state");
  points->add_option("input", points_input, "State file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  points->add_flag("--verbose", points_verbose, "Embed a root-residual report");
  points->fallthrough();

  std::string dec_input;
  bool multiplicity_majorana = false;
  CLI::App* dec = app.add_subcommand("decompose", "Coupled-basis block decomposition");
  dec->add_option("input", dec_input, "Qubits state file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  dec->add_flag("--multiplicity-majorana", multiplicity_majorana,
                "Render multiplicity spaces of dimension > 2 as point constellations");
  dec->fallthrough();

  std::string ev_input, ev_matrix, ev_su2, ev_perm, ev_logical, ev_before, ev_after;
  CLI::App* ev = app.add_subcommand("evolve", "Apply a collective, permutation, or logical map");
  ev->add_option("input", ev_input, "State file (JSON)")->required()->check(CLI::ExistingFile);
  ev->add_option("--matrix", ev_matrix, "JSON file with a 2x2 complex matrix")
      ->check(CLI::ExistingFile);
  ev->add_option("--su2", ev_su2, "Rotation \"axis,angle\" with axis x|y|z");
  ev->add_option("--perm", ev_perm, "Permutation in cycle notation, e.g. \"(12)(3)\"");
  ev->add_option("--logical", ev_logical, "Logical Euler angles \"alpha,beta,gamma\" (3 qubits)");
  ev->add_option("--before", ev_before, "Also write the input constellation here");
  ev->add_option("--after", ev_after, "Also write the evolved constellation here");
  ev->fallthrough();

  std::string vf_suite = "all";
  int vf_n = 5, vf_trials = 100;
  CLI::App* vf = app.add_subcommand("verify", "Run randomized invariant suites");
  vf->add_option("--suite", vf_suite, "rigid | mobius | schur | dfs | all")
      ->check(CLI::IsMember({"rigid", "mobius", "schur", "dfs", "all"}));
  vf->add_option("--n", vf_n, "Qubit count for the schur suite (1..8)");
  vf->add_option("--trials", vf_trials, "Trials per property");
  vf->fallthrough();

  int dims_n = 0, dims_d = 2;
  CLI::App* dims = app.add_subcommand("dims", "Irreducible block dimensions");
  dims->add_option("--n", dims_n, "Number of constituents")->required();
  dims->add_option("--d", dims_d, "Local dimension");
  dims->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*points)
    return guarded([&] { return cmd_points(points_input, out_path, eps, nmax, points_verbose); });
  if (*dec)
    return guarded(
        [&] { return cmd_decompose(dec_input, out_path, eps, nmax, multiplicity_majorana); });
  if (*ev)
    return guarded([&] {
      return cmd_evolve(ev_input, out_path, ev_matrix, ev_su2, ev_perm, ev_logical, ev_before,
                        ev_after, eps, nmax);
    });
  if (*vf) return guarded([&] { return cmd_verify(out_path, vf_suite, vf_n, vf_trials, seed); });
  if (*dims) return guarded([&] { return cmd_dims(out_path, dims_n, dims_d); });
  return 1;
}
