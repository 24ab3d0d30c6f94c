#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "divdiv/biharmonic.hpp"
#include "divdiv/complexes.hpp"
#include "divdiv/mesh_io.hpp"
#include "divdiv/random.hpp"
#include "divdiv/version.hpp"

namespace divdiv {

/// One mesh of a convergence run.
struct LevelResult {
  std::string mesh;
  ErrorRow row;
  double residual = 0.0;
  double hybrid_dev_sigma = std::nan("");  ///< ||sigma~ - sigma||_0 / ||sigma||_0
  double hybrid_dev_u = std::nan("");      ///< ||u~ - u||_0 / ||u||_0
  double galerkin_ratio = 0.0;             ///< ||sigma - sigma_h|| / ||sigma - Pi_h sigma||
};

/// Mixed solve of the manufactured problem on one mesh, optionally with the
/// hybrid comparison and the postprocessed displacement.
inline LevelResult solve_level(const std::string& mesh_spec, int l, int k, bool hybrid, bool postprocess,
                               const std::string& dump_prefix = "") {
  const ManufacturedCase mc;
  const Discretization d(load_mesh(mesh_spec), l, k);
  const int qd = ManufacturedCase::quad_degree(l);
  const MixedSystem sys = assemble_mixed(d, mc.f_function(), qd);
  if (!dump_prefix.empty()) {
    std::ofstream out(dump_prefix + "_mixed.coo");
    write_coo(out, sys.saddle());
    std::ofstream rhs(dump_prefix + "_mixed_rhs.txt");
    rhs.precision(17);
    for (Eigen::Index i = 0; i < sys.rhs().size(); ++i) rhs << sys.rhs()[i] << "\n";
  }
  const Solution sol = solve_mixed(sys);
  LevelResult r;
  r.mesh = mesh_spec;
  r.residual = sol.residual;
  std::vector<Poly2D> ustar;
  if (postprocess) ustar = postprocess_ustar(d, sol);
  r.row = error_report(d, sol, mc, postprocess ? &ustar : nullptr);
  r.galerkin_ratio = r.row.err_sigma_L2 / r.row.err_sigma_interp;
  if (hybrid) {
    const HybridSystem hs = assemble_hybrid(d, mc.f_function(), qd);
    if (!dump_prefix.empty()) {
      std::ofstream out(dump_prefix + "_hybrid.coo");
      write_coo(out, hs.saddle());
    }
    const Solution hsol = solve_hybrid(hs);
    r.hybrid_dev_sigma = sigma_distance(d, hsol.sigma, true, sol.sigma, false) / sigma_norm(d, sol.sigma, false);
    r.hybrid_dev_u = (hsol.u - sol.u).norm() / sol.u.norm();
  }
  return r;
}

inline const std::vector<std::string>& error_columns() {
  static const std::vector<std::string> cols = {"err_sigma_L2", "err_divdiv", "err_u_L2",
                                                "err_Qhu_L2",   "err_Qhu_2h", "err_ustar_2h"};
  return cols;
}

inline std::vector<double> error_values(const ErrorRow& r) {
  return {r.err_sigma_L2, r.err_divdiv, r.err_u_L2, r.err_Qhu_L2, r.err_Qhu_2h, r.err_ustar_2h};
}

inline void write_errors_csv(std::ostream& out, const std::vector<LevelResult>& levels, bool hybrid) {
  out << "mesh,h,dofs";
  for (const auto& c : error_columns()) out << "," << c;
  if (hybrid) out << ",hybrid_dev_sigma,hybrid_dev_u";
  out << "\n" << std::setprecision(10);
  for (const auto& l : levels) {
    out << l.mesh << "," << l.row.h << "," << l.row.dofs;
    for (double v : error_values(l.row)) out << "," << v;
    if (hybrid) out << "," << l.hybrid_dev_sigma << "," << l.hybrid_dev_u;
    out << "\n";
  }
}

inline std::vector<std::vector<double>> rate_table(const std::vector<LevelResult>& levels) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const auto e0 = error_values(levels[i - 1].row), e1 = error_values(levels[i].row);
    std::vector<double> row;
    for (std::size_t j = 0; j < e0.size(); ++j) row.push_back(observed_rate(e0[j], e1[j], levels[i - 1].row.h, levels[i].row.h));
    out.push_back(row);
  }
  return out;
}

inline void write_rates_csv(std::ostream& out, const std::vector<LevelResult>& levels) {
  out << "mesh_coarse,mesh_fine";
  for (const auto& c : error_columns()) out << ",rate_" << c;
  out << "\n" << std::setprecision(6) << std::fixed;
  const auto rates = rate_table(levels);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    out << levels[i].mesh << "," << levels[i + 1].mesh;
    for (double v : rates[i]) out << "," << v;
    out << "\n";
  }
  out.unsetf(std::ios::fixed);
}

/// Plain-text reference card: DOF counts per entity, dimension and the
/// conditioning of the dual basis over random shape-regular triangles.
inline void describe_element(std::ostream& out, int l, int k, int samples = 20, unsigned seed = 1) {
  const int n_int = DivDivElement::num_interior(l, k);
  out << "Sigma_{l,k} with l = " << l << ", k = " << k << "\n";
  out << "  space: C_l + x x^T P_{k-2}, dimension " << DivDivElement::dimension(l, k) << "\n";
  out << "  per vertex: 3 (values tau_xx, tau_xy, tau_yy)\n";
  out << "  per edge:   " << 2 * l - 1 << " (" << l - 1 << " normal-normal moments, " << l << " effective-shear moments)\n";
  out << "  interior:   " << n_int << " (" << k * (k - 1) / 2 - 3 << " against hess P_{k-2}, " << l * (l - 1)
      << " against sym(x^perp (x) P_{l-2}))\n";
  out << "  count:      9 + 3*" << 2 * l - 1 << " + " << n_int << " = " << 9 + 3 * (2 * l - 1) + n_int << "\n";
  std::vector<double> cond;
  double worst = 0.0;
  auto add = [&](const Triangle& t) {
    const DivDivElement e(t, l, k);
    cond.push_back(e.condition_number());
    worst = std::max(worst, e.duality_error());
  };
  add(Triangle{{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}});
  const double ref = cond.front();
  std::mt19937 rng(seed);
  for (int i = 0; i < samples; ++i) add(random_triangle(rng));
  std::sort(cond.begin(), cond.end());
  out << "  equilibrated DOF-matrix condition number:\n";
  out << "    reference triangle " << ref << "\n";
  out << "    " << cond.size() << " triangles: min " << cond.front() << ", median " << cond[cond.size() / 2] << ", max "
      << cond.back() << "\n";
  out << "  max duality error |L_i(phi_j) - delta_ij|: " << worst << "\n";
}

/// Convergence-study settings; read from "key = value" text plus overrides.
struct StudyConfig {
  int l = 3;
  int k = 3;
  std::vector<std::string> meshes = {"square:4", "square:8", "square:16"};
  bool hybrid = false;
  bool postprocess = true;
  bool check_complexes = false;
  std::string out_dir = "study_out";
  unsigned seed = 1;

  /// Apply one "key = value" setting; throws std::invalid_argument on unknown keys or bad values.
  void set(const std::string& key, const std::string& value) {
    auto as_bool = [&](const std::string& v) {
      if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
      if (v == "false" || v == "0" || v == "no" || v == "off") return false;
      throw std::invalid_argument("config: not a boolean for " + key + ": " + v);
    };
    auto as_int = [&](const std::string& v) {
      std::size_t pos = 0;
      const int x = std::stoi(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("config: not an integer for " + key + ": " + v);
      return x;
    };
    if (key == "l") l = as_int(value);
    else if (key == "k") k = as_int(value);
    else if (key == "meshes" || key == "levels") {
      meshes.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        // a bare integer n means square:n
        meshes.push_back(item.find_first_not_of("0123456789") == std::string::npos ? "square:" + item : item);
      }
    } else if (key == "hybrid") hybrid = as_bool(value);
    else if (key == "postprocess") postprocess = as_bool(value);
    else if (key == "check_complexes") check_complexes = as_bool(value);
    else if (key == "out" || key == "out_dir") out_dir = value;
    else if (key == "seed") seed = static_cast<unsigned>(as_int(value));
    else throw std::invalid_argument("config: unknown key " + key);
  }

  /// "key=value" or "key = value".
  void set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config: expected key = value, got " + assignment);
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
  }

  void read(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (!line.empty()) set(line);
    }
  }

  void validate() const {
    if (k < 3) throw std::invalid_argument("config: k >= 3 required");
    if (l < k - 1) throw std::invalid_argument("config: l >= k-1 required");
    if (meshes.size() < 2) throw std::invalid_argument("config: at least two meshes are needed for rates");
  }

  void write(std::ostream& out) const {
    out << "l = " << l << "\nk = " << k << "\nmeshes = ";
    for (std::size_t i = 0; i < meshes.size(); ++i) out << (i ? "," : "") << meshes[i];
    out << "\nhybrid = " << (hybrid ? "true" : "false") << "\npostprocess = " << (postprocess ? "true" : "false")
        << "\ncheck_complexes = " << (check_complexes ? "true" : "false") << "\nout_dir = " << out_dir
        << "\nseed = " << seed << "\n";
  }

  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }
};

/// Runs every level, writes errors.csv, rates.csv and manifest.txt into
/// out_dir, and returns 0 iff every enabled check passes.
inline int run_study(const StudyConfig& cfg, std::ostream& log) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  std::vector<LevelResult> levels;
  std::vector<std::string> failures;
  for (const auto& m : cfg.meshes) {
    log << "solving " << m << " (l = " << cfg.l << ", k = " << cfg.k << ")\n";
    levels.push_back(solve_level(m, cfg.l, cfg.k, cfg.hybrid, cfg.postprocess));
    const LevelResult& r = levels.back();
    if (cfg.hybrid && !(r.hybrid_dev_sigma <= 1e-8 && r.hybrid_dev_u <= 1e-8))
      failures.push_back("hybrid/mixed deviation on " + m);
  }
  if (cfg.check_complexes) {
    std::ostringstream rep;
    auto run = [&](const ComplexReport& r) {
      r.print(rep);
      if (!r.passed()) failures.push_back(r.title);
    };
    run(check_poly_complexes(cfg.k, cfg.seed));
    run(check_local_fem_complexes(cfg.l, cfg.k, Triangle{{Vec2(0, 0), Vec2(1, 0), Vec2(0.3, 0.8)}}));
    run(check_global_fem_complex(structured_unit_square(2), cfg.l, cfg.k));
    run(check_commuting_diagram(structured_unit_square(4), cfg.l, cfg.k, cfg.seed));
    std::ofstream(std::filesystem::path(cfg.out_dir) / "complexes.txt") << rep.str();
  }
  {
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "errors.csv");
    write_errors_csv(out, levels, cfg.hybrid);
  }
  {
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "rates.csv");
    write_rates_csv(out, levels);
  }
  {
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "manifest.txt");
    out << "divdiv " << DIVDIV_VERSION << "\n";
    cfg.write(out);
    out << "status = " << (failures.empty() ? "pass" : "fail") << "\n";
    for (const auto& f : failures) out << "failure = " << f << "\n";
  }
  for (const auto& f : failures) log << "FAILED: " << f << "\n";
  return failures.empty() ? 0 : 1;
}

}  // namespace divdiv
