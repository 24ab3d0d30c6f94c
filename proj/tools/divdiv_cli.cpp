// divdiv_cli: element cards, complex verification, solves and convergence studies.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "divdiv/divdiv.hpp"

using namespace divdiv;

namespace {

// "3..6" or "3,4,5" or "4"
std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  const auto dots = s.find("..");
  if (dots != std::string::npos) {
    const int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
    for (int i = a; i <= b; ++i) out.push_back(i);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

int verify_complexes(const std::string& ks, int l_opt, const std::string& mesh_spec, unsigned seed) {
  const TriMesh mesh = load_mesh(mesh_spec);
  if (mesh.num_cells() > 64) throw std::invalid_argument("verify-complexes: global checks use dense ranks, at most 64 cells");
  bool ok = true;
  for (int k : parse_int_list(ks)) {
    const int l = l_opt > 0 ? l_opt : k;
    std::vector<ComplexReport> reps;
    reps.push_back(check_poly_complexes(k, seed));
    reps.push_back(check_local_fem_complexes(l, k, Triangle{{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}}));
    reps.push_back(check_local_fem_complexes(l, k, Triangle{{Vec2(0.1, 0.2), Vec2(2.3, 0.4), Vec2(0.9, 1.7)}}));
    reps.push_back(check_global_fem_complex(mesh, l, k));
    reps.push_back(check_commuting_diagram(mesh, l, k, seed));
    for (const auto& r : reps) {
      r.print(std::cout);
      ok = ok && r.passed();
    }
  }
  std::cout << (ok ? "all checks passed" : "FAILURES above") << "\n";
  return ok ? 0 : 1;
}

int solve(const std::vector<std::string>& meshes, int l, int k, bool hybrid, bool postprocess, const std::string& dump,
          const std::string& out_dir) {
  std::vector<LevelResult> levels;
  bool ok = true;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const std::string prefix = dump.empty() ? "" : dump + "_" + std::to_string(i);
    levels.push_back(solve_level(meshes[i], l, k, hybrid, postprocess, prefix));
    if (hybrid && !(levels.back().hybrid_dev_sigma <= 1e-8 && levels.back().hybrid_dev_u <= 1e-8)) {
      std::cerr << "hybrid/mixed deviation above 1e-8 on " << meshes[i] << "\n";
      ok = false;
    }
  }
  if (out_dir.empty()) {
    write_errors_csv(std::cout, levels, hybrid);
    if (levels.size() > 1) {
      std::cout << "\n";
      write_rates_csv(std::cout, levels);
    }
  } else {
    std::filesystem::create_directories(out_dir);
    std::ofstream e(std::filesystem::path(out_dir) / "errors.csv");
    write_errors_csv(e, levels, hybrid);
    std::ofstream r(std::filesystem::path(out_dir) / "rates.csv");
    write_rates_csv(r, levels);
    std::cout << "wrote " << out_dir << "/errors.csv and rates.csv\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"div-div conforming elements: element cards, complex checks, biharmonic solves"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DIVDIV_VERSION);

  int l = 3, k = 3;
  unsigned seed = 1;

  auto* describe = app.add_subcommand("describe-element", "print the element reference card");
  int samples = 20;
  describe->add_option("--l", l, "polynomial degree l")->default_val(3);
  describe->add_option("--k", k, "degree k (>= 3)")->default_val(3);
  describe->add_option("--samples", samples, "random triangles for conditioning statistics")->default_val(20);
  describe->add_option("--seed", seed)->default_val(1);

  auto* verify = app.add_subcommand("verify-complexes", "rank checks of the polynomial, local and global complexes");
  std::string ks = "3";
  int lv = 0;
  std::string vmesh = "square:2";
  verify->add_option("--k", ks, "k values: 4, 3,4,5 or 3..6")->default_val("3");
  verify->add_option("--l", lv, "l (default: l = k)");
  verify->add_option("--mesh", vmesh, "mesh file or square:n, at most 64 cells")->default_val("square:2");
  verify->add_option("--seed", seed)->default_val(1);

  auto* solve_cmd = app.add_subcommand("solve", "mixed solve of the manufactured clamped plate");
  std::vector<std::string> meshes;
  bool hybrid = false, postprocess = false;
  std::string dump, out;
  solve_cmd->add_option("--mesh", meshes, "mesh file or square:n (repeatable)")->required();
  solve_cmd->add_option("--l", l)->default_val(3);
  solve_cmd->add_option("--k", k)->default_val(3);
  solve_cmd->add_flag("--hybrid", hybrid, "also solve the hybridized system and report the deviation");
  solve_cmd->add_flag("--postprocess", postprocess, "compute u* and |u - u*|_{2,h}");
  solve_cmd->add_option("--dump-system", dump, "write saddle matrices as <prefix>_<level>_mixed.coo");
  solve_cmd->add_option("--out", out, "directory for errors.csv and rates.csv (default: stdout)");

  auto* study = app.add_subcommand("study", "convergence study driven by a key = value config");
  std::string config;
  std::vector<std::string> sets;
  std::string study_out;
  study->add_option("--config", config, "config file")->check(CLI::ExistingFile);
  study->add_option("--set", sets, "override, key=value (repeatable)");
  study->add_option("--out", study_out, "output directory (overrides out_dir)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*describe) {
      describe_element(std::cout, l, k, samples, seed);
      return 0;
    }
    if (*verify) return verify_complexes(ks, lv, vmesh, seed);
    if (*solve_cmd) return solve(meshes, l, k, hybrid, postprocess, dump, out);
    if (*study) {
      StudyConfig cfg;
      if (!config.empty()) {
        std::ifstream in(config);
        cfg.read(in);
      }
      for (const auto& s : sets) cfg.set(s);
      if (!study_out.empty()) cfg.out_dir = study_out;
      try {
        cfg.validate();
      } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
      }
      return run_study(cfg, std::cout);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
