#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qtiling/constructor.hpp"
#include "qtiling/errors.hpp"
#include "qtiling/io.hpp"
#include "qtiling/verify.hpp"

using namespace qt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitSeparation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInput = 4;
constexpr int kExitInconclusive = 5;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output: " + path);
  out << content;
}

TilingDump load_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open dump: " + path);
  return read_tiling_dump(in);
}

int cmd_params(const std::string& eps_str, const std::string& group, int n0,
               int max_index) {
  const Rat eps = rat_from_string(eps_str);
  const int r = choose_r(eps);
  const auto deltas = choose_deltas(eps, r);
  std::cout << "r " << r << "\n";
  std::cout << "deltas";
  for (const auto& d : deltas) std::cout << " " << rat_to_string(d);
  std::cout << "\n";
  FolnerFamily family{group_from_name(group), max_index};
  const auto indices = choose_shape_indices(family, n0, deltas);
  std::cout << "indices";
  for (int n : indices) std::cout << " " << n;
  std::cout << "\n";
  std::cout << "shape-sizes";
  for (int n : indices) std::cout << " " << family.set(n).size();
  std::cout << "\n";
  return kExitOk;
}

int cmd_tile(const std::string& config_path, const std::string& out_path) {
  const Config cfg = load_config(config_path);
  const PipelineResult res = run_tile_pipeline(cfg);
  std::ostringstream dump;
  write_tiling_dump(dump, res.dump);
  const std::string target = !out_path.empty() ? out_path : cfg.output;
  write_output(target, dump.str());
  if (target != "" && target != "-")
    std::cerr << "tiles " << res.dump.tiling.tiling.tile_count()
              << " determined " << res.dump.tiling.determined_window.size()
              << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& dump_path, const std::string& eps_str) {
  const TilingDump dump = load_dump(dump_path);
  const Rat eps = eps_str.empty() ? dump.eps : rat_from_string(eps_str);
  dump.tiling.tiling.validate();

  VerificationReport report;
  {
    CheckResult structural;
    structural.name = "disjoint";
    structural.status = is_disjoint(dump.tiling.tiling) ? CheckStatus::Pass
                                                        : CheckStatus::Fail;
    report.checks.push_back(structural);
  }
  report.checks.push_back(check_eps_disjoint(dump.tiling.tiling, eps));
  if (!dump.indices.empty()) {
    const FinSet f_test = box(dump.tag, dump.indices.back());
    report.checks.push_back(
        check_final_covering(dump.tiling, f_test, dump.tiling.determined_window,
                             eps));
  }
  write_report(std::cout, report);
  if (report.any_failed()) return kExitVerifyFail;
  return report.all_passed() ? kExitOk : kExitInconclusive;
}

int cmd_density(const std::string& dump_path, int radius) {
  const TilingDump dump = load_dump(dump_path);
  const int n = radius > 0
                    ? radius
                    : (dump.indices.empty() ? 1 : dump.indices.back());
  const FinSet f_test = box(dump.tag, n);
  const Rat d = covering_on_window(dump.tiling.tiling, f_test,
                                   dump.tiling.determined_window);
  std::cout << rat_to_string(d) << "\n";
  return kExitOk;
}

int cmd_render(const std::string& dump_path, const std::string& out_path) {
  const TilingDump dump = load_dump(dump_path);
  write_output(out_path, render_svg(dump.tiling));
  return kExitOk;
}

int cmd_selftest() {
  int failures = 0;
  auto expect = [&](bool ok, const char* what) {
    std::cout << (ok ? "ok " : "FAIL ") << what << "\n";
    if (!ok) ++failures;
  };

  expect(choose_r(Rat(1, 2)) == 3, "choose_r(1/2) == 3");
  expect(choose_r(Rat(1, 4)) == 11, "choose_r(1/4) == 11");
  expect(invariance_defect(box(Group::Z, 10), box(Group::Z, 1)) == Rat(2, 21),
         "defect of [-10,10] under [-1,1] is 2/21");
  expect(box(Group::Heisenberg, 1).size() == 23, "Heisenberg unit box");

  std::istringstream cfg_text(
      "group = Z\nalphabet = a,b,c,d\npoint = seed:7\neps = 1/2\n"
      "shape_indices = 2,3,4\nwindow_radius = 40\n");
  const Config cfg = parse_config(cfg_text);
  const PipelineResult res = run_tile_pipeline(cfg);
  expect(res.dump.tiling.tiling.tile_count() > 0, "pipeline produced tiles");
  expect(is_disjoint(res.dump.tiling.tiling), "pipeline tiles disjoint");
  const auto flow = eps_disjoint_flow_check(res.dump.tiling.tiling, cfg.eps);
  expect(flow.feasible, "pipeline tiles eps-disjoint");
  std::ostringstream d1;
  write_tiling_dump(d1, res.dump);
  std::istringstream back(d1.str());
  const TilingDump round = read_tiling_dump(back);
  std::ostringstream d2;
  write_tiling_dump(d2, round);
  expect(d1.str() == d2.str(), "dump round-trip is byte-stable");
  return failures == 0 ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasitiling constructor and verifier"};
  app.require_subcommand(1);

  std::string eps = "1/2", group = "Z", config_path, dump_path, out_path;
  std::string verify_eps;
  int n0 = 1, max_index = 4096, radius = 0;

  auto* params = app.add_subcommand("params", "derive construction parameters");
  params->add_option("--eps", eps, "epsilon as a rational")->required();
  params->add_option("--group", group, "Z, Z2 or H3");
  params->add_option("--n0", n0, "base index");
  params->add_option("--max-index", max_index, "index search bound");

  auto* tile = app.add_subcommand("tile", "construct a quasitiling");
  tile->add_option("--config", config_path, "config file")->required();
  tile->add_option("--out", out_path, "dump output path (- for stdout)");

  auto* verify = app.add_subcommand("verify", "verify a dump");
  verify->add_option("--dump", dump_path, "dump file")->required();
  verify->add_option("--eps", verify_eps, "override epsilon");

  auto* density = app.add_subcommand("density", "covering density of a dump");
  density->add_option("--dump", dump_path, "dump file")->required();
  density->add_option("--radius", radius, "test shape radius");

  auto* render = app.add_subcommand("render", "render a plane dump to SVG");
  render->add_option("--dump", dump_path, "dump file")->required();
  render->add_option("--out", out_path, "SVG output path (- for stdout)");

  app.add_subcommand("selftest", "built-in smoke battery");

  CLI11_PARSE(app, argc, argv);

  try {
    if (params->parsed()) return cmd_params(eps, group, n0, max_index);
    if (tile->parsed()) return cmd_tile(config_path, out_path);
    if (verify->parsed()) return cmd_verify(dump_path, verify_eps);
    if (density->parsed()) return cmd_density(dump_path, radius);
    if (render->parsed()) return cmd_render(dump_path, out_path);
    return cmd_selftest();
  } catch (const SeparationError& e) {
    std::cerr << "separation error: " << e.what() << "\n";
    return kExitSeparation;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
