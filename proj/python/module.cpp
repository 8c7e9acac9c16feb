#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qtiling/constructor.hpp"
#include "qtiling/errors.hpp"
#include "qtiling/folner.hpp"
#include "qtiling/io.hpp"
#include "qtiling/verify.hpp"

namespace py = pybind11;
using namespace qt;

namespace {

std::vector<std::int64_t> coords_of(const GroupElement& g) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < group_rank(g.tag); ++i) out.push_back(g.c[i]);
  return out;
}

GroupElement element_of(Group tag, const std::vector<std::int64_t>& c) {
  if (c.size() != group_rank(tag))
    throw PreconditionError("coordinate count does not match group rank");
  std::int64_t a = c.size() > 0 ? c[0] : 0;
  std::int64_t b = c.size() > 1 ? c[1] : 0;
  std::int64_t d = c.size() > 2 ? c[2] : 0;
  return make_element(tag, a, b, d);
}

}  // namespace

PYBIND11_MODULE(_qtiling, m) {
  m.doc() = "quasitiling core bindings";

  py::register_exception<InputError>(m, "InputError");
  py::register_exception<InfeasibleError>(m, "InfeasibleError");
  py::register_exception<SeparationError>(m, "SeparationError");

  m.def("group_names", [] {
    return std::vector<std::string>{"Z", "Z2", "H3"};
  });

  m.def("mul", [](const std::string& group, std::vector<std::int64_t> a,
                  std::vector<std::int64_t> b) {
    const Group tag = group_from_name(group);
    return coords_of(mul(element_of(tag, a), element_of(tag, b)));
  });
  m.def("inv", [](const std::string& group, std::vector<std::int64_t> a) {
    const Group tag = group_from_name(group);
    return coords_of(inv(element_of(tag, a)));
  });
  m.def("box_size", [](const std::string& group, int n) {
    return box(group_from_name(group), n).size();
  });
  m.def("invariance_defect",
        [](const std::string& group, int t_radius, int k_radius) {
          const Group tag = group_from_name(group);
          return rat_to_string(invariance_defect(box(tag, t_radius),
                                                 box(tag, k_radius)));
        });

  m.def("choose_r",
        [](const std::string& eps) { return choose_r(rat_from_string(eps)); });
  m.def("choose_deltas", [](const std::string& eps, int r) {
    std::vector<std::string> out;
    for (const auto& d : choose_deltas(rat_from_string(eps), r))
      out.push_back(rat_to_string(d));
    return out;
  });
  m.def(
      "choose_shape_indices",
      [](const std::string& group, int n0,
         const std::vector<std::string>& deltas, int max_index) {
        FolnerFamily family{group_from_name(group), max_index};
        std::vector<Rat> ds;
        for (const auto& d : deltas) ds.push_back(rat_from_string(d));
        return choose_shape_indices(family, n0, ds);
      },
      py::arg("group"), py::arg("n0"), py::arg("deltas"),
      py::arg("max_index") = 4096);

  m.def("run_tile", [](const std::string& config_text) {
    std::istringstream in(config_text);
    const Config cfg = parse_config(in);
    const PipelineResult res = run_tile_pipeline(cfg);
    std::ostringstream out;
    write_tiling_dump(out, res.dump);
    return out.str();
  });

  m.def("dump_tile_count", [](const std::string& dump_text) {
    std::istringstream in(dump_text);
    return read_tiling_dump(in).tiling.tiling.tile_count();
  });
  m.def("dump_is_disjoint", [](const std::string& dump_text) {
    std::istringstream in(dump_text);
    return is_disjoint(read_tiling_dump(in).tiling.tiling);
  });
  m.def("dump_eps_disjoint", [](const std::string& dump_text,
                                const std::string& eps) {
    std::istringstream in(dump_text);
    const TilingDump d = read_tiling_dump(in);
    return eps_disjoint_flow_check(d.tiling.tiling, rat_from_string(eps))
        .feasible;
  });
  m.def("dump_roundtrip", [](const std::string& dump_text) {
    std::istringstream in(dump_text);
    const TilingDump d = read_tiling_dump(in);
    std::ostringstream out;
    write_tiling_dump(out, d);
    return out.str();
  });
  m.def("render_svg", [](const std::string& dump_text) {
    std::istringstream in(dump_text);
    return render_svg(read_tiling_dump(in).tiling);
  });
}
