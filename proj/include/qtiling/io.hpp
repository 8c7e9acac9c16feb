#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qtiling/constructor.hpp"
#include "qtiling/symbolic.hpp"
#include "qtiling/tiling.hpp"
#include "qtiling/verify.hpp"

namespace qt {

// Run configuration, parsed from "key = value" lines ('#' comments).
struct Config {
  Group group = Group::Z;
  std::vector<std::string> alphabet = {"0", "1"};
  std::optional<std::uint64_t> seed;
  std::optional<std::string> point_file;
  Symbol default_symbol = 0;
  Rat eps = Rat(1, 2);
  int n0 = 1;
  int window_radius = 8;
  // Region whose patterns seed the cover; covering guarantees need the
  // candidate neighborhood of every window translate inside it, so the
  // default is window_radius + 2 * n_r + 1.
  int probe_radius = -1;
  int cover_max_radius = 64;
  std::vector<int> shape_indices;  // empty: derive via the index search
  int max_index = 4096;
  bool do_disjointify = true;
  std::string output;
};

Config parse_config(std::istream& in);
Config load_config(const std::string& path);

// Point described by the config: explicit pattern file entries layered
// over the seeded background (or over the constant default symbol).
ShiftPoint point_from_config(const Config& cfg);

GroupElement parse_element(Group tag, const std::string& token);
std::string format_element(const GroupElement& g);

// Canonical, byte-stable dump of a windowed tiling.
struct TilingDump {
  Group tag = Group::Z;
  Rat eps;
  std::vector<int> indices;
  WindowedTiling tiling;
  FinSet support;
};

void write_tiling_dump(std::ostream& out, const TilingDump& dump);
TilingDump read_tiling_dump(std::istream& in);

void write_report(std::ostream& out, const VerificationReport& report);

// Full run described by a config: build the point and the separated
// cover, derive parameters, construct on the window, optionally
// disjointify.  The trace is returned alongside the dump for callers that
// want to verify.
struct PipelineResult {
  ConstructionParams params;
  ConstructionTrace trace;
  TilingDump dump;
};

PipelineResult run_tile_pipeline(const Config& cfg);

// Unit-cell rendering of a plane tiling; deterministic palette keyed by
// shape index.  Z2 only.
std::string render_svg(const WindowedTiling& tiling);

}  // namespace qt
