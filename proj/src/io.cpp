#include "qtiling/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "qtiling/errors.hpp"

namespace qt {

std::string rat_to_string(const Rat& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Rat rat_from_string(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    const Int num(s.substr(0, slash));
    const Int den(s.substr(slash + 1));
    if (den == 0) throw InputError("rational with zero denominator: " + s);
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw InputError("malformed rational: " + s);
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string("malformed ") + what + ": " + s);
  }
}

}  // namespace

GroupElement parse_element(Group tag, const std::string& token) {
  if (token.size() < 2 || token.front() != '(' || token.back() != ')')
    throw InputError("malformed element: " + token);
  const auto parts = split(token.substr(1, token.size() - 2), ',');
  if (parts.size() != group_rank(tag))
    throw InputError("element rank mismatch: " + token);
  std::int64_t c[3] = {0, 0, 0};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    try {
      std::size_t pos = 0;
      c[i] = std::stoll(parts[i], &pos);
      if (pos != parts[i].size()) throw std::invalid_argument(parts[i]);
    } catch (const std::exception&) {
      throw InputError("malformed element: " + token);
    }
  }
  return make_element(tag, c[0], c[1], c[2]);
}

std::string format_element(const GroupElement& g) { return to_string(g); }

Config parse_config(std::istream& in) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError("config line " + std::to_string(lineno) +
                       ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "group") {
      cfg.group = group_from_name(val);
    } else if (key == "alphabet") {
      cfg.alphabet = split(val, ',');
      if (cfg.alphabet.empty() || cfg.alphabet.size() > 255)
        throw InputError("config: alphabet size out of range");
    } else if (key == "point") {
      if (val.rfind("seed:", 0) == 0)
        cfg.seed = std::stoull(val.substr(5));
      else if (val.rfind("file:", 0) == 0)
        cfg.point_file = val.substr(5);
      else
        throw InputError("config: point must be seed:<n> or file:<path>");
    } else if (key == "seed") {
      cfg.seed = std::stoull(val);
    } else if (key == "pattern_file") {
      cfg.point_file = val;
    } else if (key == "default_symbol") {
      cfg.default_symbol = static_cast<Symbol>(parse_int(val, "default_symbol"));
    } else if (key == "eps") {
      cfg.eps = rat_from_string(val);
    } else if (key == "n0") {
      cfg.n0 = parse_int(val, "n0");
    } else if (key == "window_radius") {
      cfg.window_radius = parse_int(val, "window_radius");
    } else if (key == "probe_radius") {
      cfg.probe_radius = parse_int(val, "probe_radius");
    } else if (key == "cover_max_radius") {
      cfg.cover_max_radius = parse_int(val, "cover_max_radius");
    } else if (key == "shape_indices") {
      cfg.shape_indices.clear();
      for (const auto& tok : split(val, ','))
        cfg.shape_indices.push_back(parse_int(tok, "shape index"));
    } else if (key == "max_index") {
      cfg.max_index = parse_int(val, "max_index");
    } else if (key == "disjointify") {
      cfg.do_disjointify = parse_int(val, "disjointify") != 0;
    } else if (key == "output") {
      cfg.output = val;
    } else {
      throw InputError("config: unknown key '" + key + "'");
    }
  }
  if (cfg.default_symbol >= cfg.alphabet.size())
    throw InputError("config: default_symbol outside alphabet");
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config: " + path);
  return parse_config(in);
}

ShiftPoint point_from_config(const Config& cfg) {
  std::unordered_map<GroupElement, Symbol, GroupElementHash> assignments;
  if (cfg.point_file) {
    std::ifstream in(*cfg.point_file);
    if (!in) throw InputError("cannot open pattern file: " + *cfg.point_file);
    std::string tok, sym;
    while (in >> tok >> sym) {
      const GroupElement g = parse_element(cfg.group, tok);
      auto it = std::find(cfg.alphabet.begin(), cfg.alphabet.end(), sym);
      if (it == cfg.alphabet.end())
        throw InputError("pattern symbol outside alphabet: " + sym);
      assignments[g] =
          static_cast<Symbol>(std::distance(cfg.alphabet.begin(), it));
    }
  }
  if (cfg.seed)
    return ShiftPoint::from_pattern_over_seed(cfg.group, cfg.alphabet,
                                              *cfg.seed, std::move(assignments));
  return ShiftPoint::from_pattern(cfg.group, cfg.alphabet, cfg.default_symbol,
                                  std::move(assignments));
}

// ---------------------------------------------------------------------------
// Tiling dump
// ---------------------------------------------------------------------------

void write_tiling_dump(std::ostream& out, const TilingDump& dump) {
  const Quasitiling& t = dump.tiling.tiling;
  out << "quasitiling-dump v1\n";
  out << "group " << group_name(dump.tag) << "\n";
  out << "eps " << rat_to_string(dump.eps) << "\n";
  out << "indices";
  for (int n : dump.indices) out << " " << n;
  out << "\n";
  out << "shapes " << t.shapes().size() << "\n";
  for (std::size_t s = 0; s < t.shapes().size(); ++s) {
    out << "shape " << s << " " << t.shapes()[s].size();
    for (const auto& g : t.shapes()[s].elements()) out << " " << to_string(g);
    out << "\n";
  }
  for (std::size_t s = 0; s < t.shapes().size(); ++s) {
    out << "centers " << s << " " << t.centers()[s].size();
    for (const auto& c : t.centers()[s]) {
      out << " " << to_string(c);
      if (auto p = t.provenance(c))
        out << ":" << p->level << ":" << p->stage;
    }
    out << "\n";
  }
  out << "determined " << dump.tiling.determined_window.size();
  for (const auto& g : dump.tiling.determined_window.elements())
    out << " " << to_string(g);
  out << "\n";
  out << "support " << dump.support.size();
  for (const auto& g : dump.support.elements()) out << " " << to_string(g);
  out << "\n";
  out << "end\n";
}

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

TilingDump read_tiling_dump(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "quasitiling-dump v1")
    throw InputError("dump: missing/unknown header");
  TilingDump dump;
  std::vector<FinSet> shapes;
  std::vector<std::vector<GroupElement>> centers;
  std::vector<std::tuple<GroupElement, TileProvenance>> prov;
  bool have_group = false, have_eps = false, saw_end = false;
  std::size_t declared_shapes = 0;
  std::vector<GroupElement> determined, support;
  while (std::getline(in, line)) {
    const auto toks = tokens_of(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0];
    if (head == "group") {
      if (toks.size() != 2) throw InputError("dump: malformed group line");
      dump.tag = group_from_name(toks[1]);
      have_group = true;
    } else if (head == "eps") {
      if (toks.size() != 2) throw InputError("dump: malformed eps line");
      dump.eps = rat_from_string(toks[1]);
      have_eps = true;
    } else if (head == "indices") {
      for (std::size_t i = 1; i < toks.size(); ++i)
        dump.indices.push_back(parse_int(toks[i], "dump index"));
    } else if (head == "shapes") {
      if (toks.size() != 2) throw InputError("dump: malformed shapes line");
      declared_shapes = static_cast<std::size_t>(parse_int(toks[1], "shapes"));
      shapes.assign(declared_shapes, FinSet(dump.tag));
      centers.assign(declared_shapes, {});
    } else if (head == "shape") {
      if (toks.size() < 3) throw InputError("dump: malformed shape line");
      const auto idx = static_cast<std::size_t>(parse_int(toks[1], "shape id"));
      const auto count = static_cast<std::size_t>(parse_int(toks[2], "size"));
      if (idx >= declared_shapes || toks.size() != 3 + count)
        throw InputError("dump: shape line inconsistent");
      std::vector<GroupElement> elems;
      for (std::size_t i = 3; i < toks.size(); ++i)
        elems.push_back(parse_element(dump.tag, toks[i]));
      shapes[idx] = FinSet(dump.tag, std::move(elems));
    } else if (head == "centers") {
      if (toks.size() < 3) throw InputError("dump: malformed centers line");
      const auto idx = static_cast<std::size_t>(parse_int(toks[1], "shape id"));
      const auto count = static_cast<std::size_t>(parse_int(toks[2], "count"));
      if (idx >= declared_shapes || toks.size() != 3 + count)
        throw InputError("dump: centers line inconsistent");
      for (std::size_t i = 3; i < toks.size(); ++i) {
        std::string tok = toks[i];
        const auto colon = tok.find(':');
        if (colon != std::string::npos) {
          const auto rest = split(tok.substr(colon + 1), ':');
          if (rest.size() != 2) throw InputError("dump: bad provenance");
          const GroupElement c = parse_element(dump.tag, tok.substr(0, colon));
          prov.emplace_back(c, TileProvenance{parse_int(rest[0], "level"),
                                              parse_int(rest[1], "stage")});
          centers[idx].push_back(c);
        } else {
          centers[idx].push_back(parse_element(dump.tag, tok));
        }
      }
    } else if (head == "determined") {
      for (std::size_t i = 2; i < toks.size(); ++i)
        determined.push_back(parse_element(dump.tag, toks[i]));
      if (toks.size() < 2 ||
          toks.size() != 2 + static_cast<std::size_t>(
                                 parse_int(toks[1], "determined count")))
        throw InputError("dump: determined line inconsistent");
    } else if (head == "support") {
      for (std::size_t i = 2; i < toks.size(); ++i)
        support.push_back(parse_element(dump.tag, toks[i]));
      if (toks.size() < 2 ||
          toks.size() != 2 + static_cast<std::size_t>(
                                 parse_int(toks[1], "support count")))
        throw InputError("dump: support line inconsistent");
    } else if (head == "end") {
      saw_end = true;
      break;
    } else {
      throw InputError("dump: unknown record '" + head + "'");
    }
  }
  if (!saw_end || !have_group || !have_eps)
    throw InputError("dump: truncated");
  Quasitiling t(dump.tag, std::move(shapes), std::move(centers));
  for (const auto& [c, p] : prov) t.set_provenance(c, p);
  dump.tiling.tiling = std::move(t);
  dump.tiling.determined_window = FinSet(dump.tag, std::move(determined));
  dump.support = FinSet(dump.tag, std::move(support));
  return dump;
}

void write_report(std::ostream& out, const VerificationReport& report) {
  for (const auto& c : report.checks) {
    out << "check " << c.name << " " << check_status_name(c.status) << "\n";
    for (const auto& [k, v] : c.metrics)
      out << "  metric " << k << " " << v << "\n";
    if (!c.note.empty()) out << "  note " << c.note << "\n";
  }
  out << (report.any_failed()
              ? "result fail"
              : (report.all_passed() ? "result pass" : "result inconclusive"))
      << "\n";
}

PipelineResult run_tile_pipeline(const Config& cfg) {
  FolnerFamily family{cfg.group, cfg.max_index};
  const ShiftPoint x = point_from_config(cfg);

  std::vector<int> indices = cfg.shape_indices;
  if (indices.empty())
    indices = choose_shape_indices(family, cfg.n0,
                                   choose_deltas(cfg.eps, choose_r(cfg.eps)));
  FinSet ftilde = family.set(indices.front());
  for (std::size_t i = 1; i < indices.size(); ++i)
    ftilde = set_union(ftilde, family.set(indices[i]));

  const int probe_radius =
      cfg.probe_radius >= 0
          ? cfg.probe_radius
          : cfg.window_radius + 2 * indices.back() + 1;
  auto cover = std::make_shared<SeparatedCover>(build_separated_cover(
      {x}, ftilde, box(cfg.group, probe_radius), cfg.cover_max_radius));
  const ConstructionParams params =
      make_params(cfg.eps, cfg.n0, family, cover, cfg.shape_indices);

  // The engine must classify candidacy for every position whose status can
  // influence the window: the whole probe region plus one tile diameter.
  // Beyond the probe region patterns fall outside the cover, so candidacy
  // is definitely absent there and the unknown fringe at the computation
  // edge stays away from every live candidate.
  const int pad = 2 * params.indices.back() + 2;
  const FinSet window = box(cfg.group, probe_radius + pad);
  ConstructionTrace trace = construct_dynamical(x, params, window);
  WindowedTiling view =
      cfg.do_disjointify ? disjointify(trace) : trace.hat_tiling();
  // Guarantees are claimed on the requested window only; near the probe
  // edge would-be centers fall outside the cover and covering degrades.
  view.determined_window = set_intersection(
      view.determined_window, box(cfg.group, cfg.window_radius));

  PipelineResult out{params, std::move(trace), {}};
  out.dump.tag = cfg.group;
  out.dump.eps = cfg.eps;
  out.dump.indices = params.indices;
  out.dump.tiling = std::move(view);
  out.dump.support = out.trace.query_support;
  return out;
}

std::string render_svg(const WindowedTiling& tiling) {
  if (tiling.tiling.tag() != Group::Z2)
    throw PreconditionError("render_svg: only plane tilings are supported");
  std::int64_t min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  bool any = false;
  auto see = [&](const GroupElement& g) {
    if (!any) {
      min_x = max_x = g.c[0];
      min_y = max_y = g.c[1];
      any = true;
    } else {
      min_x = std::min(min_x, g.c[0]);
      max_x = std::max(max_x, g.c[0]);
      min_y = std::min(min_y, g.c[1]);
      max_y = std::max(max_y, g.c[1]);
    }
  };
  for (const auto& g : tiling.determined_window.elements()) see(g);
  const auto& shapes = tiling.tiling.shapes();
  for (std::size_t s = 0; s < shapes.size(); ++s)
    for (const auto& c : tiling.tiling.centers()[s])
      for (const auto& f : shapes[s].elements()) see(mul(f, c));
  if (!any) min_x = max_x = min_y = max_y = 0;

  std::ostringstream svg;
  const std::int64_t w = max_x - min_x + 1, h = max_y - min_y + 1;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w * 10
      << " " << h * 10 << "\">\n";
  svg << "<rect width=\"" << w * 10 << "\" height=\"" << h * 10
      << "\" fill=\"#f4f4f4\"/>\n";
  auto cell_xy = [&](const GroupElement& g) {
    return std::make_pair((g.c[0] - min_x) * 10, (max_y - g.c[1]) * 10);
  };
  for (const auto& g : tiling.determined_window.elements()) {
    auto [x, y] = cell_xy(g);
    svg << "<rect x=\"" << x << "\" y=\"" << y
        << "\" width=\"10\" height=\"10\" fill=\"#ffffff\"/>\n";
  }
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    const int hue = static_cast<int>((s * 137) % 360);
    for (const auto& c : tiling.tiling.centers()[s]) {
      for (const auto& f : shapes[s].elements()) {
        auto [x, y] = cell_xy(mul(f, c));
        svg << "<rect x=\"" << x << "\" y=\"" << y
            << "\" width=\"10\" height=\"10\" fill=\"hsl(" << hue
            << ",65%,70%)\" stroke=\"hsl(" << hue << ",65%,40%)\" "
            << "stroke-width=\"0.5\"/>\n";
      }
      auto [cx, cy] = cell_xy(c);
      svg << "<circle cx=\"" << cx + 5 << "\" cy=\"" << cy + 5
          << "\" r=\"1.6\" fill=\"#222222\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace qt
