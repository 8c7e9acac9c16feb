#include "qtiling/symbolic.hpp"

#include <algorithm>

#include "qtiling/errors.hpp"

namespace qt {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Symbol generated_symbol(std::uint64_t seed, const GroupElement& g,
                        std::size_t alphabet_size) {
  std::uint64_t h = splitmix(seed ^ (0xa5ull + static_cast<std::uint64_t>(g.tag)));
  for (auto v : g.c) h = splitmix(h ^ static_cast<std::uint64_t>(v));
  return static_cast<Symbol>(h % alphabet_size);
}

}  // namespace

struct ShiftPoint::State {
  Group tag;
  std::vector<std::string> alphabet;
  std::unordered_map<GroupElement, Symbol, GroupElementHash> assignments;
  bool seeded = false;
  std::uint64_t seed = 0;
  Symbol default_symbol = 0;

  mutable std::mutex mutex;
  mutable std::unordered_map<GroupElement, Symbol, GroupElementHash> memo;

  Symbol eval(const GroupElement& g) const {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = memo.find(g);
    if (it != memo.end()) return it->second;
    Symbol s;
    if (auto ait = assignments.find(g); ait != assignments.end())
      s = ait->second;
    else if (seeded)
      s = generated_symbol(seed, g, alphabet.size());
    else
      s = default_symbol;
    memo.emplace(g, s);
    return s;
  }
};

ShiftPoint ShiftPoint::from_pattern(
    Group tag, std::vector<std::string> alphabet, Symbol default_symbol,
    std::unordered_map<GroupElement, Symbol, GroupElementHash> assignments) {
  if (alphabet.empty()) throw PreconditionError("ShiftPoint: empty alphabet");
  ShiftPoint p;
  p.state_ = std::make_shared<State>();
  p.state_->tag = tag;
  p.state_->alphabet = std::move(alphabet);
  p.state_->assignments = std::move(assignments);
  p.state_->default_symbol = default_symbol;
  p.offset_ = identity(tag);
  return p;
}

ShiftPoint ShiftPoint::from_seed(Group tag, std::vector<std::string> alphabet,
                                 std::uint64_t seed) {
  ShiftPoint p = from_pattern(tag, std::move(alphabet), 0, {});
  p.state_->seeded = true;
  p.state_->seed = seed;
  return p;
}

ShiftPoint ShiftPoint::from_pattern_over_seed(
    Group tag, std::vector<std::string> alphabet, std::uint64_t seed,
    std::unordered_map<GroupElement, Symbol, GroupElementHash> assignments) {
  ShiftPoint p = from_pattern(tag, std::move(alphabet), 0, std::move(assignments));
  p.state_->seeded = true;
  p.state_->seed = seed;
  return p;
}

Group ShiftPoint::tag() const { return state_->tag; }

const std::vector<std::string>& ShiftPoint::alphabet() const {
  return state_->alphabet;
}

Symbol ShiftPoint::eval(const GroupElement& g) const {
  if (g.tag != state_->tag) throw TagMismatchError("ShiftPoint: wrong tag");
  return state_->eval(shifted_ ? mul(g, offset_) : g);
}

ShiftPoint ShiftPoint::shifted(const GroupElement& g) const {
  ShiftPoint p = *this;
  p.offset_ = shifted_ ? mul(g, offset_) : g;
  p.shifted_ = !(p.offset_ == identity(state_->tag));
  return p;
}

FinSet ShiftPoint::support_snapshot() const {
  std::lock_guard<std::mutex> lock(state_->mutex);
  std::vector<GroupElement> elems;
  elems.reserve(state_->memo.size());
  for (const auto& [g, s] : state_->memo) elems.push_back(g);
  return FinSet(state_->tag, std::move(elems));
}

std::size_t ShiftPoint::support_size() const {
  std::lock_guard<std::mutex> lock(state_->mutex);
  return state_->memo.size();
}

std::unordered_map<GroupElement, Symbol, GroupElementHash>
ShiftPoint::memo_snapshot() const {
  std::lock_guard<std::mutex> lock(state_->mutex);
  return state_->memo;
}

Symbol eval_point(const ShiftPoint& x, const GroupElement& g) {
  return x.eval(g);
}

Symbol shift_eval(const ShiftPoint& x, const GroupElement& g,
                  const GroupElement& h) {
  return x.eval(mul(h, g));
}

bool in_cylinder(const ShiftPoint& x, const CylinderSpec& U,
                 const GroupElement& g) {
  const auto& elems = U.window.elements();
  for (std::size_t i = 0; i < elems.size(); ++i)
    if (x.eval(mul(elems[i], g)) != U.pattern[i]) return false;
  return true;
}

std::vector<Symbol> pattern_at(const ShiftPoint& x, const FinSet& V,
                               const GroupElement& g) {
  std::vector<Symbol> p;
  p.reserve(V.size());
  for (const auto& v : V) p.push_back(x.eval(mul(v, g)));
  return p;
}

std::uint64_t pattern_hash(const std::vector<Symbol>& p) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (Symbol s : p) {
    h ^= s;
    h *= 0x100000001b3ull;
  }
  return splitmix(h);
}

SeparatedCover::SeparatedCover(FinSet window,
                               std::vector<std::vector<Symbol>> patterns,
                               FinSet separating_set, bool check)
    : window_(std::move(window)),
      patterns_(std::move(patterns)),
      ftilde_(std::move(separating_set)) {
  for (const auto& p : patterns_)
    if (p.size() != window_.size())
      throw PreconditionError("SeparatedCover: pattern/window size mismatch");
  index_patterns();
  if (check) verify_separation();
}

void SeparatedCover::index_patterns() {
  by_hash_.clear();
  for (std::size_t i = 0; i < patterns_.size(); ++i)
    by_hash_[pattern_hash(patterns_[i])].push_back(i);
}

CylinderSpec SeparatedCover::cylinder(std::size_t i) const {
  return CylinderSpec{window_, patterns_[i]};
}

std::optional<std::size_t> SeparatedCover::pattern_index(
    const std::vector<Symbol>& p) const {
  auto it = by_hash_.find(pattern_hash(p));
  if (it == by_hash_.end()) return std::nullopt;
  for (std::size_t i : it->second)
    if (patterns_[i] == p) return i;
  return std::nullopt;
}

std::optional<GroupElement> SeparatedCover::conflict_witness(
    std::size_t i, const GroupElement& d) const {
  const auto& elems = window_.elements();
  const auto& p = patterns_[i];
  for (std::size_t a = 0; a < elems.size(); ++a) {
    GroupElement vd = mul(elems[a], d);
    auto it = std::lower_bound(elems.begin(), elems.end(), vd);
    if (it == elems.end() || !(*it == vd)) continue;
    std::size_t b = static_cast<std::size_t>(it - elems.begin());
    if (p[a] != p[b]) return elems[a];
  }
  return std::nullopt;
}

std::vector<GroupElement> SeparatedCover::difference_set() const {
  std::unordered_set<GroupElement, GroupElementHash> ds;
  GroupElement e = identity(window_.tag());
  for (const auto& g : ftilde_)
    for (const auto& gp : ftilde_) {
      if (g == gp) continue;
      ds.insert(mul(inv(g), gp));
      ds.insert(mul(g, inv(gp)));
    }
  ds.erase(e);
  std::vector<GroupElement> out(ds.begin(), ds.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<GroupElement> SeparatedCover::certificate(
    std::size_t i, const GroupElement& g, const GroupElement& gp) const {
  return conflict_witness(i, mul(inv(g), gp));
}

void SeparatedCover::verify_separation() const {
  auto ds = difference_set();
  for (std::size_t i = 0; i < patterns_.size(); ++i)
    for (const auto& d : ds)
      if (!conflict_witness(i, d))
        throw SeparationError("cover not separated: cylinder " +
                              std::to_string(i) + " has no conflict for shift " +
                              to_string(d));
}

SeparatedCover build_separated_cover(const std::vector<ShiftPoint>& samples,
                                     const FinSet& ftilde,
                                     const FinSet& probe_window,
                                     int max_radius) {
  if (samples.empty())
    throw PreconditionError("build_separated_cover: no samples");
  Group tag = samples[0].tag();

  // Pair differences inv(g)*g' (and the mirrored form), with one
  // representative pair retained for error reporting.
  std::unordered_map<GroupElement, std::pair<GroupElement, GroupElement>,
                     GroupElementHash>
      diff_pairs;
  GroupElement e = identity(tag);
  for (const auto& g : ftilde)
    for (const auto& gp : ftilde) {
      if (g == gp) continue;
      diff_pairs.emplace(mul(inv(g), gp), std::make_pair(g, gp));
      diff_pairs.emplace(mul(g, inv(gp)), std::make_pair(g, gp));
    }
  diff_pairs.erase(e);
  std::vector<GroupElement> diffs;
  diffs.reserve(diff_pairs.size());
  for (const auto& [d, pr] : diff_pairs) diffs.push_back(d);
  std::sort(diffs.begin(), diffs.end());

  std::string last_failure;
  for (int radius = 0; radius <= max_radius; ++radius) {
    FinSet V = box(tag, radius);

    // Geometric prefilter: every difference must land some window cell on
    // another window cell, otherwise no pattern can conflict with its shift.
    bool geometry_ok = true;
    for (const auto& d : diffs) {
      bool overlap = false;
      for (const auto& v : V)
        if (V.contains(mul(v, d))) {
          overlap = true;
          break;
        }
      if (!overlap) {
        geometry_ok = false;
        last_failure = "window box(" + std::to_string(radius) +
                       ") cannot reach shift " + to_string(d);
        break;
      }
    }
    if (!geometry_ok) continue;

    // Patterns in first-observation order.
    std::vector<std::vector<Symbol>> patterns;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
    for (const auto& s : samples)
      for (const auto& g : probe_window) {
        auto p = pattern_at(s, V, g);
        auto h = pattern_hash(p);
        auto& bucket = seen[h];
        bool fresh = true;
        for (std::size_t i : bucket)
          if (patterns[i] == p) {
            fresh = false;
            break;
          }
        if (fresh) {
          bucket.push_back(patterns.size());
          patterns.push_back(std::move(p));
        }
      }

    SeparatedCover cover(V, patterns, ftilde, /*check=*/false);
    bool separated = true;
    for (std::size_t i = 0; i < patterns.size() && separated; ++i)
      for (const auto& d : diffs) {
        if (!cover.conflict_witness(i, d)) {
          const auto& pr = diff_pairs.at(d);
          last_failure = "cylinder " + std::to_string(i) +
                         " unseparated for pair (" + to_string(pr.first) +
                         ", " + to_string(pr.second) + ")";
          separated = false;
          break;
        }
      }
    if (separated) return cover;
  }
  throw SeparationError("build_separated_cover: max radius " +
                        std::to_string(max_radius) + " reached; " +
                        last_failure);
}

}  // namespace qt
