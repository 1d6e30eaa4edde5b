#include "zslab/atoms.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "zslab/error.hpp"

namespace zslab {

namespace {

// Depth-first walk over zero-sum free sequences in non-decreasing element
// order. Node state: the terms so far, their sum and the set of nonempty
// subsums. An extension by g keeps the sequence zero-sum free iff -g is not
// already a subsum.
struct ZeroSumFreeWalk {
  const Group& group;
  const std::vector<Elem>& g0;
  const std::vector<int>& caps;
  std::vector<int> used;
  std::vector<Elem> terms;

  ZeroSumFreeWalk(const Group& grp, const std::vector<Elem>& support, const std::vector<int>& cap)
      : group(grp), g0(support), caps(cap), used(grp.size(), 0) {}

  bool can_use(Elem g) const { return caps.empty() || used[g] < caps[g]; }

  template <class Node>
  void descend(std::size_t from, Elem sum, const ElementSet& reach, Node& on_node) {
    if (!on_node(terms, sum, reach, from)) return;
    for (std::size_t pos = from; pos < g0.size(); ++pos) {
      const Elem g = g0[pos];
      if (!can_use(g) || reach.test(group.neg(g)) || g == group.neg(sum)) continue;
      ElementSet next = reach;
      fold_term(group, next, g);
      terms.push_back(g);
      ++used[g];
      descend(pos, group.add(sum, g), next, on_node);
      --used[g];
      terms.pop_back();
    }
  }
};

std::vector<int> positions(const Group& group, const std::vector<Elem>& g0) {
  std::vector<int> pos(group.size(), -1);
  for (std::size_t i = 0; i < g0.size(); ++i) pos[g0[i]] = static_cast<int>(i);
  return pos;
}

std::uint64_t fnv1a(const std::vector<Elem>& xs) {
  std::uint64_t h = 1469598103934665603ULL;
  for (Elem x : xs) {
    for (int b = 0; b < 4; ++b) {
      h ^= (x >> (8 * b)) & 0xFFU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

} // namespace

std::vector<Elem> nonzero_elements(const Group& group) {
  std::vector<Elem> out;
  for (int g = 1; g < group.size(); ++g) out.push_back(static_cast<Elem>(g));
  return out;
}

TablePtr AtomTable::assemble(GroupPtr group, std::vector<Elem> g0, std::vector<Sequence> atoms, std::vector<int> caps) {
  auto table = std::shared_ptr<AtomTable>(new AtomTable());
  std::sort(g0.begin(), g0.end());
  std::sort(atoms.begin(), atoms.end(), canonical_less);
  table->group_ = group;
  table->g0_ = std::move(g0);
  table->caps_ = std::move(caps);
  table->by_element_.assign(group->size(), {});
  table->by_least_.assign(group->size(), {});
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Sequence& a = atoms[i];
    table->davenport_ = std::max(table->davenport_, a.length());
    SparseAtom sp;
    sp.length = a.length();
    for (Elem g : a.support()) {
      sp.terms.emplace_back(g, static_cast<Count>(a.multiplicity(g)));
      table->by_element_[g].push_back(static_cast<int>(i));
    }
    table->by_least_[sp.terms.front().first].push_back(static_cast<int>(i));
    table->sparse_.push_back(std::move(sp));
    if (!table->lookup_.emplace(a, static_cast<int>(i)).second) throw ValidationError("duplicate atom " + a.to_string());
  }
  table->atoms_ = std::move(atoms);
  return table;
}

std::optional<int> AtomTable::find(const Sequence& s) const {
  auto it = lookup_.find(s);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

bool AtomTable::operator==(const AtomTable& other) const {
  return group_->spec() == other.group_->spec() && g0_ == other.g0_ && caps_ == other.caps_ && atoms_ == other.atoms_;
}

void for_each_zero_sum_free(const Group& group, const std::vector<Elem>& g0, const std::vector<int>& caps,
                            const ZeroSumFreeVisitor& visit) {
  std::vector<Elem> sorted = g0;
  std::sort(sorted.begin(), sorted.end());
  // the guard on -sum in descend only serves atom emission; here every
  // zero-sum free extension must be visited, so walk without it
  struct Plain {
    const Group& group;
    const std::vector<Elem>& g0;
    const std::vector<int>& caps;
    std::vector<int> used;
    std::vector<Elem> terms;
    const ZeroSumFreeVisitor& visit;
    void descend(std::size_t from, Elem sum, const ElementSet& reach) {
      if (!visit(terms, sum, reach)) return;
      for (std::size_t pos = from; pos < g0.size(); ++pos) {
        const Elem g = g0[pos];
        if ((!caps.empty() && used[g] >= caps[g]) || reach.test(group.neg(g)) || g == Group::zero()) continue;
        ElementSet next = reach;
        fold_term(group, next, g);
        terms.push_back(g);
        ++used[g];
        descend(pos, group.add(sum, g), next);
        --used[g];
        terms.pop_back();
      }
    }
  };
  Plain plain{group, sorted, caps, std::vector<int>(group.size(), 0), {}, visit};
  plain.descend(0, Group::zero(), ElementSet(group.size()));
}

TablePtr enumerate_atoms(const GroupPtr& group, std::vector<Elem> g0, const AtomOptions& options) {
  std::sort(g0.begin(), g0.end());
  g0.erase(std::unique(g0.begin(), g0.end()), g0.end());
  if (g0.empty()) throw InvalidArgument("enumerate_atoms: g0 must be nonempty");
  if (g0.front() == Group::zero()) throw InvalidArgument("enumerate_atoms: 0 must not be in g0");
  for (Elem g : g0)
    if (static_cast<int>(g) >= group->size()) throw InvalidArgument("enumerate_atoms: element outside the group");
  if (!options.caps.empty() && static_cast<int>(options.caps.size()) != group->size())
    throw InvalidArgument("enumerate_atoms: caps must have one entry per element");

  const Group& grp = *group;
  const std::vector<int> pos_of = positions(grp, g0);
  std::atomic<std::size_t> found{0};
  std::vector<std::vector<Sequence>> per_task(g0.size());

  // Each task owns the subtree whose first term is g0[first].
  parallel_for(options.parallel, g0.size(), [&](std::size_t first) {
    ZeroSumFreeWalk walk(grp, g0, options.caps);
    auto& out = per_task[first];
    auto on_node = [&](const std::vector<Elem>& terms, Elem sum, const ElementSet&, std::size_t from) {
      if (terms.empty()) return true;
      const Elem need = grp.neg(sum);
      // T zero-sum free and sigma(T*need) = 0 makes T*need minimal; requiring
      // need to come last in canonical order emits each atom once
      if (pos_of[need] >= static_cast<int>(from) && walk.can_use(need)) {
        Sequence atom = Sequence::from_terms(group, terms);
        atom.add(need);
        out.push_back(std::move(atom));
        if (found.fetch_add(1) + 1 > options.limit)
          throw ResourceLimit("atom count exceeds the limit of " + std::to_string(options.limit));
      }
      return true;
    };
    const Elem g = g0[first];
    if (!walk.can_use(g)) return;
    ElementSet reach(grp.size());
    fold_term(grp, reach, g);
    walk.terms.push_back(g);
    ++walk.used[g];
    walk.descend(first, g, reach, on_node);
  });

  std::vector<Sequence> atoms;
  atoms.reserve(found.load());
  for (auto& part : per_task)
    for (auto& a : part) atoms.push_back(std::move(a));
  return AtomTable::assemble(group, std::move(g0), std::move(atoms), options.caps);
}

TablePtr enumerate_atoms(const GroupPtr& group) { return enumerate_atoms(group, nonzero_elements(*group)); }

TablePtr atoms_dividing(const Sequence& s) {
  const auto support = s.support();
  if (support.empty()) throw InvalidArgument("atoms_dividing: empty sequence");
  std::vector<int> caps(s.group()->size(), 0);
  for (Elem g : support) caps[g] = s.multiplicity(g);
  AtomOptions options;
  options.caps = std::move(caps);
  return enumerate_atoms(s.group(), support, options);
}

int davenport(const GroupSpec& spec) {
  if (spec.cardinality() == 1) return 1;
  return enumerate_atoms(Group::make(spec))->davenport();
}

// ---------------------------------------------------------------------------
// Cache file: header, one JSON atom per line, trailer.

void save_table(const AtomTable& table, const std::string& path) {
  if (table.bounded()) throw InvalidArgument("save_table: only complete (uncapped) tables can be saved");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << "ZSATOMS v1 group=" << table.group()->spec().to_string() << " g0=" << table.g0().size() << "\n";
  for (const Sequence& a : table.atoms()) out << sequence_to_json(a).dump() << "\n";
  out << "count=" << table.size() << " davenport=" << table.davenport() << "\n";
  if (!out) throw Error("write failed for " + path);
}

TablePtr load_table(const std::string& path, const GroupSpec* expected, bool trusted) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty atom file " + path);
  std::istringstream header(line);
  std::string magic, version, group_field, g0_field;
  header >> magic >> version >> group_field >> g0_field;
  if (magic != "ZSATOMS") throw ValidationError("not an atom file: " + path);
  if (version != "v1") throw ValidationError("unsupported atom file version '" + version + "' (expected v1)");
  if (group_field.rfind("group=", 0) != 0 || g0_field.rfind("g0=", 0) != 0) throw ValidationError("malformed atom file header");
  const GroupSpec spec = GroupSpec::parse(group_field.substr(6));
  if (expected && *expected != spec)
    throw ValidationError("atom file is for group " + spec.to_string() + ", requested " + expected->to_string());
  std::size_t g0_count = 0;
  try {
    g0_count = std::stoul(g0_field.substr(3));
  } catch (const std::exception&) {
    throw ValidationError("malformed g0 count in atom file header");
  }
  const GroupPtr group = Group::make(spec);

  std::vector<Sequence> atoms;
  bool saw_trailer = false;
  std::size_t declared_count = 0;
  int declared_davenport = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("count=", 0) == 0) {
      if (std::sscanf(line.c_str(), "count=%zu davenport=%d", &declared_count, &declared_davenport) != 2)
        throw ValidationError("malformed atom file trailer");
      saw_trailer = true;
      break;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw ValidationError("corrupted atom entry: " + line);
    }
    SequenceLimits limits;
    limits.max_multiplicity = group->size();
    Sequence atom = sequence_from_json(group, j, limits);
    if (!trusted && !is_minimal_zero_sum(atom)) throw ValidationError("entry is not a minimal zero-sum sequence: " + atom.to_string());
    atoms.push_back(std::move(atom));
  }
  if (!saw_trailer) throw ValidationError("atom file is truncated (no trailer)");
  if (declared_count != atoms.size()) throw ValidationError("atom count in trailer does not match the entries");

  std::vector<Elem> g0;
  if (static_cast<int>(g0_count) == group->size() - 1) {
    g0 = nonzero_elements(*group);
  } else {
    // a complete table contains g^ord(g) for every g in g0
    std::vector<bool> seen(group->size(), false);
    for (const auto& a : atoms)
      for (Elem g : a.support()) seen[g] = true;
    for (int g = 1; g < group->size(); ++g)
      if (seen[g]) g0.push_back(static_cast<Elem>(g));
    if (g0.size() != g0_count) throw ValidationError("atom file support does not match its declared g0 size");
  }
  TablePtr table = AtomTable::assemble(group, g0, std::move(atoms));
  if (declared_davenport != table->davenport() && !(table->size() == 0 && declared_davenport == 0))
    throw ValidationError("davenport value in trailer does not match the entries");
  if (!trusted) {
    TablePtr fresh = enumerate_atoms(group, g0);
    if (!(*fresh == *table))
      throw ValidationError("atom file is incomplete or inconsistent: re-enumeration finds " + std::to_string(fresh->size()) +
                            " atoms, file has " + std::to_string(table->size()));
  }
  return table;
}

AtomCache::AtomCache(std::string directory, Parallelism parallel)
    : directory_(std::move(directory)), parallel_(parallel) {}

std::string AtomCache::path_for(const GroupSpec& spec, const std::vector<Elem>& g0, bool full) const {
  std::string name = "atoms-v1-";
  for (std::size_t i = 0; i < spec.factors().size(); ++i) name += (i ? "x" : "") + std::to_string(spec.factors()[i]);
  if (spec.factors().empty()) name += "1";
  if (full) {
    name += "-full";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "-%016llx", static_cast<unsigned long long>(fnv1a(g0)));
    name += buf;
  }
  return (std::filesystem::path(directory_) / (name + ".zsa")).string();
}

TablePtr AtomCache::get(const GroupPtr& group) { return get(group, nonzero_elements(*group)); }

TablePtr AtomCache::get(const GroupPtr& group, const std::vector<Elem>& g0_in) {
  std::vector<Elem> g0 = g0_in;
  std::sort(g0.begin(), g0.end());
  const bool full = static_cast<int>(g0.size()) == group->size() - 1;
  const std::string path = path_for(group->spec(), g0, full);
  if (std::filesystem::exists(path)) {
    try {
      TablePtr t = load_table(path, &group->spec(), false);
      if (t->g0() == g0) return t;
    } catch (const Error&) {
      // advisory cache: fall through to recomputation
    }
  }
  AtomOptions options;
  options.parallel = parallel_;
  TablePtr table = enumerate_atoms(group, g0, options);
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  const std::string tmp = path + ".tmp";
  try {
    save_table(*table, tmp);
    std::filesystem::rename(tmp, path, ec);
  } catch (const Error&) {
    std::filesystem::remove(tmp, ec);
  }
  return table;
}

} // namespace zslab
