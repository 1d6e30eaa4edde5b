#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli_config.hpp"
#include "zslab/bounds.hpp"
#include "zslab/factorization.hpp"
#include "zslab/krull_model.hpp"
#include "zslab/verify.hpp"
#include "zslab/witnesses.hpp"

using namespace zslab;
using nlohmann::json;

namespace {

struct Args {
  std::string group;
  std::string g0;
  std::string sequence;
  std::string model;
  std::string params = "{}";
  std::string witness;
  std::string tier = "quick";
  std::string tame_mode;
  std::optional<std::string> cache_dir;
  std::optional<int> threads;
  std::optional<double> budget;
  int t = 2;
  bool json = false;
  bool csv = false;
  bool timing = false;
  bool compute = false;
};

struct Context {
  Args args;
  cli::Config config;
  SearchOptions search() const {
    SearchOptions s;
    s.parallel.threads = config.threads;
    s.cache_dir = config.cache_dir;
    s.budget_seconds = args.budget;
    return s;
  }
};

// Inline JSON, or @path to read it from a file.
json read_json_arg(const std::string& text, const char* what) {
  std::string body = text;
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw InvalidArgument(std::string("cannot read ") + what + " file " + text.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

GroupSpec need_group(const Args& a) {
  if (a.group.empty()) throw InvalidArgument("--group is required");
  return GroupSpec::parse(a.group);
}

Sequence need_sequence(const Args& a, const GroupPtr& group) {
  if (a.sequence.empty()) throw InvalidArgument("--sequence is required");
  return sequence_from_json(group, read_json_arg(a.sequence, "sequence"));
}

std::vector<Elem> parse_g0(const Args& a, const GroupPtr& group) {
  if (a.g0.empty()) return nonzero_elements(*group);
  const json j = read_json_arg(a.g0, "g0");
  if (!j.is_array()) throw InvalidArgument("--g0 must be a JSON array of coordinate vectors");
  std::vector<Elem> out;
  for (const auto& item : j) {
    GroupElement g{item.get<std::vector<int>>()};
    if (!is_valid_element(group->spec(), g)) throw InvalidArgument("--g0 entry " + item.dump() + " is not an element");
    const Elem e = group->index_of(g.coords);
    if (e == Group::zero()) throw InvalidArgument("--g0 must not contain 0");
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void emit(const Context& ctx, const json& j, const std::string& text) {
  if (ctx.args.json) std::cout << j.dump() << "\n";
  else std::cout << text << "\n";
}

int cmd_group(const Context& ctx) {
  const GroupSpec spec = need_group(ctx.args);
  const ClassicInvariants inv = classic_invariants(spec);
  std::ostringstream k;
  k << inv.kstar;
  json j{{"group", spec.to_string()},   {"order", spec.cardinality()}, {"exponent", spec.exponent()},
         {"rank", spec.rank()},         {"total_rank", inv.total_rank}, {"dstar", inv.dstar},
         {"Dstar", inv.Dstar},          {"kstar", k.str()},            {"prime_power_components", prime_power_components(spec)}};
  std::ostringstream t;
  t << "group " << spec.to_string() << "\norder " << spec.cardinality() << "\nexponent " << spec.exponent() << "\nrank "
    << spec.rank() << "\ntotal rank " << inv.total_rank << "\nd* " << inv.dstar << "\nD* " << inv.Dstar << "\nk* " << k.str();
  emit(ctx, j, t.str());
  return cli::kOk;
}

TablePtr table_over(const Context& ctx, const GroupPtr& group) {
  if (ctx.args.g0.empty()) return table_for(group->spec(), ctx.search());
  const std::vector<Elem> g0 = parse_g0(ctx.args, group);
  if (!ctx.config.cache_dir.empty()) return AtomCache(ctx.config.cache_dir, ctx.search().parallel).get(group, g0);
  AtomOptions opts;
  opts.parallel = ctx.search().parallel;
  return enumerate_atoms(group, g0, opts);
}

int cmd_atoms(const Context& ctx) {
  const GroupPtr group = Group::make(need_group(ctx.args));
  const TablePtr table = table_over(ctx, group);
  json list = json::array();
  std::string text;
  for (const Sequence& a : table->atoms()) {
    list.push_back(sequence_to_json(a));
    text += a.to_string() + "\n";
  }
  emit(ctx, {{"group", group->spec().to_string()}, {"count", table->size()}, {"davenport", table->davenport()}, {"atoms", list}},
       text + std::to_string(table->size()) + " atoms, max length " + std::to_string(table->davenport()));
  return cli::kOk;
}

int cmd_davenport(const Context& ctx) {
  const GroupSpec spec = need_group(ctx.args);
  int d = 0;
  if (ctx.args.g0.empty()) {
    d = davenport(spec);
  } else {
    d = table_over(ctx, Group::make(spec))->davenport();
  }
  emit(ctx, {{"group", spec.to_string()}, {"davenport", d}}, std::to_string(d));
  return cli::kOk;
}

int cmd_lengths(const Context& ctx) {
  const GroupPtr group = Group::make(need_group(ctx.args));
  const Sequence s = need_sequence(ctx.args, group);
  const TablePtr table = atoms_dividing(s);
  const std::vector<int> lengths = length_set(s, table);
  const int lo = lengths.empty() ? 0 : lengths.front();
  emit(ctx, {{"sequence", sequence_to_json(s)}, {"length_set", lengths}, {"min_length", lo}},
       "L = {" + join(lengths) + "}\nmin L = " + std::to_string(lo));
  return cli::kOk;
}

int cmd_factorizations(const Context& ctx) {
  const GroupPtr group = Group::make(need_group(ctx.args));
  const Sequence s = need_sequence(ctx.args, group);
  const TablePtr table = atoms_dividing(s);
  const std::vector<Factorization> all = enumerate_factorizations(s, table);
  json list = json::array();
  std::string text;
  for (const Factorization& z : all) {
    json parts = json::array();
    std::string line = std::to_string(z.length()) + ":";
    for (const auto& [idx, mult] : z.parts) {
      parts.push_back({{"atom", sequence_to_json(table->atom(idx))}, {"multiplicity", mult}});
      line += " " + table->atom(idx).to_string() + (mult > 1 ? "^" + std::to_string(mult) : "");
    }
    list.push_back({{"length", z.length()}, {"atoms", parts}});
    text += line + "\n";
  }
  emit(ctx, {{"sequence", sequence_to_json(s)}, {"count", all.size()}, {"factorizations", list}},
       text + std::to_string(all.size()) + " factorizations");
  return cli::kOk;
}

json tame_json(const TameResult& r) {
  json j{{"value", r.value}, {"complete", true}, {"atoms_total", r.atoms_total}, {"atoms_searched", r.atoms_searched}};
  j["certificate"] = r.certificate ? r.certificate->to_json() : json();
  return j;
}

int cmd_tame(const Context& ctx) {
  const std::string& mode = ctx.args.tame_mode;
  const GroupSpec spec = need_group(ctx.args);
  const SearchOptions opts = ctx.search();
  TameResult r;
  if (mode == "global") {
    r = t_global(spec, opts);
  } else if (mode == "krull") {
    if (ctx.args.sequence.empty()) {
      r = t_krull(spec, opts);
    } else {
      const GroupPtr group = Group::make(spec);
      r = t_krull_local(need_sequence(ctx.args, group), table_for(spec, opts), opts);
    }
  } else {
    const GroupPtr group = Group::make(spec);
    r = t_local(need_sequence(ctx.args, group), table_for(spec, opts), opts);
  }
  json j = tame_json(r);
  j["group"] = spec.to_string();
  j["mode"] = mode;
  std::string text = "t = " + std::to_string(r.value);
  if (r.certificate) text += "\ncertificate " + r.certificate->to_json().dump();
  emit(ctx, j, text);
  return cli::kOk;
}

int cmd_krull(const Context& ctx) {
  if (ctx.args.model.empty()) throw InvalidArgument("--model is required");
  const KrullModel model = KrullModel::from_json(read_json_arg(ctx.args.model, "model"));
  const ModelHypotheses hyp = model_hypotheses(model);
  const ModelResult r = t_model_global(model, ctx.search());
  json j{{"model", model.to_json()}, {"hypotheses", hyp.to_json()}, {"value", r.value}, {"complete", true},
         {"atoms_searched", r.atoms_searched}};
  j["certificate"] = r.certificate ? r.certificate->to_json(model) : json();
  std::string text = "t = " + std::to_string(r.value) + "\nhypotheses " + hyp.to_json().dump();
  if (r.certificate) text += "\ncertificate " + r.certificate->to_json(model).dump();
  emit(ctx, j, text);
  return cli::kOk;
}

int cmd_minvariant(const Context& ctx) {
  const GroupSpec spec = need_group(ctx.args);
  const GroupPtr group = Group::make(spec);
  const MInvariantResult r = m_invariant(spec, ctx.args.t);
  json cex = json::array();
  for (Elem g : r.counterexample) cex.push_back(group->element(g).coords);
  json j{{"group", spec.to_string()}, {"t", ctx.args.t}, {"value", r.value}, {"longest_counterexample", r.longest_counterexample},
         {"counterexample", cex}, {"monotone", r.monotone}, {"nodes", r.nodes}};
  emit(ctx, j, "m = " + std::to_string(r.value) + "\nlongest counterexample length " + std::to_string(r.longest_counterexample));
  return cli::kOk;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

int cmd_bounds(const Context& ctx) {
  const GroupSpec spec = need_group(ctx.args);
  const std::vector<BoundReport> reports = bound_reports(spec);
  // the bounds concern Krull monoids with a prime in every class, so the
  // comparison uses t_krull
  std::optional<int> computed;
  if (ctx.args.compute) computed = t_krull(spec, ctx.search()).value;
  if (ctx.args.json) {
    json list = json::array();
    for (const auto& b : reports) {
      json e = b.to_json();
      if (computed) {
        e["t_krull"] = *computed;
        e["consistent"] = b.upper ? *computed <= b.value : (b.strict ? *computed > b.value : *computed >= b.value);
      }
      list.push_back(e);
    }
    std::cout << list.dump() << "\n";
    return cli::kOk;
  }
  std::cout << "group,bound,kind,value,hypotheses,t_krull,consistent\n";
  for (const auto& b : reports) {
    std::string hyp;
    for (std::size_t i = 0; i < b.hypotheses.size(); ++i) hyp += (i ? "; " : "") + b.hypotheses[i];
    std::string cmp, ok;
    if (computed) {
      cmp = std::to_string(*computed);
      const bool good = b.upper ? *computed <= b.value : (b.strict ? *computed > b.value : *computed >= b.value);
      ok = good ? "yes" : "no";
    }
    std::cout << csv_field(b.target) << "," << b.name << "," << (b.upper ? "upper" : "lower") << "," << csv_field(b.value_text())
              << "," << csv_field(hyp) << "," << cmp << "," << ok << "\n";
  }
  return cli::kOk;
}

int cmd_witness(const Context& ctx) {
  const json w = make_witness(ctx.args.witness, read_json_arg(ctx.args.params, "params"));
  std::cout << w.dump(ctx.args.json ? -1 : 2) << "\n";
  if (!w.at("verified").get<bool>()) {
    std::cerr << "witness failed verification\n";
    return cli::kFailure;
  }
  return cli::kOk;
}

int cmd_verify(const Context& ctx) {
  VerifyOptions opts;
  opts.tier = parse_tier(ctx.args.tier);
  opts.search = ctx.search();
  opts.search.budget_seconds.reset();
  int failed = 0;
  json report = json::array();
  verify_paper(opts, [&](const CriterionResult& r) {
    if (!r.pass()) ++failed;
    if (ctx.args.json) report.push_back(r.to_json(ctx.args.timing));
    else std::cout << format_result(r) << std::endl;
  });
  if (ctx.args.json) std::cout << json{{"tier", tier_name(opts.tier)}, {"criteria", report}, {"pass", failed == 0}}.dump() << "\n";
  else std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << "\n";
  return failed ? cli::kFailure : cli::kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-sum sequences, factorizations and tame degrees"};
  app.require_subcommand(1);
  Args a;
  app.add_option("--cache-dir", a.cache_dir, "atom table cache (env ZSLAB_CACHE_DIR)");
  app.add_option("--threads", a.threads, "worker threads (env ZSLAB_THREADS)")->check(CLI::PositiveNumber);
  app.add_option("--budget", a.budget, "time budget in seconds; exit 3 with a certificate when exceeded")
      ->check(CLI::PositiveNumber);
  app.add_flag("--timing", a.timing, "print elapsed_ms on stderr and in verify-paper JSON");
  auto* json_flag = app.add_flag("--json", a.json, "JSON output");
  app.add_flag("--csv", a.csv, "CSV output (bounds)")->excludes(json_flag);

  auto group_opt = [&](CLI::App* sub, bool required = true) {
    auto* o = sub->add_option("--group", a.group, "cyclic orders, e.g. 2,2,2");
    if (required) o->required();
  };
  auto common = [&](CLI::App* sub) {
    sub->fallthrough();
    return sub;
  };

  auto* group = common(app.add_subcommand("group", "group invariants"));
  group_opt(group);
  auto* atoms = common(app.add_subcommand("atoms", "minimal zero-sum sequences"));
  group_opt(atoms);
  atoms->add_option("--g0", a.g0, "JSON list of coordinate vectors (or @file)");
  auto* dav = common(app.add_subcommand("davenport", "Davenport constant"));
  group_opt(dav);
  dav->add_option("--g0", a.g0, "JSON list of coordinate vectors (or @file)");
  auto* lengths = common(app.add_subcommand("lengths", "length set of a zero-sum sequence"));
  group_opt(lengths);
  lengths->add_option("--sequence", a.sequence, "JSON [[coords, mult], ...] (or @file)")->required();
  auto* facts = common(app.add_subcommand("factorizations", "all factorizations of a zero-sum sequence"));
  group_opt(facts);
  facts->add_option("--sequence", a.sequence, "JSON [[coords, mult], ...] (or @file)")->required();
  auto* tame = common(app.add_subcommand("tame", "tame degrees"));
  tame->add_option("mode", a.tame_mode, "local, global or krull")->required()->check(CLI::IsMember({"local", "global", "krull"}));
  group_opt(tame);
  tame->add_option("--sequence", a.sequence, "the atom U for local values");
  auto* krull = common(app.add_subcommand("krull", "tame degree of a finite Krull model"));
  krull->add_option("--model", a.model, R"(JSON {"group":..,"primes":[{"class":[..],"count":n}]} (or @file))")->required();
  auto* minv = common(app.add_subcommand("minvariant", "smallest m such that long sequences have long atoms"));
  group_opt(minv);
  minv->add_option("--t", a.t, "atom length threshold")->check(CLI::Range(1, 1000));
  auto* bounds = common(app.add_subcommand("bounds", "closed-form bounds on the tame degree (CSV)"));
  group_opt(bounds);
  bounds->add_flag("--compute", a.compute, "also compute t_krull and compare");
  auto* witness = common(app.add_subcommand("witness", "build and verify an extremal configuration"));
  witness->add_option("name", a.witness, "witness name")->required()->check(CLI::IsMember(witness_names()));
  witness->add_option("--params", a.params, "JSON parameters (or @file)");
  auto* verify = common(app.add_subcommand("verify-paper", "run the acceptance criteria"));
  verify->add_option("--tier", a.tier, "quick or full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = cli::kOk;
  try {
    if (a.csv && !bounds->parsed()) throw InvalidArgument("--csv applies to the bounds subcommand only");
    Context ctx{a, cli::resolve_config({a.cache_dir, a.threads})};
    if (group->parsed()) code = cmd_group(ctx);
    else if (atoms->parsed()) code = cmd_atoms(ctx);
    else if (dav->parsed()) code = cmd_davenport(ctx);
    else if (lengths->parsed()) code = cmd_lengths(ctx);
    else if (facts->parsed()) code = cmd_factorizations(ctx);
    else if (tame->parsed()) code = cmd_tame(ctx);
    else if (krull->parsed()) code = cmd_krull(ctx);
    else if (minv->parsed()) code = cmd_minvariant(ctx);
    else if (bounds->parsed()) code = cmd_bounds(ctx);
    else if (witness->parsed()) code = cmd_witness(ctx);
    else if (verify->parsed()) code = cmd_verify(ctx);
  } catch (const PartialResult& e) {
    std::cerr << e.what() << "\n";
    std::cout << json{{"value", e.best_lower_bound()}, {"complete", false}, {"certificate", e.certificate()},
                      {"frontier", e.frontier()}}.dump()
              << "\n";
    code = cli::kPartial;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = cli::kUsage;
  } catch (const HypothesisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = cli::kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: bad JSON input: " << e.what() << "\n";
    code = cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = cli::kFailure;
  }
  if (a.timing) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "elapsed_ms " << ms << "\n";
  }
  return code;
}
