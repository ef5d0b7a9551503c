// Command-line front end. Exit codes: 0 success or "yes", 1 verification
// failure or "no", 2 usage, parse or library error.
#include "tabalg/corpus.hpp"
#include "tabalg/deduction.hpp"
#include "tabalg/isomorphism.hpp"
#include "tabalg/structure.hpp"
#include "tabalg/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <sstream>

namespace {

using namespace tabalg;

/// Human mode prints lines; machine mode prints "KEY\tVALUE" facts.
class Report {
 public:
  explicit Report(bool machine) : machine_(machine) {}
  void line(const std::string& s) {
    if (!machine_) std::cout << s << '\n';
  }
  void fact(const std::string& key, const std::string& value) {
    if (machine_) std::cout << key << '\t' << value << '\n';
  }

 private:
  bool machine_;
};

std::string join_names(const TableBasis& b, const std::vector<Index>& idx) {
  std::string s;
  for (Index i : idx) s += (s.empty() ? "" : " ") + b.name(i);
  return s;
}

std::vector<Index> indices(const TableBasis& b, const std::vector<std::string>& names) {
  std::vector<Index> out;
  for (const auto& n : names) out.push_back(b.index_of(n));
  return out;
}

const NamedSubset* named_subset(const Algebra& a, const std::string& name) {
  for (const auto& s : a.metadata().subsets)
    if (s.name == name) return &s;
  return nullptr;
}

/// A single subset name from the file, or the closure of element names.
ClosedSubset resolve_subset(const Algebra& a, const std::vector<std::string>& args) {
  if (args.size() == 1) {
    if (const auto* s = named_subset(a, args[0])) return {s->members};
  }
  std::vector<std::string> names;
  for (const auto& s : args) {
    std::stringstream ss(s);
    for (std::string t; std::getline(ss, t, ',');)
      if (!t.empty()) names.push_back(t);
  }
  return closure(a, indices(a.basis(), names));
}

std::string subset_label(const Algebra& a, const ClosedSubset& s) {
  for (const auto& n : a.metadata().subsets)
    if (n.members == s.members) return n.name;
  return "-";
}

int cmd_verify(Report& r, const std::string& file, unsigned jobs) {
  const Algebra a = load_algebra(file);
  const auto rep = verify_axioms(a, VerifyOptions{jobs});
  const auto& b = a.basis();
  r.fact("algebra", a.name());
  r.fact("size", std::to_string(a.size()));
  r.fact("status", rep.passed() ? "PASS" : "FAIL");
  r.fact("axiom_classes", std::to_string(rep.checks.size()));
  r.fact("associativity_triples", std::to_string(rep.associativity_triples()));
  if (rep.passed()) {
    r.line("PASS (" + std::to_string(rep.checks.size()) + " axiom classes, " +
           std::to_string(rep.associativity_triples()) + " associativity triples)");
  } else {
    r.line("FAIL");
  }
  for (const auto& c : rep.checks) {
    const std::string name(axiom_name(c.axiom));
    r.fact("axiom." + name, c.passed() ? "pass" : "fail");
    if (c.passed()) continue;
    r.fact("witnesses." + name, std::to_string(c.witnesses.size()));
    std::string w;
    const auto& v = c.witnesses.front();
    for (Index x : {v.i, v.j, v.l, v.m})
      if (x >= 0) w += (w.empty() ? "" : ",") + b.name(x);
    r.fact("witness." + name, w);
    r.line("  " + name + ": " + std::to_string(c.witnesses.size()) +
           " violation(s), first at " + w);
  }
  return rep.passed() ? 0 : 1;
}

int cmd_mult(Report& r, const std::string& file, const std::string& x,
             const std::string& y) {
  const Algebra a = load_algebra(file);
  const Element p = multiply(a, parse_expression(a.basis(), x), parse_expression(a.basis(), y));
  const std::string s = format_expression(a.basis(), p);
  r.fact("product", s);
  r.fact("degree", degree(a, p).str());
  r.line(s);
  return 0;
}

int cmd_inner(Report& r, const std::string& file, const std::string& x,
              const std::string& y) {
  const Algebra a = load_algebra(file);
  const Integer v = inner(a, parse_expression(a.basis(), x), parse_expression(a.basis(), y));
  r.fact("inner", v.str());
  r.line(v.str());
  return 0;
}

int cmd_subsets(Report& r, const std::string& file) {
  const Algebra a = load_algebra(file);
  const auto all = all_closed_subsets(a);
  r.fact("count", std::to_string(all.size()));
  r.line(std::to_string(all.size()) + " closed subsets");
  for (std::size_t t = 0; t < all.size(); ++t) {
    const auto& s = all[t];
    // Maximal: proper, and no proper closed subset strictly contains it.
    bool maximal = s.size() < a.size();
    for (const auto& u : all) {
      if (!maximal) break;
      if (u.size() <= s.size() || u.size() == a.size()) continue;
      maximal = !std::includes(u.members.begin(), u.members.end(), s.members.begin(),
                               s.members.end());
    }
    const std::string label = subset_label(a, s);
    const std::string members = join_names(a.basis(), s.members);
    const std::string key = "subset." + std::to_string(t);
    r.fact(key + ".size", std::to_string(s.size()));
    r.fact(key + ".name", label);
    r.fact(key + ".maximal", maximal ? "yes" : "no");
    r.fact(key + ".members", members);
    r.line(std::to_string(s.size()) + "\t" + label + (maximal ? "\tmaximal" : "\t-") +
           "\t" + members);
  }
  return 0;
}

int cmd_closure(Report& r, const std::string& file, const std::vector<std::string>& names) {
  const Algebra a = load_algebra(file);
  const auto s = closure(a, indices(a.basis(), names));
  const std::string members = join_names(a.basis(), s.members);
  const bool faithful = s.size() == a.size();
  r.fact("size", std::to_string(s.size()));
  r.fact("name", subset_label(a, s));
  r.fact("faithful", faithful ? "yes" : "no");
  r.fact("members", members);
  r.line(std::to_string(s.size()) + " elements" + (faithful ? " (faithful)" : "") + ": " +
         members);
  return 0;
}

int cmd_powers(Report& r, const std::string& file, const std::string& name, int max_n) {
  const Algebra a = load_algebra(file);
  const auto t = power_supports(a, a.basis().index_of(name), max_n);
  for (const auto& row : t.rows) {
    const std::string s = join_names(a.basis(), row.support);
    r.fact("power." + std::to_string(row.exponent), s);
    r.line(name + "^" + std::to_string(row.exponent) + ": " + s);
  }
  return 0;
}

int cmd_quotient(Report& r, const std::string& file, const std::vector<std::string>& by) {
  const Algebra a = load_algebra(file);
  const auto c = resolve_subset(a, by);
  const auto q = quotient_by(a, c);
  const auto g = is_group_like(q);
  r.fact("classes", std::to_string(q.size()));
  r.fact("group_like", g ? g->type : "no");
  r.line(std::to_string(q.size()) + " classes; group-like: " + (g ? g->type : "no"));
  for (int p = 0; p < q.size(); ++p) {
    const auto& cl = q.classes[p];
    r.fact("class." + cl.label, join_names(a.basis(), cl.members));
    r.line("class " + cl.label + ": " + join_names(a.basis(), cl.members));
  }
  for (int p = 0; p < q.size(); ++p) {
    for (int s = p; s < q.size(); ++s) {
      std::string v;
      for (int x : q.compose[p][s]) v += (v.empty() ? "" : " ") + q.classes[x].label;
      const std::string key = q.classes[p].label + "*" + q.classes[s].label;
      r.fact("compose." + key, v);
      r.line(q.classes[p].label + " * " + q.classes[s].label + " = " + v);
    }
  }
  return 0;
}

int cmd_iso(Report& r, const std::string& fa, const std::string& fb) {
  const Algebra a = load_algebra(fa), b = load_algebra(fb);
  const auto cert = exact_isomorphic(a, b);
  r.fact("isomorphic", cert ? "yes" : "no");
  if (!cert) {
    r.line("not isomorphic");
    return 1;
  }
  r.fact("verified", cert->verified ? "yes" : "no");
  r.line("isomorphic (certificate verified)");
  for (Index i = 0; i < a.size(); ++i) {
    const auto& x = a.basis().name(i);
    const auto& y = b.basis().name(cert->mapping[i]);
    r.fact("map." + x, y);
    r.line("  " + x + " -> " + y);
  }
  return 0;
}

int cmd_restrict(Report& r, const std::string& file, const std::vector<std::string>& to,
                 const std::string& out, const std::string& name) {
  const Algebra a = load_algebra(file);
  ClosedSubset s;
  if (to.size() == 1 && named_subset(a, to[0])) {
    s = {named_subset(a, to[0])->members};
  } else {
    auto idx = indices(a.basis(), to);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    s = {idx};
  }
  const Algebra sub = restrict(a, s, name);
  write_file(out, serialize(sub));
  r.fact("size", std::to_string(sub.size()));
  r.fact("output", out);
  r.line("wrote " + out + " (" + std::to_string(sub.size()) + " elements)");
  return 0;
}

int cmd_deduce(Report& r, const std::string& file, const DeductionOptions& opts,
               const std::string& trace_out, const std::string& table_out) {
  const PartialTable p = load_partial(file);
  PartialTable result;
  const auto trace = complete_or_refute(p, opts, &result);
  const std::string text = format_trace(p.basis(), trace);
  if (!trace_out.empty()) write_file(trace_out, text);
  if (!table_out.empty()) write_file(table_out, serialize(result));
  const auto status = std::string(status_name(trace.status));
  r.fact("status", status);
  r.fact("steps", std::to_string(trace.steps.size()));
  r.fact("firings", std::to_string(trace.firings));
  r.fact("known", std::to_string(result.known_entries().size()));
  r.fact("unresolved", std::to_string(trace.unresolved.size()));
  r.fact("budget_exhausted", trace.budget_exhausted ? "yes" : "no");
  std::string summary = status + ": " + std::to_string(result.known_entries().size()) +
                        " products known, " + std::to_string(trace.unresolved.size()) +
                        " unresolved, " + std::to_string(trace.steps.size()) + " steps";
  if (trace.budget_exhausted) summary += " (step budget exhausted)";
  r.line(summary);
  if (trace.witness) {
    const auto& w = *trace.witness;
    std::string ws;
    for (Index x : w)
      if (x >= 0) ws += (ws.empty() ? "" : ",") + p.basis().name(x);
    r.fact("witness", ws);
    r.fact("detail", trace.detail);
    r.line("witness " + ws + ": " + trace.detail);
  }
  // A completed table or a refutation is a definite answer.
  return trace.status == DeductionStatus::Stalled ? 1 : 0;
}

int cmd_bundled(Report& r, bool list, const std::string& name, const std::string& out) {
  if (!name.empty()) {
    if (out.empty()) {
      std::cout << bundled_text(name);
    } else {
      write_file(out, bundled_text(name));
      r.fact("output", out);
      r.line("wrote " + out);
    }
    return 0;
  }
  (void)list;
  for (const auto& n : bundled_names()) {
    r.fact("bundled." + n, std::to_string(bundled(n).size()));
    r.line(n + "\t" + std::to_string(bundled(n).size()));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normalized integral table algebras: verification, structure, deduction"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "human";
  bool timing = false;
  app.add_option("--format", format, "Output style")
      ->check(CLI::IsMember({"human", "machine"}));
  app.add_flag("--timing", timing, "Report elapsed time on stderr");

  std::string file, file2, x, y, name, out, trace_out, rename;
  std::vector<std::string> names;
  unsigned jobs = 1;
  int max_n = 10;
  bool list = false;
  DeductionOptions dopts;
  bool no_probe = false, no_symmetry = false;

  auto* verify = app.add_subcommand("verify", "Check every table algebra axiom");
  verify->add_option("file", file, "Algebra file or bundled:NAME")->required();
  verify->add_option("--jobs", jobs, "Worker threads for associativity")
      ->check(CLI::PositiveNumber);

  auto* mult = app.add_subcommand("mult", "Multiply two elements");
  mult->add_option("file", file)->required();
  mult->add_option("x", x, "Expression, e.g. b3 or \"1 + 2 b8\"")->required();
  mult->add_option("y", y)->required();

  auto* inner_cmd = app.add_subcommand("inner", "Inner product of two elements");
  inner_cmd->add_option("file", file)->required();
  inner_cmd->add_option("x", x)->required();
  inner_cmd->add_option("y", y)->required();

  auto* subsets = app.add_subcommand("subsets", "List all closed subsets");
  subsets->add_option("file", file)->required();

  auto* closure_cmd = app.add_subcommand("closure", "Closed subset generated by elements");
  closure_cmd->add_option("file", file)->required();
  closure_cmd->add_option("names", names)->required();

  auto* powers = app.add_subcommand("powers", "Supports of successive powers");
  powers->add_option("file", file)->required();
  powers->add_option("name", name)->required();
  powers->add_option("--max", max_n, "Highest exponent")->check(CLI::PositiveNumber);

  auto* quotient = app.add_subcommand("quotient", "Support-level quotient by a closed subset");
  quotient->add_option("file", file)->required();
  quotient->add_option("--by", names, "Subset name from the file, or element names")
      ->required();

  auto* iso = app.add_subcommand("iso", "Exact isomorphism test");
  iso->add_option("a", file)->required();
  iso->add_option("b", file2)->required();

  auto* restrict_cmd = app.add_subcommand("restrict", "Sub-table-algebra on a closed subset");
  restrict_cmd->add_option("file", file)->required();
  restrict_cmd->add_option("--to", names, "Subset name or member names")->required();
  restrict_cmd->add_option("-o", out, "Output file")->required();
  restrict_cmd->add_option("--name", rename, "Name of the restricted algebra");

  auto* deduce = app.add_subcommand("deduce", "Complete or refute a partial table");
  deduce->add_option("file", file)->required();
  deduce->add_option("--max-steps", dopts.max_steps, "Rule firing budget")
      ->check(CLI::PositiveNumber);
  deduce->add_option("--trace", trace_out, "Write the step trace here");
  deduce->add_option("-o", out, "Write the resulting partial table here");
  deduce->add_flag("--no-probe", no_probe, "Disable failed-value probing");
  deduce->add_flag("--no-symmetry", no_symmetry, "Disable symmetry choices");
  deduce->add_option("--order-seed", dopts.order_seed, "Shuffle rule order");

  auto* bundled_cmd = app.add_subcommand("bundled", "List or export the bundled corpus");
  auto* list_opt = bundled_cmd->add_flag("--list", list, "List names and sizes");
  auto* export_opt = bundled_cmd->add_option("--export", name, "Bundled algebra to export");
  bundled_cmd->add_option("-o", out, "Output file for --export");
  list_opt->excludes(export_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Report r(format == "machine");
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (*verify) code = cmd_verify(r, file, jobs);
    if (*mult) code = cmd_mult(r, file, x, y);
    if (*inner_cmd) code = cmd_inner(r, file, x, y);
    if (*subsets) code = cmd_subsets(r, file);
    if (*closure_cmd) code = cmd_closure(r, file, names);
    if (*powers) code = cmd_powers(r, file, name, max_n);
    if (*quotient) code = cmd_quotient(r, file, names);
    if (*iso) code = cmd_iso(r, file, file2);
    if (*restrict_cmd) code = cmd_restrict(r, file, names, out, rename);
    if (*deduce) {
      dopts.probing = !no_probe;
      dopts.symmetry_choice = !no_symmetry;
      code = cmd_deduce(r, file, dopts, trace_out, out);
    }
    if (*bundled_cmd) code = cmd_bundled(r, list, name, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (timing) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    std::cerr << "elapsed\t" << dt.count() << " s\n";
  }
  return code;
}
