#include "tabalg/corpus.hpp"
#include "tabalg/structure.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace tabalg {
namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool is_name(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
  });
}

bool is_count(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
}

Integer to_integer(std::string_view s) { return Integer(std::string(s)); }

std::int64_t to_int64(std::string_view s, std::size_t line) {
  if (!is_count(s) || s.size() > 15) {
    throw ParseError(line, "expected a positive integer, got '" +
                               std::string(s) + "'");
  }
  return std::stoll(std::string(s));
}

struct ParsedExpr {
  Element value;
  std::optional<std::string> remainder;
};

ParsedExpr parse_expr_impl(const TableBasis& basis, std::string_view text,
                           bool allow_remainder, std::size_t line) {
  ParsedExpr out{Element::Zero(basis.size()), std::nullopt};
  std::size_t start = 0;
  bool any = false;
  while (start <= text.size()) {
    std::size_t plus = text.find('+', start);
    if (plus == std::string_view::npos) plus = text.size();
    auto toks = split_ws(text.substr(start, plus - start));
    start = plus + 1;
    if (toks.empty() || toks.size() > 2) {
      throw ParseError(line, "malformed term in expression '" +
                                 std::string(trim(text)) + "'");
    }
    any = true;
    if (toks.size() == 1 && toks[0].front() == '?') {
      auto name = toks[0].substr(1);
      if (!allow_remainder || !is_name(name)) {
        throw ParseError(line, "unexpected remainder '" + std::string(toks[0]) + "'");
      }
      if (out.remainder) throw ParseError(line, "more than one remainder");
      out.remainder = std::string(name);
      continue;
    }
    if (toks.size() == 1 && is_count(toks[0])) {
      out.value(0) += to_integer(toks[0]);
      continue;
    }
    std::string_view name = toks.back();
    Integer coeff(1);
    if (toks.size() == 2) {
      if (!is_count(toks[0])) {
        throw ParseError(line, "expected a coefficient, got '" +
                                   std::string(toks[0]) + "'");
      }
      coeff = to_integer(toks[0]);
    }
    if (!is_name(name)) {
      throw ParseError(line, "malformed element name '" + std::string(name) + "'");
    }
    out.value(basis.index_of(name)) += coeff;
  }
  if (!any) throw ParseError(line, "empty expression");
  return out;
}

Element conj(const TableBasis& b, const Element& x) {
  Element out = Element::Zero(b.size());
  for (Index i = 0; i < b.size(); ++i) out(b.dual(i)) = x(i);
  return out;
}

Integer degree_of(const TableBasis& b, const Element& x) {
  Integer d(0);
  for (Index i = 0; i < b.size(); ++i) d += x(i) * Integer(b.degree(i));
  return d;
}

/// Value for the orbit representative given the value of (i,j).
Element to_rep(const TableBasis& b, Index i, Index j, const Element& v) {
  const auto rep = product_orbit_rep(b, i, j);
  if (rep == std::make_pair(std::min(i, j), std::max(i, j))) return v;
  return conj(b, v);
}

bool orbit_self_conjugate(const TableBasis& b, Index i, Index j) {
  const Index di = b.dual(i), dj = b.dual(j);
  return sorted_pair(i, j) == sorted_pair(di, dj);
}

/// Shared reader for "algebra" and "partial" files.
struct FileReader {
  bool partial = false;
  std::string name;
  BasisFlags flags;
  bool open_basis = false;
  std::vector<std::string> header_notes;
  std::vector<std::string> pending_notes;

  struct ElementDecl {
    std::string name, dual;
    std::int64_t degree;
    std::size_t line;
  };
  std::vector<ElementDecl> decls;
  std::optional<TableBasis> basis;

  struct Entry {
    Element value;
    std::optional<std::string> remainder;
    std::size_t line;
    std::vector<std::string> notes;
  };
  std::map<std::pair<Index, Index>, Entry> products;

  std::vector<std::pair<NamedSubset, std::size_t>> subsets;

  void finish_basis(std::size_t line) {
    if (basis) return;
    if (decls.empty()) throw ParseError(line, "no element declarations");
    std::vector<BasisElement> els;
    std::map<std::string, Index> idx;
    for (std::size_t i = 0; i < decls.size(); ++i) {
      if (!idx.emplace(decls[i].name, static_cast<Index>(i)).second) {
        throw ParseError(decls[i].line, "duplicate element " + decls[i].name);
      }
    }
    for (const auto& d : decls) {
      auto it = idx.find(d.dual);
      if (it == idx.end()) {
        throw ParseError(d.line, "unknown dual name '" + d.dual + "'");
      }
      els.push_back({d.name, d.degree, it->second});
    }
    try {
      basis.emplace(std::move(els), flags);
    } catch (const InvalidBasis& e) {
      throw ParseError(line, e.what());
    }
  }

  void read(std::string_view text) {
    std::size_t lineno = 0;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view raw = text.substr(pos, nl - pos);
      pos = nl + 1;
      ++lineno;
      if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
      std::string_view line = trim(raw);
      if (line.empty()) {
        flush_notes();
        continue;
      }
      if (line.front() == '#') {
        std::string_view body = line.substr(1);
        if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        pending_notes.emplace_back(body);
        continue;
      }
      auto toks = split_ws(line);
      const auto& kw = toks[0];
      if (!have_header) {
        const std::string_view want = partial ? "partial" : "algebra";
        if (kw != want || toks.size() != 2) {
          throw ParseError(lineno, "expected header '" + std::string(want) +
                                       " <name>'");
        }
        name = std::string(toks[1]);
        have_header = true;
        flush_notes();
        continue;
      }
      if (kw == "assume") {
        if (!decls.empty() || basis) {
          throw ParseError(lineno, "'assume' must precede element declarations");
        }
        for (std::size_t t = 1; t < toks.size(); ++t) {
          if (toks[t] == "no-degree-1") {
            flags.no_degree_one = true;
          } else if (toks[t] == "no-degree-2") {
            flags.no_degree_two = true;
          } else if (partial && toks[t] == "open-basis") {
            open_basis = true;
          } else {
            throw ParseError(lineno, "unknown assumption '" + std::string(toks[t]) + "'");
          }
        }
        flush_notes();
        continue;
      }
      if (kw == "element") {
        if (basis) throw ParseError(lineno, "element declared after products");
        if (toks.size() != 6 || toks[2] != "degree" || toks[4] != "dual" ||
            !is_name(toks[1]) || !is_name(toks[5])) {
          throw ParseError(lineno,
                           "expected 'element <name> degree <int> dual <name>'");
        }
        decls.push_back({std::string(toks[1]), std::string(toks[5]),
                         to_int64(toks[3], lineno), lineno});
        flush_notes();
        continue;
      }
      if (kw == "subset" && !partial) {
        finish_basis(lineno);
        read_subset(toks, lineno);
        flush_notes();
        continue;
      }
      if (kw == "product") {
        finish_basis(lineno);
        read_product(line, lineno);
        continue;
      }
      throw ParseError(lineno, "unknown directive '" + std::string(kw) + "'");
    }
    if (!have_header) {
      throw ParseError(lineno, partial ? "missing 'partial' header"
                                       : "missing 'algebra' header");
    }
    flush_notes();
    finish_basis(lineno);
  }

  void flush_notes() {
    header_notes.insert(header_notes.end(), pending_notes.begin(),
                        pending_notes.end());
    pending_notes.clear();
  }

  void read_subset(const std::vector<std::string_view>& toks, std::size_t lineno) {
    if (toks.size() < 4 || toks[2] != "=" || !is_name(toks[1])) {
      throw ParseError(lineno, "expected 'subset <name> = <name>...'");
    }
    NamedSubset s{std::string(toks[1]), {}};
    for (const auto& [t, l] : subsets) {
      if (t.name == s.name) throw ParseError(lineno, "duplicate subset " + s.name);
    }
    for (std::size_t t = 3; t < toks.size(); ++t) {
      const auto i = basis->find(toks[t]);
      if (!i) throw ParseError(lineno, "unknown element name '" + std::string(toks[t]) + "'");
      s.members.push_back(*i);
    }
    std::sort(s.members.begin(), s.members.end());
    if (std::adjacent_find(s.members.begin(), s.members.end()) != s.members.end()) {
      throw ParseError(lineno, "repeated member in subset " + s.name);
    }
    subsets.push_back({std::move(s), lineno});
  }

  void read_product(std::string_view line, std::size_t lineno) {
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(lineno, "expected 'product <name> <name> = <expr>'");
    }
    auto lhs = split_ws(line.substr(0, eq));
    if (lhs.size() != 3 || !is_name(lhs[1]) || !is_name(lhs[2])) {
      throw ParseError(lineno, "expected 'product <name> <name> = <expr>'");
    }
    const auto& b = *basis;
    Index i, j;
    ParsedExpr e;
    try {
      i = b.index_of(lhs[1]);
      j = b.index_of(lhs[2]);
      e = parse_expr_impl(b, line.substr(eq + 1), partial, lineno);
    } catch (const UnknownName& u) {
      throw ParseError(lineno, u.what());
    }
    const Integer want = Integer(b.degree(i)) * Integer(b.degree(j));
    const Integer got = degree_of(b, e.value);
    if (e.remainder ? got > want : got != want) {
      throw ParseError(lineno, "degree sum " + got.str() + " of right-hand side, expected " +
                                   want.str());
    }
    const auto rep = product_orbit_rep(b, i, j);
    Element v = to_rep(b, i, j, e.value);
    if (!e.remainder && orbit_self_conjugate(b, i, j) && conj(b, v) != v) {
      throw ParseError(lineno, "product " + b.name(i) + " " + b.name(j) +
                                   " must be invariant under the involution");
    }
    auto it = products.find(rep);
    if (it != products.end()) {
      if (it->second.value != v || it->second.remainder != e.remainder) {
        throw ParseError(lineno, "conflicting redefinition of product " +
                                     b.name(i) + " " + b.name(j) +
                                     " (first given on line " +
                                     std::to_string(it->second.line) + ")");
      }
      it->second.notes.insert(it->second.notes.end(), pending_notes.begin(),
                              pending_notes.end());
      pending_notes.clear();
      return;
    }
    products.emplace(rep, Entry{std::move(v), e.remainder, lineno,
                                std::move(pending_notes)});
    pending_notes.clear();
  }
};

void write_expr(std::ostringstream& os, const TableBasis& b, const Element& x) {
  os << format_expression(b, x);
}

void write_header(std::ostringstream& os, const std::vector<std::string>& notes,
                  std::string_view kw, const std::string& name,
                  const TableBasis& b, bool open_basis = false) {
  for (const auto& n : notes) os << (n.empty() ? "#" : "# " + n) << '\n';
  os << kw << ' ' << name << '\n';
  if (b.flags().no_degree_one || b.flags().no_degree_two || open_basis) {
    os << "assume";
    if (b.flags().no_degree_one) os << " no-degree-1";
    if (b.flags().no_degree_two) os << " no-degree-2";
    if (open_basis) os << " open-basis";
    os << '\n';
  }
  for (Index i = 0; i < b.size(); ++i) {
    os << "element " << b.name(i) << " degree " << b.degree(i) << " dual "
       << b.name(b.dual(i)) << '\n';
  }
}

void write_notes(std::ostringstream& os, const std::vector<std::string>& notes) {
  for (const auto& n : notes) os << (n.empty() ? "#" : "# " + n) << '\n';
}

}  // namespace

Element parse_expression(const TableBasis& basis, std::string_view text) {
  return parse_expr_impl(basis, text, false, 0).value;
}

std::string format_expression(const TableBasis& basis, const Element& x) {
  if (x.size() != basis.size()) {
    throw MalformedElement("element size does not match basis");
  }
  std::string out;
  for (Index i = 0; i < basis.size(); ++i) {
    if (x(i) == 0) continue;
    if (!out.empty()) out += " + ";
    if (i == 0) {
      out += x(i).str();
    } else {
      if (x(i) != 1) out += x(i).str() + " ";
      out += basis.name(i);
    }
  }
  return out.empty() ? "0" : out;
}

Algebra parse_algebra(std::string_view text) {
  FileReader r;
  r.read(text);
  const auto& b = *r.basis;
  const Index k = b.size();
  StructureConstants<Integer> c(k);
  AlgebraMetadata meta{r.name, r.header_notes, {}, {}};
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      const auto rep = product_orbit_rep(b, i, j);
      auto it = r.products.find(rep);
      if (it == r.products.end()) {
        throw ParseError(0, "missing product " + b.name(rep.first) + " " +
                                b.name(rep.second));
      }
      // The stored value belongs to the sorted rep; (i,j) either sorts to it
      // or is its dual image.
      const bool direct = sorted_pair(i, j) == rep;
      const Element v = direct ? it->second.value : conj(b, it->second.value);
      for (Index m = 0; m < k; ++m) c(i, j, m) = v(m);
    }
  }
  for (auto& [rep, e] : r.products) {
    if (!e.notes.empty()) meta.product_notes[rep] = e.notes;
  }
  Algebra a(b, std::move(c), {});
  for (auto& [s, line] : r.subsets) {
    if (!is_closed(a, s.members)) {
      throw ParseError(line, "subset " + s.name + " is not closed");
    }
    meta.subsets.push_back(std::move(s));
  }
  return Algebra(b, a.constants(), std::move(meta));
}

std::string serialize(const Algebra& a) {
  const auto& b = a.basis();
  std::ostringstream os;
  write_header(os, a.metadata().notes, "algebra", a.name(), b);
  for (const auto& s : a.metadata().subsets) {
    os << "subset " << s.name << " =";
    for (Index i : s.members) os << ' ' << b.name(i);
    os << '\n';
  }
  for (Index i = 0; i < b.size(); ++i) {
    for (Index j = i; j < b.size(); ++j) {
      if (product_orbit_rep(b, i, j) != std::make_pair(i, j)) continue;
      auto it = a.metadata().product_notes.find({i, j});
      if (it != a.metadata().product_notes.end()) write_notes(os, it->second);
      os << "product " << b.name(i) << ' ' << b.name(j) << " = ";
      write_expr(os, b, a.constants().product(i, j));
      os << '\n';
    }
  }
  return os.str();
}

PartialTable parse_partial(std::string_view text) {
  FileReader r;
  r.partial = true;
  r.read(text);
  PartialTable p(*r.basis, r.name);
  p.set_open_basis(r.open_basis);
  p.notes() = r.header_notes;
  for (auto& [rep, e] : r.products) {
    try {
      if (e.remainder) {
        p.set_pending(rep.first, rep.second, e.value, *e.remainder);
      } else {
        p.set_known(rep.first, rep.second, e.value);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(e.line, err.what());
    }
  }
  return p;
}

std::string serialize(const PartialTable& p) {
  const auto& b = p.basis();
  std::ostringstream os;
  write_header(os, p.notes(), "partial", p.name(), b, p.open_basis());
  std::map<PartialTable::Key, std::string> lines;
  for (const auto& [k, v] : p.known_entries()) {
    lines[k] = format_expression(b, v);
  }
  for (const auto& [k, c] : p.pending_entries()) {
    if (lines.count(k)) continue;
    std::string s = c.lower.isZero() ? "" : format_expression(b, c.lower) + " + ";
    lines[k] = s + "?" + c.remainder;
  }
  for (const auto& [k, s] : lines) {
    os << "product " << b.name(k.first) << ' ' << b.name(k.second) << " = " << s
       << '\n';
  }
  return os.str();
}

std::string read_file(std::string_view path) {
  std::ifstream in{std::string(path), std::ios::binary};
  if (!in) throw Error("cannot read " + std::string(path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(std::string_view path, std::string_view text) {
  std::ofstream out{std::string(path), std::ios::binary};
  if (!out) throw Error("cannot write " + std::string(path));
  out << text;
  if (!out) throw Error("write failed for " + std::string(path));
}

PartialTable load_partial(std::string_view path) {
  return parse_partial(read_file(path));
}

}  // namespace tabalg
