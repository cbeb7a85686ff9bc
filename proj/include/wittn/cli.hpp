#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "wittn/error.hpp"
#include "wittn/json_io.hpp"
#include "wittn/ktheory.hpp"
#include "wittn/lattice.hpp"
#include "wittn/truncation.hpp"
#include "wittn/witt.hpp"
#include "wittn/zrank.hpp"

namespace wittn::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kDomain = 3, kBudget = 4 };

/// Bad flag values discovered after parsing (mapped to exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Json, Table, Csv };

struct Args {
  std::string format = "json";

  std::vector<std::uint64_t> a;
  std::string I = "all";
  std::uint64_t p = 0;
  std::uint64_t f = 1;
  std::uint64_t q = 0;
  std::int64_t deg = 0;
  std::uint64_t deg_max = 0;
  std::uint64_t budget = kDefaultBruteBudget;
  bool oracle = false;
  bool full = false;
  bool generated = false;
  bool vertex = false;

  std::string set;
  std::string points;
  std::string point;
  std::string x;
  std::string y;
  std::string to;
  std::size_t axis = 0;
  std::uint64_t r = 0;
  std::vector<std::uint64_t> s;

  std::string s1, s2, euclid_a;
  std::vector<std::string> torus;
};

namespace detail {

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "table") return Format::Table;
  if (s == "csv") return Format::Csv;
  throw UsageError("unknown format \"" + s + "\"");
}

/// Inline JSON, "@path" for a file, or "-" for standard input.
inline json load_json(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  std::string body;
  if (text == "-") {
    body.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else if (text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw UsageError("cannot read " + text.substr(1));
    body.assign(std::istreambuf_iterator<char>(in), {});
  } else {
    body = text;
  }
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string(flag) + ": invalid JSON (" + e.what() + ")");
  }
}

/// "" or "none" = ∅, "all" = {1..n}, otherwise comma-separated 1-based indices.
inline AxisSet parse_axes(const std::string& text, std::size_t n) {
  AxisSet out;
  if (text == "all") {
    for (std::size_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  if (text.empty() || text == "none") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || v < 1 || v > n) throw UsageError("--I: bad index \"" + item + "\" for n = " + std::to_string(n));
    out.push_back(v - 1);
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw UsageError("--I: repeated index");
  return out;
}

inline json axes_to_json(const AxisSet& I) {
  json j = json::array();
  for (auto i : I) j.push_back(i + 1);
  return j;
}

inline std::string axes_str(const AxisSet& I) {
  std::string s = "{";
  for (std::size_t k = 0; k < I.size(); ++k) s += (k ? "," : "") + std::to_string(I[k] + 1);
  return s + "}";
}

inline std::size_t axis_flag(const Args& a, std::size_t n) {
  if (a.axis < 1 || a.axis > n) throw UsageError("--axis must be in 1.." + std::to_string(n));
  return a.axis - 1;
}

inline std::string join(const std::vector<std::uint64_t>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? sep : "") + std::to_string(v[k]);
  return s;
}

inline ProblemSpec spec_from(const Args& a) {
  if (a.p == 0) throw UsageError("--p is required");
  if (a.a.empty()) throw UsageError("--a is required");
  ProblemSpec spec{a.p, a.f, a.a};
  spec.validate();
  return spec;
}

/// log_|k| of a p-group order; exact because every factor is a power of p.
inline Integer log_field(const AbelianGroup& g, const ProblemSpec& spec) {
  Integer e = 0;
  for (const auto& [factor, count] : g.multiplicities()) {
    Integer q = factor;
    std::uint64_t m = 0;
    for (; q > 1; q /= spec.p) ++m;
    e += count * m;
  }
  return e / spec.f;
}

class Printer {
 public:
  Printer(std::ostream& out, Format fmt) : out_(out), fmt_(fmt) {}

  Format format() const noexcept { return fmt_; }

  void emit(const json& j, const std::string& table) {
    if (fmt_ == Format::Csv) throw UsageError("--format csv is only supported by zrank");
    if (fmt_ == Format::Table)
      out_ << table;
    else
      out_ << j.dump(2) << "\n";
  }

  std::ostream& raw() { return out_; }

 private:
  std::ostream& out_;
  Format fmt_;
};

inline std::string points_table(const TruncationSet& S) {
  std::string s = "n = " + std::to_string(S.dim()) + ", |S| = " + std::to_string(S.size()) + "\n";
  for (const auto& p : S.points()) s += p.str() + "\n";
  return s;
}

// ---- trunc -----------------------------------------------------------------

inline void trunc_sq(const Args& a, Printer& out) {
  if (a.a.empty()) throw UsageError("--a is required");
  if (a.q < 1) throw UsageError("--q must be >= 1");
  const auto I = parse_axes(a.I, a.a.size());
  auto S = sq_set(a.a, a.q, I);
  out.emit(set_to_json(S), points_table(S));
}

inline void trunc_closure(const Args& a, Printer& out) {
  const auto j = load_json(a.points, "--points");
  std::vector<Point> gens;
  for (const auto& p : j) gens.push_back(point_from_json(p));
  auto S = closure(gens);
  out.emit(set_to_json(S), points_table(S));
}

/// Exit status 0 if the set is division-closed, 3 otherwise.
inline int trunc_validate(const Args& a, Printer& out) {
  const auto j = load_json(a.set, "--set");
  const auto n = wittn::detail::to_u64(wittn::detail::require(j, "n"));
  std::vector<Point> pts;
  for (const auto& p : wittn::detail::require(j, "points")) {
    pts.push_back(point_from_json(p));
    if (pts.back().dim() != n) throw DimensionMismatch("point " + pts.back().str() + " has the wrong dimension");
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const auto S = TruncationSet::from_sorted_unchecked(n, std::move(pts));
  const auto bad = S.first_closure_violation();
  json r{{"valid", !bad.has_value()}, {"size", static_cast<std::uint64_t>(S.size())}};
  if (bad) r["violation"] = point_to_json(*bad);
  out.emit(r, bad ? "not division-closed: " + bad->str() + " has a divisor outside the set\n"
                  : "division-closed, " + std::to_string(S.size()) + " points\n");
  return bad ? kDomain : kOk;
}

inline void trunc_decompose(const Args& a, Printer& out) {
  const auto S = set_from_json(load_json(a.set, "--set"));
  json lines = json::array();
  std::string table;
  for (const auto& line : decompose(S)) {
    lines.push_back({{"primitive", point_to_json(line.primitive)}, {"multipliers", line.multipliers}});
    table += line.primitive.str() + " : " + join(line.multipliers, " ") + "\n";
  }
  out.emit(json{{"lines", std::move(lines)}}, table);
}

inline void trunc_quotient(const Args& a, Printer& out) {
  const auto S = set_from_json(load_json(a.set, "--set"));
  if (a.r < 1) throw UsageError("--r must be >= 1");
  auto Q = quotient(S, axis_flag(a, S.dim()), a.r);
  out.emit(set_to_json(Q), points_table(Q));
}

inline void trunc_line(const Args& a, Printer& out) {
  const auto S = set_from_json(load_json(a.set, "--set"));
  const auto s = point_from_json(load_json(a.point, "--point"));
  auto L = a.generated ? generated_intersect(S, s) : line_intersect(S, s);
  out.emit(set_to_json(L), points_table(L));
}

inline void trunc_pline(const Args& a, Printer& out) {
  const auto S = set_from_json(load_json(a.set, "--set"));
  const auto s = point_from_json(load_json(a.point, "--point"));
  if (a.p == 0) throw UsageError("--p is required");
  const auto m = p_line(S, s, a.p);
  out.emit(json{{"length", m}}, std::to_string(m) + "\n");
}

// ---- witt ------------------------------------------------------------------

template <CommutativeRing R>
WittVector<R> vector_over(const WittRing<R>& W, const json& j, const char* flag) {
  const auto desc = ring_from_json(wittn::detail::require(j, "ring"));
  auto any = make_ring(desc);
  const R* other = std::get_if<R>(&any);
  if (!other || !(other->descriptor() == W.base().descriptor()))
    throw SetMismatch(std::string(flag) + " is over a different coefficient ring");
  return witt_from_json(W, j);
}

template <CommutativeRing R>
std::string vector_table(const WittVector<R>& x) {
  std::string s;
  for (std::size_t i = 0; i < x.set().size(); ++i)
    s += x.set().points()[i].str() + " : " + x.ring().format(x.components()[i]) + "\n";
  return s;
}

template <CommutativeRing R>
void witt_typed(const R& ring, const std::string& op, const Args& a, const json& jx, Printer& out) {
  auto rp = std::make_shared<const R>(ring);
  auto S = std::make_shared<const TruncationSet>(set_from_json(wittn::detail::require(jx, "set")));
  const WittRing<R> W(rp, S);
  const auto x = witt_from_json(W, jx);

  auto show = [&](const WittVector<R>& v) { out.emit(witt_to_json(v), vector_table(v)); };
  auto other = [&] {
    const auto jy = load_json(a.y, "--y");
    return vector_over(W, jy, "--y");
  };

  if (op == "add") return show(W.add(x, other()));
  if (op == "sub") return show(W.sub(x, other()));
  if (op == "mul") return show(W.mul(x, other()));
  if (op == "neg") return show(W.neg(x));
  if (op == "ghost") {
    const auto g = W.ghost(x);
    json comps = json::array();
    std::string table;
    for (std::size_t i = 0; i < g.size(); ++i) {
      comps.push_back(json::array({point_to_json(S->points()[i]), ring.format(g[i])}));
      table += S->points()[i].str() + " : " + ring.format(g[i]) + "\n";
    }
    return out.emit(json{{"set", set_to_json(*S)}, {"ring", ring_to_json(ring.descriptor())}, {"ghost", std::move(comps)}},
                    table);
  }
  if (op == "frob") {
    if (a.r < 1) throw UsageError("--r must be >= 1");
    return show(frobenius(W, x, axis_flag(a, S->dim()), a.r));
  }
  if (op == "versch") {
    if (a.r < 1) throw UsageError("--r must be >= 1");
    auto T = std::make_shared<const TruncationSet>(set_from_json(load_json(a.to, "--to")));
    const WittRing<R> WT(rp, T);
    return show(verschiebung(WT, x, axis_flag(a, T->dim()), a.r));
  }
  if (op == "restrict") {
    auto T = std::make_shared<const TruncationSet>(set_from_json(load_json(a.to, "--to")));
    return show(restrict(x, T));
  }
  if (op == "split") {
    if (a.p == 0) throw UsageError("--p is required");
    const auto split = p_typical_split(W, x, a.p);
    json factors = json::array();
    std::string table;
    for (const auto& fac : split.factors) {
      factors.push_back({{"primitive", point_to_json(fac.primitive)}, {"e", fac.e}, {"vector", witt_to_json(fac.vector)}});
      table += fac.primitive.str() + " e=" + std::to_string(fac.e) + " :";
      for (const auto& c : fac.vector.components()) table += " " + ring.format(c);
      table += "\n";
    }
    return out.emit(json{{"p", split.p}, {"factors", std::move(factors)}}, table);
  }
  throw UsageError("unknown witt operation \"" + op + "\"");
}

inline void witt_command(const std::string& op, const Args& a, Printer& out) {
  const auto jx = load_json(a.x, "--x");
  auto ring = make_ring(ring_from_json(wittn::detail::require(jx, "ring")));
  std::visit([&](const auto& r) { witt_typed(r, op, a, jx, out); }, ring);
}

// ---- K-theory --------------------------------------------------------------

inline int khat_command(const Args& a, Printer& out) {
  const auto spec = spec_from(a);
  if (a.q < 1) throw UsageError("--q must be >= 1");
  const auto g = khat_group(spec, a.q);
  const auto expected = khat_order_exponent(spec, a.q);
  const bool formula_ok = g.order() == ipow(spec.field_size(), expected.get_ui());
  json r{{"spec", spec_to_json(spec)},
         {"q", a.q},
         {"degree", 2 * a.q - 1},
         {"group", group_to_json(g)},
         {"order_log_k", integer_to_json(log_field(g, spec))},
         {"checks", {{"order_formula", formula_ok}}}};
  std::string table = "K^_" + std::to_string(2 * a.q - 1) + " = " + g.str() + "\n";
  table += "order = |k|^" + log_field(g, spec).get_str() + (formula_ok ? " (matches formula)\n" : " (FORMULA MISMATCH)\n");
  bool ok = formula_ok;
  if (a.oracle) {
    const auto b = khat_brute(spec, a.q, a.budget);
    const bool match = b == g;
    r["checks"]["oracle_match"] = match;
    r["oracle"] = group_to_json(b);
    table += "oracle = " + b.str() + (match ? " (match)\n" : " (MISMATCH)\n");
    ok = ok && match;
  }
  out.emit(r, table);
  return ok ? kOk : kFailure;
}

inline void e1_command(const Args& a, Printer& out) {
  const auto spec = spec_from(a);
  if (a.q < 1) throw UsageError("--q must be >= 1");
  if (a.full) {
    const auto page = e1_full(spec, a.q);
    json cells = json::array();
    std::string table;
    for (std::size_t t = 1; t < page.cells.size(); ++t)
      for (std::size_t s = 0; s <= page.n; ++s) {
        const auto& g = page.at(s, t);
        cells.push_back({{"s", s}, {"t", t}, {"group", group_to_json(g)}, {"order_log_k", integer_to_json(log_field(g, spec))}});
        table += "E1[s=" + std::to_string(s) + ", t=" + std::to_string(t) + "] : |k|^" + log_field(g, spec).get_str() + "\n";
      }
    return out.emit(json{{"spec", spec_to_json(spec)}, {"q_max", a.q}, {"cells", std::move(cells)}}, table);
  }
  const auto row = e1_hat(spec, a.q);
  json cols = json::array();
  std::string table;
  for (std::size_t s = 0; s < row.columns.size(); ++s) {
    json entries = json::array();
    Integer sum_of_orders = 0;
    bool formula_ok = true;
    for (const auto& e : row.columns[s]) {
      entries.push_back({{"I", axes_to_json(e.I)},
                         {"exponent", integer_to_json(e.exponent)},
                         {"formula_exponent", integer_to_json(e.formula_exponent)},
                         {"group", group_to_json(e.group)}});
      sum_of_orders += ipow(spec.field_size(), e.exponent.get_ui());
      formula_ok = formula_ok && e.exponent == e.formula_exponent;
      table += "s=" + std::to_string(s) + " I=" + axes_str(e.I) + " : |k|^" + e.exponent.get_str() + "\n";
    }
    const Integer product_exponent = row.column_exponent(s);
    const bool differ = sum_of_orders != ipow(spec.field_size(), product_exponent.get_ui());
    cols.push_back({{"s", s},
                    {"entries", std::move(entries)},
                    {"order_log_k", integer_to_json(product_exponent)},
                    {"sum_of_orders", integer_to_json(sum_of_orders)},
                    {"sum_differs_from_product", differ},
                    {"formula_match", formula_ok}});
    table += "s=" + std::to_string(s) + " total : |k|^" + product_exponent.get_str() + "\n";
  }
  out.emit(json{{"spec", spec_to_json(spec)}, {"q", a.q}, {"t", 2 * a.q - 1}, {"columns", std::move(cols)}}, table);
}

inline void ktilde_command(const Args& a, Printer& out) {
  const auto spec = spec_from(a);
  const auto g = ktilde_group(spec, a.deg);
  out.emit(json{{"spec", spec_to_json(spec)},
                {"degree", a.deg},
                {"group", group_to_json(g)},
                {"order_log_k", integer_to_json(log_field(g, spec))}},
           "K~_" + std::to_string(a.deg) + " = " + g.str() + "\n");
}

inline void tf_command(const Args& a, Printer& out) {
  const auto spec = spec_from(a);
  const auto I = parse_axes(a.I, spec.n());
  if (a.s.empty()) throw UsageError("--s is required");
  for (auto v : a.s)
    if (v == 0) throw UsageError("--s entries must be positive");
  const Point s(a.s);
  std::int64_t degree = a.deg;
  if (a.q > 0) degree = static_cast<std::int64_t>(2 * a.q - 1);
  if (degree == 0 && a.q == 0) throw UsageError("one of --q or --deg is required");
  const auto r = tf_group_in_degree(spec, I, s, degree);
  out.emit(json{{"spec", spec_to_json(spec)},
                {"I", axes_to_json(I)},
                {"s", point_to_json(s)},
                {"degree", degree},
                {"set", set_to_json(r.set)},
                {"multipliers", r.multipliers},
                {"group", group_to_json(r.group)},
                {"order_log_k", integer_to_json(log_field(r.group, spec))}},
           "TF_" + std::to_string(degree) + "(" + axes_str(I) + "; " + s.str() + ") = " + r.group.str() + "\n");
}

// ---- zrank / euclid --------------------------------------------------------

inline int zrank_command(const Args& a, Printer& out) {
  if (a.a.empty()) throw UsageError("--a is required");
  if (a.deg_max < 1) throw UsageError("--deg-max must be >= 1");
  const bool vertex = a.vertex || a.oracle;
  const auto I = parse_axes(a.I, a.a.size());
  const auto series = vertex ? tc_vertex_series(a.a, I, a.deg_max) : k_rational_series(a.a, a.deg_max);
  bool ok = true;
  json r{{"a", a.a}, {"deg_max", a.deg_max}, {"series", vertex ? "tc_vertex" : "k_rational"}};
  if (vertex) r["I"] = axes_to_json(I);
  r["coefficients"] = series_to_json(series);
  if (a.oracle) {
    ok = tc_vertex_series_oracle(a.a, I, a.deg_max) == series;
    r["checks"] = {{"oracle_match", ok}};
  }
  if (out.format() == Format::Csv) {
    out.raw() << "degree,coefficient\n";
    for (std::uint64_t d = 1; d <= series.cutoff; ++d) out.raw() << d << "," << series[d].get_str() << "\n";
  } else {
    std::string table;
    for (std::uint64_t d = 1; d <= series.cutoff; ++d) table += std::to_string(d) + "\t" + series[d].get_str() + "\n";
    out.emit(r, table);
  }
  return ok ? kOk : kFailure;
}

inline std::string matrix_table(const char* name, const IntMatrix& m) {
  std::string s = name;
  s += " =";
  for (const auto& row : m.to_rows()) {
    s += " [";
    for (std::size_t j = 0; j < row.size(); ++j) s += (j ? " " : "") + row[j].get_str();
    s += "]";
  }
  return s + "\n";
}

inline Integer integer_flag(const std::string& v, const char* flag) {
  if (v.empty()) throw UsageError(std::string(flag) + " is required");
  return parse_integer(v);
}

inline void euclid_command(const Args& a, Printer& out) {
  if (!a.torus.empty()) {
    std::vector<Integer> s;
    for (const auto& v : a.torus) s.push_back(parse_integer(v));
    const auto t = torus_reduce(s);
    return out.emit(torus_to_json(t), "g = " + t.g.get_str() + "\n" + matrix_table("M", t.M));
  }
  const auto r = euclid_factorize(integer_flag(a.s1, "--s1"), integer_flag(a.s2, "--s2"), integer_flag(a.euclid_a, "--a"));
  std::string table = "g = " + r.g.get_str() + ", e = " + r.e.get_str() + ", d = " + r.d.get_str() + "\n";
  table += matrix_table("A", r.A) + matrix_table("B", r.B) + matrix_table("B'", r.Bp) + matrix_table("C", r.C);
  out.emit(euclid_to_json(r), table);
}

}  // namespace detail

/// Runs the command line; output goes to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Args a;
  CLI::App app{"Witt vectors on truncation sets and K-theory of truncated polynomial rings"};
  app.set_version_flag("--version", "wittn 1.0.0");
  app.add_option("--format", a.format, "Output format: json, table or csv (zrank only)")
      ->check(CLI::IsMember({"json", "table", "csv"}));
  app.require_subcommand(1);
  app.fallthrough();

  auto spec_flags = [&](CLI::App* c) {
    c->add_option("--p", a.p, "Characteristic of k = F_{p^f}")->required();
    c->add_option("--f", a.f, "Degree of k over F_p")->capture_default_str();
    c->add_option("--a", a.a, "Truncation exponents a_1,...,a_n")->delimiter(',')->required();
  };

  // trunc
  auto* trunc = app.add_subcommand("trunc", "Enumerate and inspect truncation sets");
  trunc->require_subcommand(1);
  auto* t_sq = trunc->add_subcommand("sq", "The set S_q(I)");
  t_sq->add_option("--a", a.a, "Exponents a_1,...,a_n")->delimiter(',')->required();
  t_sq->add_option("--q", a.q, "q >= 1")->required();
  t_sq->add_option("--I", a.I, "1-based axes (\"\" for none, \"all\")");
  auto* t_closure = trunc->add_subcommand("closure", "Division closure of a list of points");
  t_closure->add_option("--points", a.points, "JSON array of points")->required();
  auto* t_validate = trunc->add_subcommand("validate", "Check that a set is division-closed");
  t_validate->add_option("--set", a.set, "Truncation set JSON")->required();
  auto* t_decompose = trunc->add_subcommand("decompose", "Orbit-line decomposition");
  t_decompose->add_option("--set", a.set, "Truncation set JSON")->required();
  auto* t_quotient = trunc->add_subcommand("quotient", "S / (1,..,r,..,1)");
  t_quotient->add_option("--set", a.set, "Truncation set JSON")->required();
  t_quotient->add_option("--axis", a.axis, "1-based axis")->required();
  t_quotient->add_option("--r", a.r, "Divisor r >= 1")->required();
  auto* t_line = trunc->add_subcommand("line", "{d : d s in S}, or the <s> variant with --generated");
  t_line->add_option("--set", a.set, "Truncation set JSON")->required();
  t_line->add_option("--point", a.point, "Point as a JSON array")->required();
  t_line->add_flag("--generated", a.generated, "Report <s> ∩ S by multipliers of the primitive vector");
  auto* t_pline = trunc->add_subcommand("pline", "Length of the p-line through a point");
  t_pline->add_option("--set", a.set, "Truncation set JSON")->required();
  t_pline->add_option("--point", a.point, "Point as a JSON array")->required();
  t_pline->add_option("--p", a.p, "Prime p")->required();

  // witt
  auto* witt = app.add_subcommand("witt", "Operate on Witt vectors given as JSON (inline, @file or -)");
  witt->require_subcommand(1);
  std::vector<CLI::App*> witt_ops;
  const std::pair<const char*, const char*> witt_names[] = {
      {"add", "x + y"},
      {"sub", "x - y"},
      {"mul", "x * y"},
      {"neg", "-x"},
      {"ghost", "Ghost components of x"},
      {"frob", "Frobenius F^i_r"},
      {"versch", "Verschiebung V^i_r into the set given by --to"},
      {"restrict", "Restriction to the subset given by --to"},
      {"split", "p-typical decomposition"},
  };
  for (const auto& [op, help] : witt_names) {
    auto* c = witt->add_subcommand(op, help);
    c->add_option("--x", a.x, "Witt vector JSON")->required();
    witt_ops.push_back(c);
  }
  for (auto* c : witt_ops) {
    const auto name = c->get_name();
    if (name == "add" || name == "sub" || name == "mul") c->add_option("--y", a.y, "Second Witt vector JSON")->required();
    if (name == "frob" || name == "versch") {
      c->add_option("--axis", a.axis, "1-based axis")->required();
      c->add_option("--r", a.r, "Index r >= 1")->required();
    }
    if (name == "versch" || name == "restrict") c->add_option("--to", a.to, "Target truncation set JSON")->required();
    if (name == "split") c->add_option("--p", a.p, "Prime p")->required();
  }

  auto* khat = app.add_subcommand("khat", "Relative K-group K^_{2q-1} over F_{p^f}");
  spec_flags(khat);
  khat->add_option("--q", a.q, "q >= 1")->required();
  khat->add_flag("--oracle", a.oracle, "Also run the brute-force oracle and compare");
  khat->add_option("--budget", a.budget, "Oracle budget on |W_S(k)|")->capture_default_str();

  auto* e1 = app.add_subcommand("e1", "E_1 page of the spectral sequence");
  spec_flags(e1);
  e1->add_option("--q", a.q, "Row t = 2q-1 (or rows 1..2q with --full)")->required();
  e1->add_flag("--full", a.full, "Full page including the exterior factor");

  auto* ktilde = app.add_subcommand("ktilde", "K~_m over F_{p^f}");
  spec_flags(ktilde);
  ktilde->add_option("--deg", a.deg, "Degree m")->required();

  auto* tf = app.add_subcommand("tf", "TF groups of the vertex I at s");
  spec_flags(tf);
  tf->add_option("--I", a.I, "1-based axes (\"\" for none, \"all\")");
  tf->add_option("--s", a.s, "Point s")->delimiter(',')->required();
  tf->add_option("--q", a.q, "Degree 2q-1");
  tf->add_option("--deg", a.deg, "Degree");

  auto* zrank = app.add_subcommand("zrank", "Rational Poincare series over Z");
  zrank->add_option("--a", a.a, "Exponents a_1,...,a_n")->delimiter(',')->required();
  zrank->add_option("--deg-max", a.deg_max, "Highest degree")->required();
  zrank->add_option("--I", a.I, "Vertex series for these axes instead of the K-theory series");
  zrank->add_flag("--oracle", a.oracle, "Compare the vertex series with lattice enumeration");

  auto* euclid = app.add_subcommand("euclid", "GL_2(Z) factorizations, or torus reduction with --torus");
  euclid->add_option("--s1", a.s1, "s1 >= 1");
  euclid->add_option("--s2", a.s2, "s2 >= 1");
  euclid->add_option("--a", a.euclid_a, "a >= 1");
  euclid->add_option("--torus", a.torus, "Tuple s_1,...,s_m")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "wittn 1.0.0\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    detail::Printer printer(out, detail::parse_format(a.format));
    if (trunc->parsed()) {
      if (t_sq->parsed()) detail::trunc_sq(a, printer);
      if (t_closure->parsed()) detail::trunc_closure(a, printer);
      if (t_validate->parsed()) return detail::trunc_validate(a, printer);
      if (t_decompose->parsed()) detail::trunc_decompose(a, printer);
      if (t_quotient->parsed()) detail::trunc_quotient(a, printer);
      if (t_line->parsed()) detail::trunc_line(a, printer);
      if (t_pline->parsed()) detail::trunc_pline(a, printer);
      return kOk;
    }
    if (witt->parsed()) {
      for (auto* c : witt_ops)
        if (c->parsed()) detail::witt_command(c->get_name(), a, printer);
      return kOk;
    }
    if (khat->parsed()) return detail::khat_command(a, printer);
    if (e1->parsed()) detail::e1_command(a, printer);
    if (ktilde->parsed()) detail::ktilde_command(a, printer);
    if (tf->parsed()) detail::tf_command(a, printer);
    if (zrank->parsed()) {
      a.vertex = zrank->get_option("--I")->count() > 0;
      return detail::zrank_command(a, printer);
    }
    if (euclid->parsed()) detail::euclid_command(a, printer);
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const InternalVerificationFailure& e) {
    err << "internal verification failure: " << e.what() << "\n";
    return kFailure;
  } catch (const json::exception& e) {
    err << "usage error: malformed JSON input: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace wittn::cli
