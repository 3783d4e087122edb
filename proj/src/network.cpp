#include "crn/network.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace crn {

std::string_view describe(NetworkCondition c) {
  switch (c) {
    case NetworkCondition::no_self_reaction:
      return "a reaction may not have identical source and target (P -> P)";
    case NetworkCondition::complexes_used:
      return "every complex must occur in at least one reaction";
    case NetworkCondition::species_supported:
      return "every species must appear in the support of some complex";
    case NetworkCondition::no_duplicate_reactions:
      return "reactions must be distinct";
    case NetworkCondition::consistent_dimension:
      return "every complex must have one entry per species";
    case NetworkCondition::nonnegative_integer:
      return "chemical complexes must have nonnegative integer coefficients";
  }
  return "unknown condition";
}

ValidationError::ValidationError(NetworkCondition condition, const std::string& detail)
    : std::runtime_error(std::string(describe(condition)) + ": " + detail), condition_(condition) {}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         message),
      line_(line),
      column_(column) {}

ReactionNetwork::ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions,
                                 NetworkMode mode)
    : species_(std::move(species)), reactions_(std::move(reactions)), mode_(mode) {
  const std::size_t d = species_.size();
  std::set<std::pair<Complex, Complex>> seen;
  for (std::size_t r = 0; r < reactions_.size(); ++r) {
    const auto& rx = reactions_[r];
    if (rx.source.size() != d || rx.target.size() != d)
      throw ValidationError(NetworkCondition::consistent_dimension,
                            "reaction " + std::to_string(r) + " has the wrong dimension");
    if (mode_ == NetworkMode::chemical) {
      for (const auto* c : {&rx.source, &rx.target})
        for (const auto& q : *c)
          if (q < 0 || !is_integer(q))
            throw ValidationError(NetworkCondition::nonnegative_integer,
                                  "reaction " + std::to_string(r) + " has coefficient " + format_rational(q));
    }
    if (rx.source == rx.target)
      throw ValidationError(NetworkCondition::no_self_reaction, "reaction " + std::to_string(r));
    if (!seen.emplace(rx.source, rx.target).second)
      throw ValidationError(NetworkCondition::no_duplicate_reactions, "reaction " + std::to_string(r));
  }

  // Complexes are collected from reactions, so each one is used by construction.
  std::map<Complex, std::size_t> index;
  auto intern = [&](const Complex& c) {
    auto [it, inserted] = index.emplace(c, complexes_.size());
    if (inserted) complexes_.push_back(c);
    return it->second;
  };
  for (const auto& rx : reactions_) {
    source_idx_.push_back(intern(rx.source));
    target_idx_.push_back(intern(rx.target));
  }

  for (std::size_t s = 0; s < d; ++s) {
    bool supported = std::any_of(complexes_.begin(), complexes_.end(), [&](const Complex& c) { return c[s] != 0; });
    if (!supported) throw ValidationError(NetworkCondition::species_supported, "species " + species_[s]);
  }
}

std::size_t ReactionNetwork::complex_index(const Complex& c) const {
  auto it = std::find(complexes_.begin(), complexes_.end(), c);
  if (it == complexes_.end()) throw std::out_of_range("complex not in network");
  return static_cast<std::size_t>(it - complexes_.begin());
}

std::string ReactionNetwork::complex_label(const Complex& c) const {
  if (mode_ == NetworkMode::generalized) {
    std::string out = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) out += ",";
      out += format_rational(c[i]);
    }
    return out + ")";
  }
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (c[i] != 1) out += format_rational(c[i]);
    out += species_[i];
  }
  return out.empty() ? "0" : out;
}

std::string ReactionNetwork::reaction_label(std::size_t r) const {
  const auto& rx = reactions_.at(r);
  if (mode_ == NetworkMode::generalized) {
    auto v = rx.vector();
    std::string out = "source: " + complex_label(rx.source) + " vector: (";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",";
      out += format_rational(v[i]);
    }
    return out + ")";
  }
  return complex_label(rx.source) + " -> " + complex_label(rx.target);
}

bool equivalent(const ReactionNetwork& a, const ReactionNetwork& b) {
  if (a.species() != b.species() || a.mode() != b.mode()) return false;
  if (a.reaction_count() != b.reaction_count()) return false;
  auto key = [](const Reaction& r) {
    int kind = 0;
    double v1 = 0, v2 = 0;
    if (r.rate) {
      if (auto f = std::get_if<FixedRate>(&*r.rate)) {
        kind = 1;
        v1 = f->value;
      } else {
        auto i = std::get<RateInterval>(*r.rate);
        kind = 2;
        v1 = i.lo;
        v2 = i.hi;
      }
    }
    return std::make_tuple(r.source, r.target, kind, v1, v2);
  };
  std::vector<decltype(key(a.reactions()[0]))> ka, kb;
  for (const auto& r : a.reactions()) ka.push_back(key(r));
  for (const auto& r : b.reactions()) kb.push_back(key(r));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Cursor {
  std::string_view text;
  std::size_t line;
  std::size_t offset;  // column of text[0], 1-based

  [[noreturn]] void fail(std::size_t pos, const std::string& msg) const { throw ParseError(line, offset + pos, msg); }
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::size_t skip_space(std::string_view s, std::size_t pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  return pos;
}

std::string_view trim(std::string_view s) {
  std::size_t b = skip_space(s, 0);
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const Cursor& cur, std::string_view s, std::size_t pos) {
  std::string_view t = trim(s);
  double value = 0.0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) cur.fail(pos, "expected a number, got '" + std::string(t) + "'");
  return value;
}

/// "k=VALUE" or "k in (LO,HI)".
RateSpec parse_rate(const Cursor& cur, std::string_view meta, std::size_t base) {
  std::size_t p = skip_space(meta, 0);
  if (p >= meta.size() || meta[p] != 'k') cur.fail(base + p, "rate metadata must start with 'k'");
  p = skip_space(meta, p + 1);
  if (p < meta.size() && meta[p] == '=') {
    double k = parse_double(cur, meta.substr(p + 1), base + p + 1);
    if (!(k > 0)) cur.fail(base + p + 1, "rate constant must be positive");
    return FixedRate{k};
  }
  if (meta.substr(p, 2) == "in") {
    p = skip_space(meta, p + 2);
    if (p >= meta.size() || meta[p] != '(') cur.fail(base + p, "expected '(' after 'k in'");
    auto close = meta.find(')', p);
    auto comma = meta.find(',', p);
    if (close == std::string_view::npos || comma == std::string_view::npos || comma > close)
      cur.fail(base + p, "expected '(LO,HI)'");
    if (!trim(meta.substr(close + 1)).empty()) cur.fail(base + close + 1, "trailing text after rate interval");
    double lo = parse_double(cur, meta.substr(p + 1, comma - p - 1), base + p + 1);
    double hi = parse_double(cur, meta.substr(comma + 1, close - comma - 1), base + comma + 1);
    if (!(lo > 0 && lo < hi)) cur.fail(base + p, "rate interval must satisfy 0 < LO < HI");
    return RateInterval{lo, hi};
  }
  cur.fail(base + p, "expected 'k=VALUE' or 'k in (LO,HI)'");
}

using Terms = std::vector<std::pair<std::string, Rational>>;

Terms parse_chemical_complex(const Cursor& cur, std::string_view s, std::size_t base) {
  Terms terms;
  if (trim(s) == "0") return terms;
  if (trim(s).empty()) cur.fail(base, "empty complex (use 0 for the zero complex)");
  std::size_t start = 0;
  while (true) {
    std::size_t plus = s.find('+', start);
    std::string_view term = s.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start);
    std::size_t p = skip_space(term, 0);
    if (p >= term.size()) cur.fail(base + start + p, "empty term");
    std::size_t digits_end = p;
    while (digits_end < term.size() && std::isdigit(static_cast<unsigned char>(term[digits_end]))) ++digits_end;
    Rational coef = 1;
    if (digits_end > p) {
      coef = Rational(Integer(std::string(term.substr(p, digits_end - p)), 10));
      if (coef == 0) cur.fail(base + start + p, "coefficient must be positive");
    }
    std::size_t q = skip_space(term, digits_end);
    if (q >= term.size() || !is_ident_start(term[q])) cur.fail(base + start + q, "expected a species name");
    std::size_t name_end = q;
    while (name_end < term.size() && is_ident_char(term[name_end])) ++name_end;
    if (skip_space(term, name_end) != term.size()) cur.fail(base + start + name_end, "unexpected character");
    std::string name(term.substr(q, name_end - q));
    auto it = std::find_if(terms.begin(), terms.end(), [&](const auto& t) { return t.first == name; });
    if (it == terms.end()) terms.emplace_back(name, coef);
    else it->second += coef;
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return terms;
}

std::vector<std::string> parse_species_header(const Cursor& cur, std::string_view s, std::size_t base) {
  std::vector<std::string> names;
  std::size_t p = 0;
  while (true) {
    p = skip_space(s, p);
    if (p >= s.size()) break;
    if (s[p] == ',') {
      ++p;
      continue;
    }
    if (!is_ident_start(s[p])) cur.fail(base + p, "expected a species name");
    std::size_t e = p;
    while (e < s.size() && is_ident_char(s[e])) ++e;
    std::string name(s.substr(p, e - p));
    if (std::find(names.begin(), names.end(), name) != names.end()) cur.fail(base + p, "duplicate species " + name);
    names.push_back(name);
    p = e;
  }
  if (names.empty()) cur.fail(base, "species header lists no species");
  return names;
}

/// "(a,b,...)" starting at or after pos; returns entries and advances pos past ')'.
RationalVector parse_tuple(const Cursor& cur, std::string_view s, std::size_t& pos) {
  pos = skip_space(s, pos);
  if (pos >= s.size() || s[pos] != '(') cur.fail(pos, "expected '('");
  auto close = s.find(')', pos);
  if (close == std::string_view::npos) cur.fail(pos, "missing ')'");
  RationalVector out;
  std::size_t p = pos + 1;
  while (p <= close) {
    auto comma = s.find(',', p);
    std::size_t end = (comma == std::string_view::npos || comma > close) ? close : comma;
    std::string_view item = s.substr(p, end - p);
    try {
      out.push_back(parse_rational(item));
    } catch (const std::invalid_argument&) {
      cur.fail(p, "expected a decimal number, got '" + std::string(trim(item)) + "'");
    }
    p = end + 1;
  }
  pos = close + 1;
  return out;
}

std::string default_species_name(std::size_t i, std::size_t d) {
  if (d <= 3) return std::string(1, "xyz"[i]);
  return "x" + std::to_string(i + 1);
}

struct RawReaction {
  Terms source;
  Terms target;
  std::optional<RateSpec> rate;
  std::size_t line;
};

ReactionNetwork parse_chemical(std::string_view text) {
  std::vector<std::string> species;
  bool header = false;
  std::vector<RawReaction> raw;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    Cursor cur{line, line_no, 1};

    std::size_t first = skip_space(line, 0);
    if (line.substr(first, 8) == "species:") {
      if (header || !raw.empty()) cur.fail(first, "species header must come first and only once");
      species = parse_species_header(cur, line.substr(first + 8), first + 8);
      header = true;
      continue;
    }

    std::optional<RateSpec> rate;
    std::string_view body = line;
    if (auto bar = line.find('|'); bar != std::string_view::npos) {
      rate = parse_rate(cur, line.substr(bar + 1), bar + 1);
      body = line.substr(0, bar);
    }
    bool reversible = false;
    std::size_t arrow = body.find("<->");
    std::size_t arrow_len = 3;
    if (arrow != std::string_view::npos) {
      reversible = true;
    } else {
      arrow = body.find("->");
      arrow_len = 2;
      if (arrow == std::string_view::npos) cur.fail(first, "expected '->' or '<->'");
    }
    if (body.find("->", arrow + arrow_len) != std::string_view::npos)
      cur.fail(body.find("->", arrow + arrow_len), "more than one arrow");
    if (arrow > 0 && body[arrow - 1] == '<' && !reversible) cur.fail(arrow - 1, "malformed arrow");
    Terms lhs = parse_chemical_complex(cur, body.substr(0, arrow), 0);
    Terms rhs = parse_chemical_complex(cur, body.substr(arrow + arrow_len), arrow + arrow_len);
    for (const Terms* t : {&lhs, &rhs})
      for (const auto& [name, coef] : *t) {
        if (std::find(species.begin(), species.end(), name) == species.end()) {
          if (header) cur.fail(first, "species " + name + " is not listed in the species header");
          species.push_back(name);
        }
      }
    raw.push_back({lhs, rhs, rate, line_no});
    if (reversible) raw.push_back({rhs, lhs, rate, line_no});
  }

  auto to_complex = [&](const Terms& t) {
    Complex c(species.size(), Rational(0));
    for (const auto& [name, coef] : t)
      c[std::find(species.begin(), species.end(), name) - species.begin()] = coef;
    return c;
  };
  std::vector<Reaction> reactions;
  for (const auto& r : raw) reactions.push_back({to_complex(r.source), to_complex(r.target), r.rate});
  return ReactionNetwork(std::move(species), std::move(reactions), NetworkMode::chemical);
}

ReactionNetwork parse_generalized(std::string_view text) {
  std::vector<std::string> species;
  std::vector<Reaction> reactions;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    Cursor cur{line, line_no, 1};

    std::size_t p = skip_space(line, 0);
    if (line.substr(p, 8) == "species:") {
      if (!species.empty() || !reactions.empty()) cur.fail(p, "species header must come first and only once");
      species = parse_species_header(cur, line.substr(p + 8), p + 8);
      dim = species.size();
      continue;
    }
    std::optional<RateSpec> rate;
    std::string_view body = line;
    if (auto bar = line.find('|'); bar != std::string_view::npos) {
      rate = parse_rate(cur, line.substr(bar + 1), bar + 1);
      body = line.substr(0, bar);
    }
    if (body.substr(p, 7) != "source:") cur.fail(p, "expected 'source:'");
    p += 7;
    Complex source = parse_tuple(cur, body, p);
    p = skip_space(body, p);
    if (body.substr(p, 7) != "vector:") cur.fail(p, "expected 'vector:'");
    p += 7;
    RationalVector vec = parse_tuple(cur, body, p);
    if (skip_space(body, p) != body.size()) cur.fail(skip_space(body, p), "unexpected trailing text");
    if (dim == 0) dim = source.size();
    if (source.size() != dim || vec.size() != dim)
      cur.fail(0, "expected " + std::to_string(dim) + " entries in source and vector");
    reactions.push_back({source, source + vec, rate});
  }
  if (species.empty())
    for (std::size_t i = 0; i < dim; ++i) species.push_back(default_species_name(i, dim));
  return ReactionNetwork(std::move(species), std::move(reactions), NetworkMode::generalized);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_rate(const std::optional<RateSpec>& rate) {
  if (!rate) return "";
  if (auto f = std::get_if<FixedRate>(&*rate)) return " | k=" + format_double(f->value);
  auto i = std::get<RateInterval>(*rate);
  return " | k in (" + format_double(i.lo) + "," + format_double(i.hi) + ")";
}

}  // namespace

ReactionNetwork parse_network(std::string_view text, NetworkMode mode) {
  return mode == NetworkMode::chemical ? parse_chemical(text) : parse_generalized(text);
}

ReactionNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  bool generalized = path.size() >= 5 && path.substr(path.size() - 5) == ".gcrn";
  return parse_network(ss.str(), generalized ? NetworkMode::generalized : NetworkMode::chemical);
}

std::string format_network(const ReactionNetwork& net) {
  const auto& rx = net.reactions();
  std::vector<std::string> lines;
  std::vector<std::size_t> appearance;
  auto note_species = [&](const Complex& c) {
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0 && std::find(appearance.begin(), appearance.end(), i) == appearance.end()) appearance.push_back(i);
  };

  if (net.mode() == NetworkMode::generalized) {
    for (std::size_t r = 0; r < rx.size(); ++r) lines.push_back(net.reaction_label(r) + format_rate(rx[r].rate));
    std::vector<std::string> defaults;
    for (std::size_t i = 0; i < net.species_count(); ++i) defaults.push_back(default_species_name(i, net.species_count()));
    std::string out;
    if (defaults != net.species()) {
      out += "species:";
      for (std::size_t i = 0; i < net.species_count(); ++i) out += (i ? ", " : " ") + net.species()[i];
      out += "\n";
    }
    for (const auto& l : lines) out += l + "\n";
    return out;
  }

  std::vector<bool> used(rx.size(), false);
  for (std::size_t r = 0; r < rx.size(); ++r) {
    if (used[r]) continue;
    used[r] = true;
    std::string arrow = " -> ";
    for (std::size_t q = r + 1; q < rx.size(); ++q) {
      if (!used[q] && rx[q].source == rx[r].target && rx[q].target == rx[r].source && rx[q].rate == rx[r].rate) {
        used[q] = true;
        arrow = " <-> ";
        break;
      }
    }
    note_species(rx[r].source);
    note_species(rx[r].target);
    lines.push_back(net.complex_label(rx[r].source) + arrow + net.complex_label(rx[r].target) + format_rate(rx[r].rate));
  }

  std::string out;
  bool natural_order = appearance.size() == net.species_count();
  for (std::size_t i = 0; natural_order && i < appearance.size(); ++i) natural_order = appearance[i] == i;
  if (!natural_order) {
    out += "species:";
    for (std::size_t i = 0; i < net.species_count(); ++i) out += (i ? ", " : " ") + net.species()[i];
    out += "\n";
  }
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::vector<Complex> source_complexes(const ReactionNetwork& net) {
  std::set<Complex> s;
  for (const auto& r : net.reactions()) s.insert(r.source);
  return {s.begin(), s.end()};
}

ReactionNetwork reversed(const ReactionNetwork& net) {
  std::vector<Reaction> out;
  for (const auto& r : net.reactions()) out.push_back({r.target, r.source, r.rate});
  return ReactionNetwork(net.species(), std::move(out), net.mode());
}

}  // namespace crn
