#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "partact/action.hpp"
#include "partact/globalize.hpp"
#include "partact/partrep.hpp"

namespace partact {

// Declarative workspace files: a field line followed by [groupoid],
// [algebra], [action], [extension], [factorset], [representation] blocks.
// Scalars stay raw strings until a field backend parses them, so one parsed
// file serves both the rational and the prime-field instantiations.

struct RawTerm {
  std::string coef;  // "1" when the term was a bare basis label
  std::string label;
};
using RawVec = std::vector<RawTerm>;

struct RawMapPair {
  RawVec from, to;
};

struct Workspace {
  std::string field_tok;  // "Q" or "F<p>"

  bool has_groupoid = false;
  Groupoid G;

  int split_n = -1;
  std::vector<std::string> alg_basis;
  std::vector<std::tuple<std::string, std::string, RawVec>> alg_mul;

  bool has_action = false;
  std::map<std::string, std::vector<RawVec>> ideals;  // one generator per line
  std::map<std::string, std::vector<RawMapPair>> maps;
  std::vector<std::tuple<std::string, std::string, RawVec>> twists;

  bool has_extension = false;
  std::vector<std::tuple<std::string, std::string, RawVec>> wt;

  bool has_factorset = false;
  std::vector<std::tuple<std::string, std::string, std::string>> factorset;

  bool has_representation = false;
  int rep_dim = -1;
  std::map<std::string, std::vector<std::vector<std::string>>> reps;
};

namespace detail_io {

inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline RawVec parse_terms(const std::vector<std::string>& toks, size_t from, size_t to) {
  RawVec out;
  for (size_t i = from; i < to; ++i) {
    auto star = toks[i].find('*');
    if (star == std::string::npos)
      out.push_back({"1", toks[i]});
    else
      out.push_back({toks[i].substr(0, star), toks[i].substr(star + 1)});
  }
  return out;
}

}  // namespace detail_io

inline Workspace parse_workspace_text(const std::string& text) {
  using detail_io::parse_terms;
  using detail_io::tokens;
  Workspace ws;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;

  std::vector<std::string> arrow_names;
  std::vector<std::array<int, 3>> mul_triples;
  std::vector<std::pair<int, int>> inv_pairs;
  auto arrow_id = [&](const std::string& name, int line) {
    for (size_t i = 0; i < arrow_names.size(); ++i)
      if (arrow_names[i] == name) return static_cast<int>(i);
    throw SchemaError("line " + std::to_string(line) + ": unknown arrow '" + name + "'");
  };

  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    auto toks = tokens(raw);
    if (toks.empty()) continue;

    if (toks[0].front() == '[') {
      if (toks[0].back() != ']') throw SchemaError("line " + std::to_string(lineno) + ": malformed section header");
      section = toks[0].substr(1, toks[0].size() - 2);
      if (section == "action") ws.has_action = true;
      if (section == "extension") ws.has_extension = true;
      if (section == "factorset") ws.has_factorset = true;
      if (section == "representation") ws.has_representation = true;
      continue;
    }

    auto need = [&](size_t n) {
      if (toks.size() < n) throw SchemaError("line " + std::to_string(lineno) + ": too few tokens");
    };

    if (section.empty()) {
      if (toks[0] == "field") {
        need(2);
        ws.field_tok = toks[1];
      } else {
        throw SchemaError("line " + std::to_string(lineno) + ": expected 'field' before the first section");
      }
    } else if (section == "groupoid") {
      if (toks[0] == "arrows") {
        arrow_names.assign(toks.begin() + 1, toks.end());
      } else if (toks[0] == "inv") {
        need(3);
        inv_pairs.emplace_back(arrow_id(toks[1], lineno), arrow_id(toks[2], lineno));
      } else if (toks[0] == "mul") {
        need(4);
        mul_triples.push_back({arrow_id(toks[1], lineno), arrow_id(toks[2], lineno), arrow_id(toks[3], lineno)});
      } else {
        throw SchemaError("line " + std::to_string(lineno) + ": unknown groupoid directive '" + toks[0] + "'");
      }
    } else if (section == "algebra") {
      if (toks[0] == "split") {
        need(2);
        ws.split_n = std::stoi(toks[1]);
      } else if (toks[0] == "basis") {
        ws.alg_basis.assign(toks.begin() + 1, toks.end());
      } else if (toks[0] == "mul") {
        need(3);
        ws.alg_mul.emplace_back(toks[1], toks[2], parse_terms(toks, 3, toks.size()));
      } else {
        throw SchemaError("line " + std::to_string(lineno) + ": unknown algebra directive '" + toks[0] + "'");
      }
    } else if (section == "action") {
      if (toks[0] == "ideal") {
        need(2);
        ws.ideals[toks[1]].push_back(parse_terms(toks, 2, toks.size()));
      } else if (toks[0] == "map") {
        need(4);
        size_t arrowpos = 0;
        for (size_t i = 2; i < toks.size(); ++i)
          if (toks[i] == "->") arrowpos = i;
        if (arrowpos == 0) throw SchemaError("line " + std::to_string(lineno) + ": map needs '->'");
        ws.maps[toks[1]].push_back({parse_terms(toks, 2, arrowpos), parse_terms(toks, arrowpos + 1, toks.size())});
      } else if (toks[0] == "twist") {
        need(4);
        ws.twists.emplace_back(toks[1], toks[2], parse_terms(toks, 3, toks.size()));
      } else {
        throw SchemaError("line " + std::to_string(lineno) + ": unknown action directive '" + toks[0] + "'");
      }
    } else if (section == "extension") {
      if (toks[0] == "wt") {
        need(4);
        ws.wt.emplace_back(toks[1], toks[2], parse_terms(toks, 3, toks.size()));
      } else {
        throw SchemaError("line " + std::to_string(lineno) + ": unknown extension directive '" + toks[0] + "'");
      }
    } else if (section == "factorset") {
      if (toks[0] == "sigma") {
        need(4);
        ws.factorset.emplace_back(toks[1], toks[2], toks[3]);
      } else {
        throw SchemaError("line " + std::to_string(lineno) + ": unknown factorset directive '" + toks[0] + "'");
      }
    } else if (section == "representation") {
      if (toks[0] == "dim") {
        need(2);
        ws.rep_dim = std::stoi(toks[1]);
      } else if (toks[0] == "rep") {
        need(3);
        std::vector<std::vector<std::string>> rows(1);
        for (size_t i = 2; i < toks.size(); ++i) {
          if (toks[i] == "/")
            rows.emplace_back();
          else
            rows.back().push_back(toks[i]);
        }
        ws.reps[toks[1]] = std::move(rows);
      } else {
        throw SchemaError("line " + std::to_string(lineno) + ": unknown representation directive '" + toks[0] + "'");
      }
    } else {
      throw SchemaError("line " + std::to_string(lineno) + ": unknown section '" + section + "'");
    }
  }

  if (ws.field_tok.empty()) throw SchemaError("workspace has no field line");
  if (!arrow_names.empty()) {
    ws.G = Groupoid::from_tables(arrow_names, mul_triples, inv_pairs);
    ws.has_groupoid = true;
  }
  return ws;
}

inline Workspace parse_workspace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_workspace_text(buf.str());
}

// ---- field-specific instantiation -----------------------------------------

template <class K>
AlgebraPtr<K> build_algebra(const Workspace& ws, const K& f) {
  if (ws.split_n > 0) return Algebra<K>::split(f, ws.split_n);
  if (ws.alg_basis.empty()) throw SchemaError("workspace has no [algebra] block");
  int n = static_cast<int>(ws.alg_basis.size());
  auto label_id = [&](const std::string& name) {
    for (int i = 0; i < n; ++i)
      if (ws.alg_basis[static_cast<size_t>(i)] == name) return i;
    throw SchemaError("unknown basis label '" + name + "'");
  };
  std::vector<std::vector<Vec<K>>> table(static_cast<size_t>(n),
                                         std::vector<Vec<K>>(static_cast<size_t>(n), zero_vec(f, n)));
  for (auto& [a, b, terms] : ws.alg_mul) {
    Vec<K> v = zero_vec(f, n);
    for (auto& t : terms) v[static_cast<size_t>(label_id(t.label))] += f.parse(t.coef);
    table[static_cast<size_t>(label_id(a))][static_cast<size_t>(label_id(b))] = std::move(v);
  }
  return Algebra<K>::from_table(f, ws.alg_basis, table, /*check=*/true);
}

template <class K>
Vec<K> parse_vec(const RawVec& terms, const Algebra<K>& alg) {
  Vec<K> v = zero_vec(alg.field(), alg.dim());
  for (auto& t : terms) {
    int id = alg.find_label(t.label);
    if (id < 0) throw SchemaError("unknown basis label '" + t.label + "'");
    v[static_cast<size_t>(id)] += alg.field().parse(t.coef);
  }
  return v;
}

template <class K>
TwistedPartialAction<K> build_action(const Workspace& ws, const K&, AlgebraPtr<K> R) {
  if (!ws.has_groupoid) throw SchemaError("workspace has no [groupoid] block");
  if (!ws.has_action) throw SchemaError("workspace has no [action] block");
  const Groupoid& G = ws.G;
  TwistedPartialAction<K> act;
  act.G = G;
  act.R = R;

  for (int g = 0; g < G.size(); ++g) {
    auto it = ws.ideals.find(G.label(g));
    if (it == ws.ideals.end()) throw SchemaError("no ideal declared for arrow " + G.label(g));
    std::vector<Vec<K>> gens;
    for (auto& rv : it->second) gens.push_back(parse_vec(rv, *R));
    act.D.push_back(Ideal<K>::span(R, gens));
  }
  for (int g = 0; g < G.size(); ++g) {
    auto it = ws.maps.find(G.label(g));
    if (it == ws.maps.end()) throw SchemaError("no map declared for arrow " + G.label(g));
    std::vector<std::pair<Vec<K>, Vec<K>>> pairs;
    for (auto& mp : it->second) pairs.push_back({parse_vec(mp.from, *R), parse_vec(mp.to, *R)});
    act.alpha.push_back(LinearMap<K>::from_pairs(act.D[static_cast<size_t>(G.inv(g))],
                                                 act.D[static_cast<size_t>(g)], pairs));
  }
  for (auto& [xs, ys, terms] : ws.twists) {
    int x = G.find(xs), y = G.find(ys);
    if (x < 0 || y < 0) throw SchemaError("twist references unknown arrow");
    if (!G.composable(x, y)) throw SchemaError("twist declared on non-composable pair (" + xs + "," + ys + ")");
    act.w.set(x, y, parse_vec(terms, *R));
  }
  act.check_shapes();
  return act;
}

template <class K>
ExtensionData<K> build_extension(const Workspace& ws, const Algebra<K>& R) {
  if (!ws.has_extension) throw SchemaError("workspace has no [extension] block");
  ExtensionData<K> ext;
  for (auto& [xs, ys, terms] : ws.wt) {
    int x = ws.G.find(xs), y = ws.G.find(ys);
    if (x < 0 || y < 0) throw SchemaError("wt references unknown arrow");
    ext.wt.set(x, y, parse_vec(terms, R));
  }
  return ext;
}

template <class K>
PartialFactorSet<K> build_factorset(const Workspace& ws, const K& f) {
  if (!ws.has_groupoid) throw SchemaError("workspace has no [groupoid] block");
  if (!ws.has_factorset) throw SchemaError("workspace has no [factorset] block");
  PartialFactorSet<K> out(f, ws.G);
  for (auto& [xs, ys, val] : ws.factorset) {
    int x = ws.G.find(xs), y = ws.G.find(ys);
    if (x < 0 || y < 0) throw SchemaError("sigma references unknown arrow");
    out.at(x, y) = f.parse(val);
  }
  return out;
}

template <class K>
std::vector<Mat<K>> build_representation(const Workspace& ws, const K& f) {
  if (!ws.has_groupoid) throw SchemaError("workspace has no [groupoid] block");
  if (!ws.has_representation || ws.rep_dim <= 0)
    throw SchemaError("workspace has no [representation] block with a dim line");
  std::vector<Mat<K>> out;
  for (int g = 0; g < ws.G.size(); ++g) {
    auto it = ws.reps.find(ws.G.label(g));
    if (it == ws.reps.end()) throw SchemaError("no rep matrix for arrow " + ws.G.label(g));
    Mat<K> m(f, ws.rep_dim, ws.rep_dim);
    if (static_cast<int>(it->second.size()) != ws.rep_dim)
      throw SchemaError("rep matrix for " + ws.G.label(g) + " has wrong row count");
    for (int r = 0; r < ws.rep_dim; ++r) {
      auto& row = it->second[static_cast<size_t>(r)];
      if (static_cast<int>(row.size()) != ws.rep_dim)
        throw SchemaError("rep matrix for " + ws.G.label(g) + " has a wrong-length row");
      for (int c = 0; c < ws.rep_dim; ++c) m.at(r, c) = f.parse(row[static_cast<size_t>(c)]);
    }
    out.push_back(std::move(m));
  }
  return out;
}

/// Serialize an action back into the workspace grammar (used by `globalize
/// --out` to emit the constructed global action).
template <class K>
std::string write_action_file(const TwistedPartialAction<K>& act) {
  const K& f = act.R->field();
  const Groupoid& G = act.G;
  std::ostringstream out;
  out << "field " << f.name() << "\n\n[groupoid]\narrows";
  for (auto& l : G.labels()) out << " " << l;
  out << "\n";
  for (int x = 0; x < G.size(); ++x)
    if (x <= G.inv(x)) out << "inv " << G.label(x) << " " << G.label(G.inv(x)) << "\n";
  for (int x = 0; x < G.size(); ++x)
    for (int y = 0; y < G.size(); ++y)
      if (G.composable(x, y))
        out << "mul " << G.label(x) << " " << G.label(y) << " " << G.label(G.compose(x, y)) << "\n";

  out << "\n[algebra]\nbasis";
  for (auto& l : act.R->labels()) out << " " << l;
  out << "\n";
  auto show_terms = [&](const Vec<K>& v) {
    std::string s;
    for (int i = 0; i < act.R->dim(); ++i) {
      if (v[static_cast<size_t>(i)].is_zero()) continue;
      if (!s.empty()) s += " ";
      s += f.print(v[static_cast<size_t>(i)]) + "*" + act.R->label(i);
    }
    return s;
  };
  for (int i = 0; i < act.R->dim(); ++i)
    for (int j = 0; j < act.R->dim(); ++j) {
      Vec<K> prod = act.R->mul(act.R->basis_vec(i), act.R->basis_vec(j));
      if (is_zero_vec<K>(prod)) continue;
      out << "mul " << act.R->label(i) << " " << act.R->label(j) << " " << show_terms(prod) << "\n";
    }

  out << "\n[action]\n";
  for (int g = 0; g < G.size(); ++g)
    for (int i = 0; i < act.ideal(g).dim(); ++i)
      out << "ideal " << G.label(g) << " " << show_terms(act.ideal(g).basis_vec(i)) << "\n";
  for (int g = 0; g < G.size(); ++g) {
    const auto& m = act.map(g);
    for (int i = 0; i < m.domain().dim(); ++i)
      out << "map " << G.label(g) << " " << show_terms(m.domain().basis_vec(i)) << " -> "
          << show_terms(m.images().row(i)) << "\n";
    if (m.domain().dim() == 0) {
      // zero domain: nothing to record, but the parser needs a map line
      out << "map " << G.label(g) << " 0*" << act.R->label(0) << " -> 0*" << act.R->label(0) << "\n";
    }
  }
  for (auto& [pr, wv] : act.w.entries()) {
    out << "twist " << G.label(pr.first) << " " << G.label(pr.second);
    std::string terms = show_terms(wv);
    out << " " << (terms.empty() ? "0*" + act.R->label(0) : terms) << "\n";
  }
  return out.str();
}

}  // namespace partact
