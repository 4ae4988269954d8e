#pragma once

#include <fstream>
#include <optional>
#include <string>

#include "json.hpp"
#include "partact/crossprod.hpp"
#include "partact/io.hpp"
#include "partact/semigroup_action.hpp"

namespace partact {

inline constexpr const char* kToolVersion = "0.1.0";

// exit codes: 0 all checks pass, 1 a mathematical check failed, 2 input or
// schema error, 3 a capacity guard tripped
enum ExitCode { kPass = 0, kMathFail = 1, kSchema = 2, kCapacity = 3 };

struct CliOptions {
  std::string format = "text";  // or "json"
  bool star_literal = false;
  std::string extension_path;         // optional separate extension-data file
  std::string out_path;               // globalize: emit the global action here
  std::optional<long long> seed;      // recorded only; feeds test-corpus generation
  int max_groupoid = 16;
  int max_schur_groupoid = 4;
  long long max_schur_field = 5;
  long long max_semigroup = 100000;
};

struct RunResult {
  int exit_code = kPass;
  nlohmann::ordered_json report;
};

namespace detail_cli {

inline std::string fnv1a_hex(const std::string& data) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

inline nlohmann::ordered_json report_json(const AxiomReport& rep) {
  nlohmann::ordered_json out;
  out["subject"] = rep.subject;
  out["pass"] = rep.passed();
  auto checks = nlohmann::ordered_json::array();
  for (auto& c : rep.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["checked"] = c.checked;
    if (!c.note.empty()) jc["note"] = c.note;
    if (!c.witnesses.empty()) {
      auto ws = nlohmann::ordered_json::array();
      for (auto& w : c.witnesses) {
        nlohmann::ordered_json jw;
        jw["where"] = w.where;
        jw["detail"] = w.detail;
        ws.push_back(jw);
      }
      jc["witnesses"] = ws;
    }
    checks.push_back(jc);
  }
  out["checks"] = checks;
  return out;
}

struct ReportSink {
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  bool all_pass = true;

  void add(const AxiomReport& rep) {
    reports.push_back(report_json(rep));
    all_pass = all_pass && rep.passed();
  }
};

template <class K>
struct Instance {
  K f;
  Workspace ws;
};

}  // namespace detail_cli

/// Everything the subcommands share after parsing: dispatches to the right
/// field backend and assembles the machine-readable report.
template <class Fn>
RunResult run_on_field(const Workspace& ws, Fn&& body) {
  if (ws.field_tok == "Q") return body(RatField{});
  if (ws.field_tok.size() > 1 && ws.field_tok[0] == 'F')
    return body(FpField(std::stoll(ws.field_tok.substr(1))));
  throw SchemaError("unknown field '" + ws.field_tok + "' (expected Q or F<p>)");
}

namespace detail_cli {

inline void guard_groupoid(const Workspace& ws, const CliOptions& opt) {
  if (ws.has_groupoid && ws.G.size() > opt.max_groupoid)
    throw CapacityError("groupoid larger than the construction cap (" + std::to_string(opt.max_groupoid) +
                        " arrows); raise --max-groupoid to override");
}

template <class K>
nlohmann::ordered_json cmd_verify_action(const Workspace& ws, const K& f, const CliOptions& opt, ReportSink& sink,
                                         nlohmann::ordered_json& extra) {
  guard_groupoid(ws, opt);
  sink.add(verify_groupoid(ws.G));
  auto R = build_algebra(ws, f);
  auto act = build_action(ws, f, R);
  sink.add(verify_tpa(act));
  extra["is_global"] = sink.all_pass ? nlohmann::ordered_json(is_global(act)) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json dims;
  dims["ring"] = R->dim();
  for (int g = 0; g < ws.G.size(); ++g) dims["D(" + ws.G.label(g) + ")"] = act.ideal(g).dim();
  return dims;
}

template <class K>
nlohmann::ordered_json cmd_crossed_product(const Workspace& ws, const K& f, const CliOptions& opt,
                                           ReportSink& sink, nlohmann::ordered_json& extra) {
  guard_groupoid(ws, opt);
  sink.add(verify_groupoid(ws.G));
  auto R = build_algebra(ws, f);
  auto act = build_action(ws, f, R);
  AxiomReport tpa = verify_tpa(act);
  sink.add(tpa);
  nlohmann::ordered_json dims;
  if (!tpa.passed()) return dims;
  CrossedProduct<K> cp = build_crossed_product(act);
  sink.add(verify_associativity(cp));
  dims["crossed_product"] = cp.dim();
  extra["has_unit"] = cp.unit.has_value();
  auto constants = nlohmann::ordered_json::array();
  for (int i = 0; i < cp.dim(); ++i)
    for (int j = 0; j < cp.dim(); ++j) {
      Vec<K> prod = cp.alg->mul(cp.alg->basis_vec(i), cp.alg->basis_vec(j));
      if (is_zero_vec<K>(prod)) continue;
      nlohmann::ordered_json entry;
      entry["left"] = cp.alg->label(i);
      entry["right"] = cp.alg->label(j);
      entry["product"] = cp.alg->show(prod);
      constants.push_back(entry);
    }
  extra["structure_constants"] = constants;
  return dims;
}

template <class K>
nlohmann::ordered_json cmd_globalize(const Workspace& ws, const K& f, const CliOptions& opt, ReportSink& sink,
                                     nlohmann::ordered_json& extra) {
  guard_groupoid(ws, opt);
  sink.add(verify_groupoid(ws.G));
  auto R = build_algebra(ws, f);
  auto act = build_action(ws, f, R);
  sink.add(verify_tpa(act));
  auto ext = build_extension(ws, *R);
  StarReading reading = opt.star_literal ? StarReading::literal : StarReading::corrected;
  extra["star_reading"] = star_reading_name(reading);
  AxiomReport hyp = verify_extension_data(act, ext, reading);
  sink.add(hyp);
  nlohmann::ordered_json dims;
  if (!sink.all_pass) return dims;
  GlobalizationResult<K> res = build_globalization(act, ext);
  sink.add(verify_enveloping(act, res));
  sink.add(verify_rerestriction(act, res));
  dims["function_space"] = res.F->dim();
  dims["enveloping_ring"] = res.T.sub->dim();
  for (int g = 0; g < ws.G.size(); ++g) dims["E(" + ws.G.label(g) + ")"] = res.E[static_cast<size_t>(g)].dim();
  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path);
    if (!out) throw SchemaError("cannot write '" + opt.out_path + "'");
    out << write_action_file(res.global);
    extra["emitted"] = opt.out_path;
  }
  return dims;
}

template <class K>
nlohmann::ordered_json cmd_morita(const Workspace& ws, const K& f, const CliOptions& opt, ReportSink& sink,
                                  nlohmann::ordered_json& extra) {
  guard_groupoid(ws, opt);
  sink.add(verify_groupoid(ws.G));
  auto R = build_algebra(ws, f);
  auto act = build_action(ws, f, R);
  sink.add(verify_tpa(act));
  auto ext = build_extension(ws, *R);
  sink.add(verify_extension_data(act, ext));
  nlohmann::ordered_json dims;
  if (!sink.all_pass) return dims;
  GlobalizationResult<K> res = build_globalization(act, ext);
  sink.add(verify_enveloping(act, res));
  MoritaReport<K> mor = morita_context(act, res);
  sink.add(mor.checks);
  dims["A"] = mor.dims.A;
  dims["B"] = mor.dims.B;
  dims["M"] = mor.dims.M;
  dims["N"] = mor.dims.N;
  (void)extra;
  return dims;
}

template <class K>
nlohmann::ordered_json cmd_exel(const Workspace& ws, const K&, const CliOptions& opt, ReportSink& sink,
                                nlohmann::ordered_json& extra) {
  guard_groupoid(ws, opt);
  if (!ws.has_groupoid) throw SchemaError("exel needs a [groupoid] block");
  sink.add(verify_groupoid(ws.G));
  ExelCategory cat = build_exel_category(ws.G);
  sink.add(verify_inverse_category(cat.S));
  sink.add(check_partial_hom(ws.G, cat.S, cat.gen));

  extra["element_count"] = cat.elems.size();
  auto elements = nlohmann::ordered_json::array();
  for (auto& e : cat.elems) elements.push_back(exel_label(ws.G, e));
  extra["elements"] = elements;
  auto table = nlohmann::ordered_json::array();
  for (int i = 0; i < cat.S.size(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (int j = 0; j < cat.S.size(); ++j)
      row.push_back(cat.S.mul(i, j) < 0 ? "-" : cat.S.label(cat.S.mul(i, j)));
    table.push_back(row);
  }
  extra["multiplication_table"] = table;
  auto idem = nlohmann::ordered_json::array();
  for (int i = 0; i < cat.S.size(); ++i)
    if (cat.S.mul(i, i) == i) idem.push_back(cat.S.label(i));
  extra["idempotents"] = idem;
  auto ideals = nlohmann::ordered_json::array();
  for (auto& I : semigroupoid_ideals(cat.S)) {
    auto ji = nlohmann::ordered_json::array();
    for (int x : I) ji.push_back(cat.S.label(x));
    ideals.push_back(ji);
  }
  extra["ideal_lattice"] = ideals;
  nlohmann::ordered_json dims;
  dims["elements"] = cat.elems.size();
  return dims;
}

template <class K>
nlohmann::ordered_json cmd_cocycle_check(const Workspace& ws, const K& f, const CliOptions& opt,
                                         ReportSink& sink, nlohmann::ordered_json& extra) {
  guard_groupoid(ws, opt);
  if (!ws.has_factorset && !ws.has_representation)
    throw SchemaError("cocycle-check needs a [factorset] or [representation] block");
  sink.add(verify_groupoid(ws.G));
  std::optional<PartialFactorSet<K>> declared;
  if (ws.has_factorset) {
    declared = build_factorset(ws, f);
    sink.add(check_domain_closure(*declared));
    sink.add(verify_idempotent_criterion(*declared));
    extra["declared_idempotent"] = is_idempotent(*declared);
  }
  if (ws.has_representation) {
    auto gammas = build_representation(ws, f);
    PartialRep<K, MatModel<K>> rep{MatModel<K>(f, ws.rep_dim), ws.G, std::move(gammas)};
    auto [vrep, sigma] = verify_partial_rep(rep);
    sink.add(vrep);
    sink.add(check_domain_closure(sigma));
    if (vrep.passed()) {
      auto nx = compute_nx(rep, sigma);
      sink.add(nx.report);
    }
    if (declared) {
      AxiomReport cmp;
      cmp.subject = "declared vs extracted factor set";
      auto& c = cmp.add("tables-agree");
      c.checked = 1;
      if (!(sigma == *declared)) c.fail({{}, "the extracted sigma differs from the declared table"});
      sink.add(cmp);
    }
  }
  return nlohmann::ordered_json::object();
}

template <class K>
nlohmann::ordered_json cmd_schur(const Workspace& ws, const K& f, const CliOptions& opt, ReportSink& sink,
                                 nlohmann::ordered_json& extra) {
  if (!ws.has_groupoid) throw SchemaError("schur needs a [groupoid] block");
  sink.add(verify_groupoid(ws.G));
  if constexpr (!K::finite) {
    throw SchemaError("schur enumeration needs a prime field (field F<p>)");
  } else {
    PmEnumeration<K> pm = enumerate_pm(f, ws.G, opt.max_schur_groupoid, opt.max_schur_field);
    sink.add(pm.report);
    extra["factor_set_count"] = pm.sigmas.size();
    ExelCategory cat = build_exel_category(ws.G);
    auto comps = nlohmann::ordered_json::array();
    for (auto& comp : pm.components) {
      nlohmann::ordered_json jc;
      jc["size"] = comp.members.size();
      jc["pM_class_count"] = comp.classes.size();
      auto ideal = nlohmann::ordered_json::array();
      for (int x : comp.ideal) ideal.push_back(cat.S.label(x));
      jc["exel_ideal"] = ideal;
      if (comp.idempotent >= 0) {
        auto table = nlohmann::ordered_json::array();
        const auto& s = pm.sigmas[static_cast<size_t>(comp.idempotent)];
        for (auto [x, y] : ws.G.composable_pairs()) {
          nlohmann::ordered_json e;
          e["pair"] = {ws.G.label(x), ws.G.label(y)};
          e["value"] = f.display(s.at(x, y));
          table.push_back(e);
        }
        jc["idempotent"] = table;
      }
      comps.push_back(jc);
    }
    extra["components"] = comps;
    nlohmann::ordered_json dims;
    dims["factor_sets"] = pm.sigmas.size();
    dims["components"] = pm.components.size();
    return dims;
  }
}

template <class K>
nlohmann::ordered_json cmd_semigroup_action(const Workspace& ws, const K& f, const CliOptions& opt,
                                            ReportSink& sink, nlohmann::ordered_json& extra) {
  guard_groupoid(ws, opt);
  if constexpr (!K::finite) {
    throw SchemaError("semigroup-action needs a prime field: closures over Q are infinite");
  } else {
    sink.add(verify_groupoid(ws.G));
    auto R = build_algebra(ws, f);
    auto act = build_action(ws, f, R);
    sink.add(verify_tpa(act));
    nlohmann::ordered_json dims;
    if (!sink.all_pass) return dims;
    RingSemigroupAction rsa = ring_to_semigroup(act, opt.max_semigroup);
    sink.add(verify_ksemigroup(*rsa.S));
    sink.add(verify_semigroup_tpa(rsa.t));
    SemigroupCrossedProduct scp = build_semigroup_crossed_product(rsa.t);
    sink.add(verify_ksemigroup(*scp.S));
    sink.add(embed_semigroup_cp(act));
    dims["semigroup"] = rsa.S->size();
    dims["crossed_product"] = scp.S->size();
    auto sigma = nlohmann::ordered_json::array();
    for (auto [x, y] : ws.G.composable_pairs()) {
      nlohmann::ordered_json e;
      e["pair"] = {ws.G.label(x), ws.G.label(y)};
      e["value"] = f.display(rsa.t.sigma.at(x, y));
      sigma.push_back(e);
    }
    extra["twisting"] = sigma;
    auto members = nlohmann::ordered_json::object();
    for (int g = 0; g < ws.G.size(); ++g)
      members["S(" + ws.G.label(g) + ")"] = rsa.t.members_of(g).size();
    extra["ideal_sizes"] = members;
    if (scp.S->size() <= 128) {
      auto table = nlohmann::ordered_json::array();
      for (int i = 0; i < scp.S->size(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (int j = 0; j < scp.S->size(); ++j) row.push_back(scp.S->label(scp.S->mul(i, j)));
        table.push_back(row);
      }
      extra["crossed_product_table"] = table;
      auto acts = nlohmann::ordered_json::array();
      for (long long k = 0; k < f.p; ++k) {
        auto row = nlohmann::ordered_json::array();
        for (int i = 0; i < scp.S->size(); ++i) row.push_back(scp.S->label(scp.S->act(k, i)));
        acts.push_back(row);
      }
      extra["crossed_product_scalar_action"] = acts;
      auto elems = nlohmann::ordered_json::array();
      for (int i = 0; i < scp.S->size(); ++i) elems.push_back(scp.S->label(i));
      extra["crossed_product_elements"] = elems;
    }
    return dims;
  }
}

template <class K>
nlohmann::ordered_json cmd_roundtrip(const Workspace& ws, const K& f, const CliOptions& opt, ReportSink& sink,
                                     nlohmann::ordered_json& extra) {
  guard_groupoid(ws, opt);
  if constexpr (!K::finite) {
    throw SchemaError("roundtrip needs a prime field: closures over Q are infinite");
  } else {
    sink.add(verify_groupoid(ws.G));
    auto R = build_algebra(ws, f);
    auto act = build_action(ws, f, R);
    sink.add(verify_tpa(act));
    nlohmann::ordered_json dims;
    if (!sink.all_pass) return dims;
    RingSemigroupAction rsa = ring_to_semigroup(act, opt.max_semigroup);
    sink.add(verify_semigroup_tpa(rsa.t));
    RepFromTheta rf = rep_from_theta(rsa.t);
    sink.add(rf.report);
    auto [vrep, sigma_hat] = verify_partial_rep(rf.rep);
    sink.add(vrep);
    sink.add(roundtrip_from_theta(rsa.t));
    sink.add(roundtrip_from_rep(rf.rep, sigma_hat));
    dims["semigroup"] = rsa.S->size();
    dims["crossed_product"] = rf.scp.S->size();
    (void)extra;
    return dims;
  }
}

}  // namespace detail_cli

inline RunResult run_command(const std::string& command, const std::string& input_path, const CliOptions& opt) {
  Stopwatch clock;
  RunResult result;
  nlohmann::ordered_json& out = result.report;
  out["command"] = command;
  out["version"] = kToolVersion;
  out["input"] = input_path;

  try {
    std::ifstream probe(input_path);
    if (!probe) throw SchemaError("cannot read input file '" + input_path + "'");
    std::ostringstream buf;
    buf << probe.rdbuf();
    out["input_digest"] = detail_cli::fnv1a_hex(buf.str());
    Workspace ws = parse_workspace_text(buf.str());
    if (!opt.extension_path.empty()) {
      Workspace ext_ws = parse_workspace_file(opt.extension_path);
      if (!ext_ws.field_tok.empty() && ext_ws.field_tok != ws.field_tok)
        throw SchemaError("extension file declares field " + ext_ws.field_tok + " but the action file uses " +
                          ws.field_tok);
      if (!ext_ws.has_extension) throw SchemaError("extension file has no [extension] block");
      ws.wt = ext_ws.wt;
      ws.has_extension = true;
    }
    out["field"] = ws.field_tok;
    if (opt.seed) out["seed"] = *opt.seed;

    result = run_on_field(ws, [&](auto f) -> RunResult {
      detail_cli::ReportSink sink;
      nlohmann::ordered_json extra = nlohmann::ordered_json::object();
      nlohmann::ordered_json dims;
      if (command == "verify-action")
        dims = detail_cli::cmd_verify_action(ws, f, opt, sink, extra);
      else if (command == "crossed-product")
        dims = detail_cli::cmd_crossed_product(ws, f, opt, sink, extra);
      else if (command == "globalize")
        dims = detail_cli::cmd_globalize(ws, f, opt, sink, extra);
      else if (command == "morita-check")
        dims = detail_cli::cmd_morita(ws, f, opt, sink, extra);
      else if (command == "exel")
        dims = detail_cli::cmd_exel(ws, f, opt, sink, extra);
      else if (command == "cocycle-check")
        dims = detail_cli::cmd_cocycle_check(ws, f, opt, sink, extra);
      else if (command == "schur")
        dims = detail_cli::cmd_schur(ws, f, opt, sink, extra);
      else if (command == "semigroup-action")
        dims = detail_cli::cmd_semigroup_action(ws, f, opt, sink, extra);
      else if (command == "roundtrip")
        dims = detail_cli::cmd_roundtrip(ws, f, opt, sink, extra);
      else
        throw SchemaError("unknown command '" + command + "'");

      RunResult rr;
      rr.report = out;
      for (auto& [k, v] : extra.items()) rr.report[k] = v;
      rr.report["dimensions"] = dims;
      rr.report["reports"] = sink.reports;
      rr.report["pass"] = sink.all_pass;
      rr.exit_code = sink.all_pass ? kPass : kMathFail;
      return rr;
    });
  } catch (const CapacityError& e) {
    result.report = out;
    result.report["error"] = e.what();
    result.report["error_kind"] = "capacity";
    result.exit_code = kCapacity;
    result.report["exit"] = result.exit_code;
    return result;
  } catch (const OverflowError& e) {
    result.report = out;
    result.report["error"] = e.what();
    result.report["error_kind"] = "overflow";
    result.exit_code = kCapacity;
    result.report["exit"] = result.exit_code;
    return result;
  } catch (const std::runtime_error& e) {  // schema, argument, unsupported
    result.report = out;
    result.report["error"] = e.what();
    result.report["error_kind"] = "input";
    result.exit_code = kSchema;
    result.report["exit"] = result.exit_code;
    return result;
  }

  result.report["exit"] = result.exit_code;
  result.report["wall_ms"] = clock.ms();
  return result;
}

inline std::string render_text(const nlohmann::ordered_json& report) {
  std::ostringstream out;
  out << report.value("command", "?") << " " << report.value("input", "") << "\n";
  if (report.contains("error")) {
    out << "error: " << report["error"].get<std::string>() << "\n";
    return out.str();
  }
  for (auto& rep : report["reports"]) {
    out << "== " << rep.value("subject", "") << " ==\n";
    for (auto& c : rep["checks"]) {
      out << "  [" << (c["pass"].get<bool>() ? " ok " : "FAIL") << "] " << c["name"].get<std::string>()
          << " (" << c["checked"].get<long long>() << " checked)";
      if (c.contains("note")) out << "  -- " << c["note"].get<std::string>();
      out << "\n";
      if (c.contains("witnesses"))
        for (auto& w : c["witnesses"]) {
          out << "         at (";
          bool first = true;
          for (auto& s : w["where"]) {
            if (!first) out << ",";
            out << s.get<std::string>();
            first = false;
          }
          out << "): " << w["detail"].get<std::string>() << "\n";
        }
    }
  }
  if (report.contains("dimensions"))
    for (auto& [k, v] : report["dimensions"].items()) out << "dim " << k << " = " << v.dump() << "\n";
  out << (report.value("pass", false) ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace partact
