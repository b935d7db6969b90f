#pragma once

// Command-line front end. `run` parses arguments, executes one command and
// returns the process exit code: 0 success, 2 parse error, 3 semantic error
// (including divergence), 4 unsupported request.

#include "presburger/serialize.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>

namespace presburger::cli {

enum Exit { kOk = 0, kParse = 2, kSemantic = 3, kUnsupported = 4 };

struct Options {
  std::string command;
  std::string formula;
  std::vector<std::string> files;
  std::string vectors;
  std::vector<std::string> count_vars;
  std::vector<std::string> param_vars;
  std::string as = "gf";
  std::vector<long> at;
  long bound = 20;
  std::string format = "text";
};

namespace detail {

inline std::string slurp(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream f(path);
  if (!f) throw SemanticError("cannot read file '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline std::string formula_text(const std::string& arg, std::istream& in) { return arg == "-" ? slurp(arg, in) : arg; }

inline std::vector<IntVec> parse_vectors(const std::string& text) {
  std::vector<IntVec> out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    IntVec v;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      Int x;
      item.erase(0, item.find_first_not_of(' '));
      item.erase(item.find_last_not_of(' ') + 1);
      if (item.empty() || x.set_str(item, 10) != 0) throw ParseError("malformed vector list '" + text + "'");
      v.push_back(x);
    }
    if (!out.empty() && v.size() != out.front().size()) throw ParseError("vectors have different lengths");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty vector list");
  return out;
}

inline std::vector<std::string> param_names(std::size_t n) {
  if (n == 1) return {"p"};
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("p" + std::to_string(i + 1));
  return v;
}

inline void emit(std::ostream& out, const Options& o, const std::string& text, const Json& json) {
  if (o.format == "json") out << json.dump(2) << "\n";
  else out << text << (text.empty() || text.back() != '\n' ? "\n" : "");
}

inline std::string series_text(const SeriesTable& t) {
  std::ostringstream s;
  if (t.dim <= 1) {
    for (std::size_t i = 0; i < t.values.size(); ++i) s << (i ? " " : "") << to_string(t.values[i]);
    return s.str();
  }
  IntVec p = zero_vec(t.dim);
  for (std::size_t c = 0; c < t.values.size(); ++c) {
    if (t.values[c] != 0) {
      for (std::size_t j = 0; j < p.size(); ++j) s << (j ? " " : "") << p[j];
      s << ": " << to_string(t.values[c]) << "\n";
    }
    for (std::size_t j = t.dim; j-- > 0;) {
      if (p[j] < t.bound) {
        ++p[j];
        break;
      }
      p[j] = 0;
    }
  }
  return s.str();
}

inline Json series_json(const SeriesTable& t, const std::vector<std::string>& vars) {
  Json c = Json::array();
  for (const auto& v : t.values) c.push_back(to_string(v));
  return Json{{"type", "series"}, {"vars", vars}, {"bound", t.bound}, {"coefficients", c}};
}

inline std::string step_text(const UnivariateQP& u, const std::string& var) {
  std::ostringstream s;
  for (long p = 0; p < u.threshold; ++p) s << var << " = " << p << ": " << to_string(u.initial[static_cast<std::size_t>(p)]) << "\n";
  StepPolynomial st = qp_to_step(to_pqp(u).pieces.back().qp);
  s << var << " >= " << u.threshold << ": " << to_text(st, {var}) << "\n";
  return s.str();
}

inline Json step_json(const UnivariateQP& u) {
  Json init = Json::array();
  for (const auto& v : u.initial) init.push_back(to_string(v));
  return Json{{"type", "piecewise_step"},
              {"threshold", u.threshold},
              {"initial", init},
              {"step", to_json(qp_to_step(to_pqp(u).pieces.back().qp))}};
}

/// Output of a univariate (or constant) counting function in the requested form.
inline void emit_function(std::ostream& out, const Options& o, const RationalGF& gf) {
  const std::size_t n = gf.dim();
  if (o.as == "gf") return emit(out, o, to_text(gf), to_json(gf));
  if (o.as == "value") {
    std::vector<long> at = o.at;
    if (at.size() != n) throw SemanticError("--at needs " + std::to_string(n) + " coordinate(s)");
    Rat v;
    if (n == 0) {
      v = cardinality(gf);
    } else {
      long B = 0;
      for (long x : at) {
        if (x < 0) throw SemanticError("--at coordinates must be in N");
        B = std::max(B, x);
      }
      IntVec p(at.begin(), at.end());
      v = series_coeffs(gf, B).at(p);
    }
    Json jat = Json::array();
    for (long x : at) jat.push_back(x);
    return emit(out, o, to_string(v), Json{{"type", "value"}, {"at", jat}, {"value", to_string(v)}});
  }
  if (n != 1) throw UnsupportedError("--as " + o.as + " is implemented for exactly one parameter");
  UnivariateQP u = univariate_qp(gf);
  if (o.as == "qp") {
    auto g = to_pqp(u);
    return emit(out, o, to_text(g, gf.vars()), to_json(g, gf.vars()));
  }
  if (o.as == "step") return emit(out, o, step_text(u, gf.vars()[0]), step_json(u));
  throw SemanticError("unknown output form '" + o.as + "'");
}

inline RationalGF load_gf(const std::string& path, std::istream& in) { return gf_from_json(slurp(path, in)); }

inline int execute(const Options& o, std::istream& in, std::ostream& out) {
  const std::string& cmd = o.command;
  if (cmd == "decide") {
    bool v = decide(parse(formula_text(o.formula, in)));
    emit(out, o, v ? "true" : "false", Json{{"type", "decision"}, {"value", v}});
  } else if (cmd == "qelim") {
    Formula f = qelim(parse(formula_text(o.formula, in)));
    emit(out, o, to_string(f), Json{{"type", "formula"}, {"text", to_string(f)}});
  } else if (cmd == "dnf") {
    std::string text = formula_text(o.formula, in);
    SemilinearSet S = semilinear_from_formula(parse(text), free_vars_in_text_order(text));
    emit(out, o, to_text(S), to_json(S));
  } else if (cmd == "genfun") {
    std::string text = formula_text(o.formula, in);
    RationalGF g = gf_of_semilinear(semilinear_from_formula(parse(text), free_vars_in_text_order(text)));
    emit(out, o, to_text(g), to_json(g));
  } else if (cmd == "count") {
    std::string text = formula_text(o.formula, in);
    Formula f = parse(text);
    std::vector<std::string> counted = o.count_vars, params = o.param_vars;
    std::set<std::string> seen;
    for (const auto& v : counted)
      if (!seen.insert(v).second) throw SemanticError("variable '" + v + "' listed twice");
    if (params.empty())
      for (const auto& v : free_vars_in_text_order(text))
        if (!seen.count(v)) params.push_back(v);
    for (const auto& v : params)
      if (!seen.insert(v).second) throw SemanticError("variable '" + v + "' is both counted and a parameter");
    for (const auto& v : free_vars(f))
      if (!seen.count(v)) throw SemanticError("free variable '" + v + "' is neither counted nor a parameter");
    std::vector<std::string> vars = counted;
    vars.insert(vars.end(), params.begin(), params.end());
    RationalGF G = gf_of_semilinear(semilinear_from_formula(f, vars));
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < counted.size(); ++i) idx.push_back(i);
    RationalGF g = specialize_ones(G, idx);
    emit_function(out, o, g);
  } else if (cmd == "vpf") {
    auto a = parse_vectors(o.vectors);
    if (o.as == "qp") {
      auto g = vpf_pqp(a);
      auto names = param_names(g.n);
      emit(out, o, to_text(g, names), to_json(g, names));
    } else if (o.as == "gf") {
      RationalGF g = vpf_gf(a);
      emit(out, o, to_text(g), to_json(g));
    } else {
      throw SemanticError("vpf supports --as gf or --as qp");
    }
  } else if (cmd == "synth") {
    NamedPQP g = pqp_from_json(slurp(o.files.at(0), in));
    if (g.vars.size() != 1) throw UnsupportedError("synthesis is implemented for one parameter");
    SynthesizedFormula s = synth_formula(g.pqp, g.vars[0]);
    emit(out, o, to_string(s.formula),
         Json{{"type", "formula"}, {"text", to_string(s.formula)}, {"param", s.param}, {"counted", s.counted}});
  } else if (cmd == "series") {
    RationalGF f = load_gf(o.files.at(0), in);
    if (o.bound < 0) throw SemanticError("--bound must be nonnegative");
    SeriesTable t = series_coeffs(f, o.bound);
    emit(out, o, series_text(t), series_json(t, f.vars()));
  } else if (cmd == "hadamard") {
    RationalGF h = hadamard_univariate(load_gf(o.files.at(0), in), load_gf(o.files.at(1), in));
    emit(out, o, to_text(h), to_json(h));
  } else if (cmd == "zero") {
    bool v = is_zero_univariate(load_gf(o.files.at(0), in));
    emit(out, o, v ? "true" : "false", Json{{"type", "decision"}, {"value", v}});
  }
  return kOk;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Presburger arithmetic: decision, elimination, generating functions and counting"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  auto formula_cmd = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("formula", o.formula, "Formula text, or - for stdin")->required();
    return c;
  };
  formula_cmd("decide", "Decide a sentence");
  formula_cmd("qelim", "Eliminate quantifiers");
  formula_cmd("dnf", "Decompose the solution set into disjoint cells");
  formula_cmd("genfun", "Generating function of the solution set");
  auto* count = formula_cmd("count", "Count solutions in the counted variables");
  count->add_option("--count-vars", o.count_vars, "Counted variables")->delimiter(',');
  count->add_option("--param-vars", o.param_vars, "Parameter variables")->delimiter(',');
  count->add_option("--as", o.as, "Output form")->check(CLI::IsMember({"gf", "qp", "step", "value"}));
  count->add_option("--at", o.at, "Parameter point for --as value")->delimiter(',');
  auto* vpf = app.add_subcommand("vpf", "Vector partition function, vectors as '1,0;0,1;1,1'");
  vpf->add_option("vectors", o.vectors)->required();
  vpf->add_option("--as", o.as, "Output form")->check(CLI::IsMember({"gf", "qp"}));
  app.add_subcommand("synth", "Formula counting a univariate piecewise quasi-polynomial (JSON file)")
      ->add_option("file", o.files)
      ->required()
      ->expected(1);
  auto* series = app.add_subcommand("series", "Series coefficients of a generating function (JSON file)");
  series->add_option("file", o.files)->required()->expected(1);
  series->add_option("--bound", o.bound, "Box bound");
  app.add_subcommand("hadamard", "Coefficientwise product of two univariate generating functions")
      ->add_option("files", o.files)
      ->required()
      ->expected(2);
  app.add_subcommand("zero", "Test a univariate generating function for zero")
      ->add_option("file", o.files)
      ->required()
      ->expected(1);

  std::vector<std::string> argv_store{"presburger"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kParse;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    return detail::execute(o, in, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const DivergenceError& e) {
    out << "infinite\n";
    err << "divergent: " << e.what() << "\n";
    return kSemantic;
  } catch (const SemanticError& e) {
    err << "error: " << e.what() << "\n";
    return kSemantic;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return kUnsupported;
  }
}

}  // namespace presburger::cli
