// SPDX-License-Identifier: Apache-2.0
#include <cfkit/cli.hpp>
#include <cfkit/classify.hpp>
#include <cfkit/report.hpp>
#include <cfkit/transforms.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace cfkit {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string command;
  std::string family;
  std::string spec;
  std::string q;
  std::string grid;
  std::optional<std::size_t> depth;
  long precision = kDefaultPrecision;
  std::optional<double> tol;
  bool exact = false;
  bool raw = false;
  std::string format = "json";
  std::string to;
  std::string v = "0";
  std::string w = "inf";
  std::string values;
};

struct Source {
  std::string name;
  std::string origin;  // "registry" or "spec"
  RegistryEntry entry;
};

Source load_source(const Options& o) {
  if (o.family.empty() == o.spec.empty()) throw UsageError("exactly one of --family and --spec is required");
  if (!o.family.empty()) return {o.family, "registry", registry_lookup(o.family)};
  std::ifstream in(o.spec);
  if (!in) throw UsageError("cannot read family file '" + o.spec + "'");
  std::stringstream text;
  text << in.rdbuf();
  QFamily family = family_from_json(text.str());
  std::string name = family.name;
  return {std::move(name), "spec", std::move(family)};
}

Json source_json(const Source& s) {
  Json out{{"origin", s.origin}, {"name", s.name}};
  if (const auto* f = std::get_if<QFamily>(&s.entry)) {
    out["form"] = f->form == FamilyForm::General ? "general" : "unit-denominator";
    out["k"] = f->k;
  } else {
    out["form"] = "rule";
  }
  return out;
}

double effective_tol(const Options& o) {
  if (o.tol) return *o.tol;
  return std::pow(10.0, -std::floor(0.4 * decimal_digits(o.precision)));
}

EstimationParams estimation(const Options& o) {
  EstimationParams p;
  p.precision = o.precision;
  p.tol = effective_tol(o);
  if (o.command == "classify" && o.depth) p.max_depth = std::max(*o.depth, p.min_depth);
  return p;
}

CoefficientSource<ExactComplex> exact_source(const Source& s, const std::optional<ComplexLiteral>& q) {
  if (const auto* f = std::get_if<QFamily>(&s.entry)) {
    if (q->is_infinite() || !q->is_exact()) throw UsageError("--exact needs q with rational parts, got '" + q->text() + "'");
    return instantiate<ExactComplex>(*f, q->exact());
  }
  return std::get<RuleFamily>(s.entry).make();
}

FloatSourceFactory float_source(const Source& s, const std::optional<ComplexLiteral>& q) {
  if (const auto* f = std::get_if<QFamily>(&s.entry)) return family_factory(*f, *q);
  return exact_factory(std::get<RuleFamily>(s.entry).make());
}

template <class S>
void require_depth(const CoefficientSource<S>& cf, std::size_t depth) {
  if (cf.length() && depth > *cf.length()) {
    throw UsageError("depth " + std::to_string(depth) + " exceeds fraction length " + std::to_string(*cf.length()));
  }
}

template <class S>
Json eval_rows(const CoefficientSource<S>& cf, std::size_t depth, bool raw) {
  require_depth(cf, depth);
  Json rows = Json::array();
  auto state = seed(cf.b0());
  for (std::size_t n = 1; n <= depth; ++n) {
    state = advance(state, cf.at(n));
    Json row{{"n", n}, {"value", to_string(approximant(state))}};
    if (raw) {
      row["A"] = to_string(raw_numerator(state));
      row["B"] = to_string(raw_denominator(state));
    }
    rows.push_back(std::move(row));
  }
  return {{"rows", rows}};
}

// Row 0 carries b_0 (and the zeroth approximant b_0).
template <class S>
Json coefficient_rows(const CoefficientSource<S>& cf, std::size_t depth) {
  require_depth(cf, depth);
  Json rows = Json::array();
  rows.push_back({{"n", 0}, {"a", nullptr}, {"b", to_string(cf.b0())}, {"approximant", to_string(cf.b0())}});
  auto state = seed(cf.b0());
  for (std::size_t n = 1; n <= depth; ++n) {
    const auto pq = cf.at(n);
    state = advance(state, pq);
    rows.push_back(
        {{"n", n}, {"a", to_string(pq.a())}, {"b", to_string(pq.b())}, {"approximant", to_string(approximant(state))}});
  }
  return {{"rows", rows}};
}

template <class S>
Json transform_rows(const CoefficientSource<S>& cf, const std::string& to, std::size_t depth) {
  if (to == "unit-numerator") return coefficient_rows(to_unit_numerator(cf), depth);
  if (to == "unit-denominator") return coefficient_rows(to_unit_denominator(cf), depth);
  if (to == "even-part") return coefficient_rows(even_part(cf), depth);
  if (to == "odd-part") return coefficient_rows(odd_part(cf), depth);
  require_depth(cf, depth);
  return coefficient_rows(bernoulli_cf(approximant_values(cf, depth)), depth);
}

Json classify_point(const Options& o, const Source& s, const std::optional<ComplexLiteral>& q) {
  const EstimationParams params = estimation(o);
  Json verdicts = Json::array();
  Json out;
  if (const auto* f = std::get_if<QFamily>(&s.entry)) {
    if (f->form == FamilyForm::UnitDenominator) {
      verdicts.push_back(to_json(stern_stolz(family_factory(*f, *q), SternStolzParams{params})));
      verdicts.push_back(to_json(theorem2_certify(*f, *q, Theorem2Params{params})));
    } else {
      verdicts.push_back(to_json(classify_tp2(*f, *q, Theorem2Params{params})));
    }
    out["verdicts"] = verdicts;
    return out;
  }
  const auto factory = exact_factory(std::get<RuleFamily>(s.entry).make());
  verdicts.push_back(to_json(theorem2_certify(factory, Theorem2Params{params})));
  const auto report = general_convergence_probe(factory, constant_rule(ComplexLiteral::parse("1")),
                                                constant_rule(ComplexLiteral::parse("2")), o.depth.value_or(1000), params);
  if (report.evidence) {
    verdicts.push_back(
        to_json(Verdict{ConvergesEvidence{report.v.limit, "general convergence: S_n(1) and S_n(2) share one limit"}}));
  }
  out["verdicts"] = verdicts;
  out["probe"] = to_json(report);
  return out;
}

Json run_point(const Options& o, const Source& s, const std::optional<ComplexLiteral>& q) {
  const std::string& cmd = o.command;
  if (cmd == "eval") {
    const std::size_t depth = o.depth.value_or(10);
    if (o.exact) return eval_rows(exact_source(s, q), depth, o.raw);
    return eval_rows(float_source(s, q)(o.precision), depth, o.raw);
  }
  if (cmd == "transform") {
    const std::size_t depth = o.depth.value_or(10);
    if (o.exact) return transform_rows(exact_source(s, q), o.to, depth);
    return transform_rows(float_source(s, q)(o.precision), o.to, depth);
  }
  if (cmd == "classify") return classify_point(o, s, q);
  // probe
  const auto report = general_convergence_probe(float_source(s, q), constant_rule(ComplexLiteral::parse(o.v)),
                                                constant_rule(ComplexLiteral::parse(o.w)), o.depth.value_or(1000),
                                                estimation(o));
  return to_json(report);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
    out.push_back(item);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

Json bernoulli_result(const Options& o) {
  std::vector<ComplexLiteral> literals;
  for (const auto& item : split_list(o.values)) {
    literals.push_back(ComplexLiteral::parse(item));
    if (literals.back().is_infinite()) throw UsageError("approximant values must be finite");
  }
  const std::size_t m = literals.size() - 1;
  if (o.exact) {
    std::vector<ExactComplex> k;
    for (const auto& l : literals) {
      if (!l.is_exact()) throw UsageError("--exact needs rational values, got '" + l.text() + "'");
      k.push_back(l.exact());
    }
    return coefficient_rows(bernoulli_cf(std::move(k)), m);
  }
  std::vector<FloatComplex> k;
  for (const auto& l : literals) k.push_back(l.at_precision(o.precision));
  return coefficient_rows(bernoulli_cf(std::move(k)), m);
}

Json build_report(const Options& o) {
  Json doc{{"schema", kReportSchema}, {"generator", {{"name", "cf"}, {"version", kVersion}}}, {"command", o.command}};
  doc["mode"] = o.exact ? "exact" : "float";
  doc["precision"] = o.exact ? Json(nullptr) : Json(o.precision);
  if (o.exact) {
    doc["tol"] = nullptr;
  } else {
    std::ostringstream t;
    t << effective_tol(o);
    doc["tol"] = t.str();
  }
  doc["depth"] = o.depth ? Json(*o.depth) : Json(nullptr);
  if (o.command == "bernoulli") {
    doc["result"] = bernoulli_result(o);
    return doc;
  }

  const Source source = load_source(o);
  doc["source"] = source_json(source);
  const bool is_family = std::holds_alternative<QFamily>(source.entry);
  if (!is_family && (!o.q.empty() || !o.grid.empty())) throw UsageError("'" + source.name + "' does not take q");

  if (!o.grid.empty()) {
    std::vector<ComplexLiteral> points;
    for (const auto& item : split_list(o.grid)) points.push_back(ComplexLiteral::parse(item));
    const std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
    Json grid = Json::array();
    for (std::size_t begin = 0; begin < points.size(); begin += workers) {
      std::vector<std::future<Json>> batch;
      for (std::size_t i = begin; i < std::min(points.size(), begin + workers); ++i) {
        batch.push_back(std::async(std::launch::async, [&o, &source, q = points[i]] {
          return run_point(o, source, q);
        }));
      }
      for (std::size_t i = 0; i < batch.size(); ++i) {
        grid.push_back({{"q", points[begin + i].text()}, {"result", batch[i].get()}});
      }
    }
    doc["grid"] = grid;
    return doc;
  }

  std::optional<ComplexLiteral> q;
  if (is_family) {
    if (o.q.empty()) throw UsageError("--q (or --grid) is required for q-families");
    q = ComplexLiteral::parse(o.q);
  }
  doc["q"] = q ? Json(q->text()) : Json(nullptr);
  doc["result"] = run_point(o, source, q);
  return doc;
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (!v.is_string()) return v.dump();
  std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void write_csv(const Json& doc, std::ostream& out) {
  std::vector<std::pair<std::optional<std::string>, const Json*>> results;
  if (doc.contains("grid")) {
    for (const auto& g : doc["grid"]) results.emplace_back(g["q"].get<std::string>(), &g["result"]);
  } else {
    results.emplace_back(std::nullopt, &doc["result"]);
  }
  const bool grid = doc.contains("grid");
  const bool table = results.front().second->contains("rows");
  if (table) {
    const Json& first = (*results.front().second)["rows"].front();
    std::string header = grid ? "q" : "";
    for (const auto& [key, value] : first.items()) header += (header.empty() ? "" : ",") + key;
    out << header << "\n";
  } else {
    out << (grid ? "q,key,value" : "key,value") << "\n";
  }
  for (const auto& [q, result] : results) {
    const std::string prefix = q ? csv_cell(*q) + "," : "";
    if (table) {
      for (const auto& row : (*result)["rows"]) {
        std::string line = prefix;
        bool first = true;
        for (const auto& [key, value] : row.items()) {
          line += (first ? "" : ",") + csv_cell(value);
          first = false;
        }
        out << line << "\n";
      }
    } else {
      const Json flat = result->flatten();
      for (const auto& [key, value] : flat.items()) out << prefix << csv_cell(key) << "," << csv_cell(value) << "\n";
    }
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continued fractions: evaluation, transforms and convergence classification.", "cf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto add_common = [&o](CLI::App* sub, bool with_source) {
    if (with_source) {
      auto* fam = sub->add_option("--family", o.family, "Built-in fraction name");
      auto* spec = sub->add_option("--spec", o.spec, "Family JSON file");
      fam->excludes(spec);
      auto* q = sub->add_option("--q", o.q, "Complex literal, e.g. 2, 3/2, -1/2+1i, 1.25-2i");
      auto* grid = sub->add_option("--grid", o.grid, "Comma-separated q values, evaluated in parallel");
      q->excludes(grid);
    }
    sub->add_option("--depth", o.depth, "Number of partial quotients")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24));
    sub->add_option("--precision", o.precision, "Working precision in bits (>= 64)")->check(CLI::Range(64L, 1L << 20));
    sub->add_option("--tol", o.tol, "Convergence tolerance (default from precision)")->check(CLI::PositiveNumber);
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* eval = app.add_subcommand("eval", "Classical approximants A_n/B_n");
  add_common(eval, true);
  eval->add_flag("--exact", o.exact, "Exact rational arithmetic");
  eval->add_flag("--raw", o.raw, "Also print A_n and B_n");

  auto* transform = app.add_subcommand("transform", "Equivalent or contracted fractions");
  add_common(transform, true);
  transform->add_flag("--exact", o.exact, "Exact rational arithmetic");
  transform->add_option("--to", o.to, "Target form")
      ->required()
      ->check(CLI::IsMember({"unit-numerator", "unit-denominator", "even-part", "odd-part", "bernoulli"}));

  auto* classify = app.add_subcommand("classify", "Convergence verdicts with evidence");
  add_common(classify, true);

  auto* probe = app.add_subcommand("probe", "Limits of S_n(v) and S_n(w) for constant v, w");
  add_common(probe, true);
  probe->add_option("--v", o.v, "Constant sequence v_n (literal or inf)");
  probe->add_option("--w", o.w, "Constant sequence w_n (literal or inf)");

  auto* bernoulli = app.add_subcommand("bernoulli", "Fraction with prescribed approximants K_0, K_1, ...");
  add_common(bernoulli, false);
  bernoulli->add_flag("--exact", o.exact, "Exact rational arithmetic");
  bernoulli->add_option("--values", o.values, "Comma-separated K_0,K_1,...")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  for (const auto* sub : app.get_subcommands()) o.command = sub->get_name();

  try {
    const Json doc = build_report(o);
    if (o.format == "csv") {
      write_csv(doc, out);
    } else {
      out << doc.dump(2) << "\n";
    }
    return kExitOk;
  } catch (const IndexedError& e) {
    err << "cf: degenerate fraction: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const PrecisionMismatch& e) {
    err << "cf: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const Error& e) {
    err << "cf: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace cfkit
