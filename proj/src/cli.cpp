#include "thetalab/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "thetalab/characters.hpp"
#include "thetalab/error.hpp"
#include "thetalab/fixtures.hpp"
#include "thetalab/lvalues.hpp"
#include "thetalab/ntheory.hpp"
#include "thetalab/padic.hpp"

namespace thetalab {

using nlohmann::json;

namespace {

const char* kManin = "c(phi_A) = 1 assumed for every curve";

json rational_json(const Rational& q) { return to_fraction_string(q); }

json cyclo_json(const CycloElem& x) {
  json coeffs = json::array();
  for (const auto& q : x.coeffs()) coeffs.push_back(rational_json(q));
  return {{"level", x.level()}, {"coefficients", coeffs}, {"text", x.to_string()}};
}

json element_json(const GroupRingElem& x) {
  json out = json::array();
  for (size_t g = 0; g < x.group().size(); ++g) out.push_back(json::array({x.group().label(g), rational_json(x[g])}));
  return {{"group", x.group().to_string()}, {"scalars", x.scalars().to_string()}, {"coefficients", out}};
}

json curve_json(const CurveQ& e) {
  json a = json::array();
  for (const auto& v : e.ainvs) a.push_back(v.get_si());
  return {{"label", e.label}, {"ainvs", a}};
}

json field_json(const FieldSpec& F) {
  return {{"conductor", F.conductor}, {"subgroup_generators", F.h_generators}, {"degree", F.degree()},
          {"text", F.to_string()}};
}

std::string decimal(const Real& x) { return to_decimal(x, 20); }

CurveQ parse_curve(const json& rec) {
  if (!rec.contains("ainvs") || !rec["ainvs"].is_array() || rec["ainvs"].size() != 5)
    throw Error(ErrorKind::InvalidCurve, "a curve record needs ainvs: [5 integers]");
  std::array<Integer, 5> a;
  for (size_t i = 0; i < 5; ++i) {
    const auto& v = rec["ainvs"][i];
    if (v.is_number_integer()) a[i] = Integer(v.get<long>());
    else if (v.is_string()) {
      try {
        a[i] = Integer(v.get<std::string>());
      } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::InvalidCurve, "non-integer coefficient " + v.dump());
      }
    } else throw Error(ErrorKind::InvalidCurve, "non-integer coefficient " + v.dump());
  }
  const std::string label = rec.value("label", std::string{});
  try {
    CurveQ e(a, label);
    CurveQ m = minimal_model(e);
    m.label = label;
    return m;
  } catch (const Error& err) {
    throw Error(ErrorKind::InvalidCurve, err.what());
  }
}

std::vector<int64_t> parse_int_list(const json& v) {
  std::vector<int64_t> out;
  if (!v.is_array()) throw Error(ErrorKind::InvalidFieldSpec, "subgroup_generators must be a list");
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw Error(ErrorKind::InvalidFieldSpec, "non-integer generator " + x.dump());
    out.push_back(x.get<int64_t>());
  }
  return out;
}

std::vector<std::vector<DirichletChar>> galois_orbits(const std::vector<DirichletChar>& chars) {
  std::vector<std::vector<DirichletChar>> orbits;
  std::vector<bool> used(chars.size(), false);
  for (size_t i = 0; i < chars.size(); ++i) {
    if (used[i]) continue;
    std::vector<DirichletChar> orbit;
    const int64_t n = chars[i].order();
    for (int64_t t : nt::units_mod(n == 1 ? 2 : n)) {
      const DirichletChar psi = chars[i].power(t);
      for (size_t j = i; j < chars.size(); ++j)
        if (!used[j] && chars[j] == psi) {
          used[j] = true;
          orbit.push_back(psi);
        }
    }
    orbits.push_back(orbit);
  }
  return orbits;
}

json run_gauss(const JobSpec& spec, json& ledger) {
  const int64_t c = spec.conductor;
  if (!nt::is_squarefree(c)) throw Error(ErrorKind::NotSquarefree, "c = " + std::to_string(c));
  json even = json::array(), primitive = json::array();
  bool all = true;
  for (const auto& chi : enumerate_chars(c, true)) {
    const CycloElem tc = gauss_sum(chi, c), ts = tau_star(chi, c);
    const bool ok = tc == ts;
    all = all && ok;
    even.push_back({{"character", chi.to_string()}, {"tau_c", cyclo_json(tc)}, {"tau_star", cyclo_json(ts)}, {"pass", ok}});
  }
  for (const auto& chi : enumerate_chars(c)) {
    if (!chi.is_primitive()) continue;
    const CycloElem prod = gauss_sum(chi, c) * gauss_sum(chi.conj(), c);
    const bool ok = prod == CycloElem::from_rational(prod.level(), Rational((chi.is_even() ? 1 : -1) * c));
    all = all && ok;
    primitive.push_back({{"character", chi.to_string()}, {"product", cyclo_json(prod)}, {"pass", ok}});
  }
  ledger["tolerance"] = "exact";
  return {{"verdict", all ? "pass" : "fail"}, {"tau_star_identity", even}, {"conjugate_product", primitive}};
}

json run_curve(const JobSpec& spec, const CurveQ& e, const FieldSpec& F, json& ledger) {
  const std::string& cmd = spec.command;
  const int64_t c = spec.conductor;
  json r = {{"curve", curve_json(e)}};
  if (cmd == "theta") {
    const auto f = curve_functional(e);
    const ThetaElement th = theta_element(*f, c, e.label);
    const ThetaElement tf = restrict_to_field(th, F);
    r["theta_c"] = element_json(th.carrier);
    r["theta_F"] = element_json(tf.carrier);
    r["augmentation"] = rational_json(tf.carrier.augmentation());
    r["anchor"] = th.anchor;
    ledger["manin_constant"] = kManin;
    ledger["tolerance"] = "exact";
  } else if (cmd == "distribution") {
    const auto f = curve_functional(e);
    const DistributionResult d = distribution_check(*f, e, c, spec.p);
    r["verdict"] = d.pass ? "pass" : "fail";
    r["lhs"] = element_json(d.lhs);
    r["rhs"] = element_json(d.rhs);
    r["difference"] = element_json(d.difference);
    ledger["manin_constant"] = kManin;
    ledger["tolerance"] = "exact";
  } else if (cmd == "interpolate") {
    const Real tol(spec.tol);
    const auto f = curve_functional(e);
    const ThetaElement th = theta_element(*f, c, e.label);
    const LSeriesData data = an_coeffs(e, 10);
    const Real omega = real_period(e).omega_plus;
    json rows = json::array();
    bool all = true;
    for (const auto& chi : field_characters(F)) {
      const CycloElem comp = character_component(th, chi);
      const ApproxValue v = interpolation_value(data, omega, chi, c, tol / 100);
      const Real diff = (embed_complex(comp) - v.value).abs();
      const bool ok = diff < tol;
      all = all && ok;
      rows.push_back({{"character", chi.to_string()}, {"component", cyclo_json(comp)},
                      {"analytic_re", decimal(v.value.re)}, {"analytic_im", decimal(v.value.im)},
                      {"difference", decimal(diff)}, {"pass", ok}});
    }
    r["verdict"] = all ? "pass" : "fail";
    r["characters"] = rows;
    ledger["manin_constant"] = kManin;
    ledger["tolerance"] = spec.tol;
    ledger["period"] = "Omega^+ of the minimal model";
  } else if (cmd == "hypotheses") {
    const HypothesesReport h = hypotheses_report(e, F, spec.p);
    json conds = json::array();
    for (const auto& cd : h.conditions)
      conds.push_back({{"name", cd.name}, {"status", to_string(cd.status)}, {"evidence", cd.evidence}});
    r["conditions"] = conds;
    r["prime_to_p_degree"] = h.prime_to_p_degree;
    r["verdict"] = h.all_decidable_verified() ? "all decidable conditions verified" : "not all verified";
    ledger["tolerance"] = "exact";
  } else if (cmd == "rank0") {
    bool sha_trivial = false;
    std::string sha_note = "no Sha fixture; flag not asserted";
    if (!e.label.empty()) {
      const std::string key = e.label + "_" + std::to_string(c) + "_" + std::to_string(F.degree());
      try {
        const json doc = load_fixture("sha", key, spec.fixtures);
        const int64_t order = doc["payload"]["analytic_sha_order"].get<int64_t>();
        sha_trivial = order % spec.p != 0;
        sha_note = "analytic Sha order " + std::to_string(order) + " from fixture sha/" + key;
      } catch (const Error&) {
      }
    }
    const Rank0Verdict v = rank0_verdict(e, F, spec.p, static_cast<int>(spec.precision), sha_trivial);
    r["theta_F"] = element_json(v.theta.carrier);
    r["integral"] = v.unit.integral;
    r["unit"] = v.unit.unit;
    r["augmentation_valuation"] = v.augmentation_valuation;
    r["augmentation_depth"] = v.aug_depth;
    r["min_abs_lvalue"] = decimal(v.min_lvalue);
    r["sha_trivial_asserted"] = v.sha_trivial_asserted;
    r["verdict"] = v.verdict;
    ledger["manin_constant"] = kManin;
    ledger["sha_flags"][e.label.empty() ? e.ainvs_string() : e.label] = sha_note;
    ledger["precision"] = spec.precision;
  } else if (cmd == "resolvent") {
    const LocalStructure L = local_structure(F, spec.p, spec.precision, spec.embedding);
    const SemiLocalPoint x = random_point(L, spec.seed);
    json params = json::array();
    for (const auto& t : x.params) params.push_back(t.to_string());
    json lrs = json::array();
    for (const auto& chi : field_characters(F)) {
      const ResolventValue lr = log_resolvent(e, L, x, chi);
      json coords = json::array();
      for (const auto& v : lr.coords) coords.push_back(v.to_string());
      lrs.push_back({{"character", chi.to_string()}, {"coordinates", coords}, {"precision", lr.precision()}});
    }
    r["local_structure"] = L.to_string();
    r["point"] = params;
    r["resolvents"] = lrs;
    const auto S = default_places(e, F, spec.p);
    const PredictionResult pr = first_prediction_sum(e, L, x, S);
    json coeffs = json::array(), parts = json::array();
    for (size_t g = 0; g < pr.coefficients.size(); ++g)
      coeffs.push_back(json::array({F.group().label(g), pr.coefficients[g].to_string()}));
    for (const auto& [label, a] : pr.algebraic_parts) parts.push_back({{"character", label}, {"value", cyclo_json(a)}});
    r["prediction"] = {{"coefficients", coeffs},
                       {"integral", pr.integral},
                       {"precision", pr.precision},
                       {"congruences_hold", pr.congruences_hold},
                       {"algebraic_parts", parts},
                       {"places", pr.places_S}};
    if (pr.element) r["prediction"]["element"] = element_json(*pr.element);
    r["verdict"] = pr.integral ? "integral" : "not integral";
    ledger["manin_constant"] = kManin;
    ledger["embedding"] = pr.embedding;
    ledger["seed"] = spec.seed;
    ledger["precision"] = spec.precision;
  } else if (cmd == "equivariance") {
    const Real tol(spec.tol);
    json orbits = json::array();
    bool all = true;
    for (const auto& orbit : galois_orbits(field_characters(F))) {
      json members = json::array();
      for (const auto& chi : orbit) members.push_back(chi.to_string());
      try {
        const EquivarianceResult er = galois_equivariance_check(e, orbit, tol);
        json gaps = json::array();
        for (const auto& d : er.discrepancy) gaps.push_back(decimal(d));
        all = all && er.pass;
        orbits.push_back({{"members", members}, {"recognized", cyclo_json(er.recognized)}, {"exponents", er.exponents},
                          {"discrepancy", gaps}, {"pass", er.pass}});
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::ValueVanishes) throw;
        orbits.push_back({{"members", members}, {"status", "value vanishes"}});
      }
    }
    r["orbits"] = orbits;
    r["verdict"] = all ? "pass" : "fail";
    ledger["tolerance"] = spec.tol;
    ledger["period"] = "Omega^+ of the minimal model";
  }
  return r;
}

}  // namespace

const std::vector<std::string>& job_commands() {
  static const std::vector<std::string> cmds{"gauss",      "theta", "distribution", "interpolate",
                                             "hypotheses", "rank0", "resolvent",    "equivariance"};
  return cmds;
}

json JobSpec::to_json() const {
  return {{"command", command}, {"curve", curve_path}, {"conductor", conductor}, {"subgroup", subgroup},
          {"p", p},             {"precision", precision}, {"tol", tol},       {"seed", seed},
          {"embedding", embedding}, {"fixtures", fixtures}};
}

JobSpec JobSpec::from_json(const json& j) {
  try {
    JobSpec s;
    s.command = j.at("command").get<std::string>();
    s.curve_path = j.value("curve", std::string{});
    s.conductor = j.value("conductor", int64_t{1});
    if (j.contains("subgroup") && !j["subgroup"].is_null()) s.subgroup = j["subgroup"].get<std::vector<int64_t>>();
    s.p = j.value("p", int64_t{3});
    s.precision = j.value("precision", int64_t{12});
    s.tol = j.value("tol", std::string{"1e-8"});
    s.seed = j.value("seed", uint64_t{0});
    s.embedding = j.value("embedding", int64_t{0});
    s.fixtures = j.value("fixtures", std::string{});
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("job spec: ") + e.what());
  }
}

Inputs load_inputs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  Inputs out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t\r")] == '#') continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!rec.is_object()) throw Error(ErrorKind::ParseError, path + ":" + std::to_string(lineno) + ": not an object");
    if (rec.contains("conductor")) {
      if (!rec["conductor"].is_number_integer()) throw Error(ErrorKind::InvalidFieldSpec, "conductor must be an integer");
      out.conductor = rec["conductor"].get<int64_t>();
      out.subgroup = rec.contains("subgroup_generators") ? parse_int_list(rec["subgroup_generators"]) : std::vector<int64_t>{};
      (void)make_field(*out.conductor, *out.subgroup);
    } else {
      out.curves.push_back(parse_curve(rec));
    }
  }
  return out;
}

FieldSpec make_field(int64_t c, const std::vector<int64_t>& subgroup) {
  try {
    return subgroup.empty() ? FieldSpec::real_cyclotomic(c) : FieldSpec::make(c, subgroup);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidFieldSpec) throw;
    throw Error(ErrorKind::InvalidFieldSpec, e.what());
  }
}

json run_job(const JobSpec& spec_in) {
  const auto t0 = std::chrono::steady_clock::now();
  JobSpec spec = spec_in;
  const auto& cmds = job_commands();
  if (std::find(cmds.begin(), cmds.end(), spec.command) == cmds.end())
    throw Error(ErrorKind::InvalidArgument, "unknown command " + spec.command);
  json ledger = json::object();
  json report = {{"job", spec.to_json()}};
  if (spec.command == "gauss") {
    report["results"] = json::array({run_gauss(spec, ledger)});
  } else {
    if (spec.curve_path.empty()) throw Error(ErrorKind::InvalidArgument, spec.command + " needs --curve");
    const Inputs in = load_inputs(spec.curve_path);
    if (in.curves.empty()) throw Error(ErrorKind::ParseError, spec.curve_path + " has no curve records");
    if (in.conductor) {
      spec.conductor = *in.conductor;
      spec.subgroup = *in.subgroup;
    }
    const FieldSpec F = make_field(spec.conductor, spec.subgroup);
    report["field"] = field_json(F);
    json results = json::array();
    for (const auto& e : in.curves) {
      try {
        results.push_back(run_curve(spec, e, F, ledger));
      } catch (const Error& err) {
        throw Error(err.kind(), spec.command + " on " + (e.label.empty() ? e.ainvs_string() : e.label) + ": " + err.what());
      }
    }
    report["results"] = results;
  }
  report["assumptions"] = ledger;
  report["status"] = "completed";
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  report["timings"] = {{"elapsed_ms", ms}};
  if (!spec.report_path.empty()) {
    std::ofstream out(spec.report_path);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + spec.report_path);
    out << report.dump(2) << "\n";
  }
  return report;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Theta elements, twisted L-values and p-adic checks for elliptic curves over Q"};
  app.require_subcommand(1);
  JobSpec spec;
  std::string subgroup;
  std::string job_file;
  std::string tol = spec.tol;
  for (const auto& name : job_commands()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " job");
    sub->add_option("--curve", spec.curve_path, "record file with {label?, ainvs} lines");
    sub->add_option("--cond", spec.conductor, "conductor c of the field");
    sub->add_option("--subgroup", subgroup, "generators of H, comma separated; empty means Q(zeta_c)^+");
    sub->add_option("--p", spec.p, "odd prime");
    sub->add_option("--prec", spec.precision, "p-adic precision");
    sub->add_option("--tol", tol, "numerical tolerance");
    sub->add_option("--seed", spec.seed, "seed for random local points");
    sub->add_option("--embedding", spec.embedding, "index of the embedding of Q(zeta_M) into Q_p^f");
    sub->add_option("--fixtures", spec.fixtures, "fixture directory (RBSD_FIXTURES overrides)");
    sub->add_option("--report", spec.report_path, "write the JSON report here instead of stdout");
    sub->add_option("--job", job_file, "re-run the job echoed in a report");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    spec.command = app.get_subcommands().front()->get_name();
    spec.tol = tol;
    if (!subgroup.empty()) {
      std::stringstream ss(subgroup);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) spec.subgroup.push_back(std::stoll(item));
    }
    if (!job_file.empty()) {
      std::ifstream in(job_file);
      if (!in) throw Error(ErrorKind::ParseError, "cannot open " + job_file);
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, job_file + ": " + e.what());
      }
      const std::string report_path = spec.report_path;
      spec = JobSpec::from_json(doc.contains("job") ? doc["job"] : doc);
      spec.report_path = report_path;
    }
    const json report = run_job(spec);
    if (spec.report_path.empty()) std::cout << report.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "InvalidArgument: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace thetalab
