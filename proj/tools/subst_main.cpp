// Command-line surface for the substitution toolkit: analysis, fixed-point
// generation, growth tables, erasure normalization, return words,
// periodicity detection, and the end-to-end Cobham check.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <subst/growth.hpp>
#include <subst/harness.hpp>
#include <subst/json_io.hpp>
#include <subst/language.hpp>
#include <subst/normalize.hpp>
#include <subst/periodicity.hpp>
#include <subst/structure.hpp>
#include <subst/system.hpp>

namespace {

constexpr char const* kVersion = "substlib 0.1.0";

using namespace subst;

std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw validation_error("cannot open \"" + path + "\"");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem_of(std::string const& path) {
  auto slash = path.find_last_of('/');
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = name.find_last_of('.');
  return dot == std::string::npos ? name : name.substr(0, dot);
}

SubstitutionSystem load_system(std::string const& path) {
  return parse_substitution_file(read_file(path), stem_of(path));
}

std::string csv_field(std::string const& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') {
      out += '"';
    }
  }
  out += "\"";
  return out;
}

Json system_to_json(SubstitutionSystem const& sys) {
  Json j;
  j["alphabet"] = sys.alphabet().tokens();
  j["start"]    = sys.alphabet().token(sys.start());
  Json rules;
  for (std::size_t a = 0; a < sys.alphabet().size(); ++a) {
    rules[sys.alphabet().token(static_cast<Letter>(a))] =
        sys.alphabet().render(sys.sigma().image(static_cast<Letter>(a)));
  }
  j["rules"] = rules;
  if (!sys.phi_identity()) {
    Json coding;
    for (std::size_t a = 0; a < sys.alphabet().size(); ++a) {
      coding[sys.alphabet().token(static_cast<Letter>(a))] =
          sys.image_alphabet().render(sys.phi().image(static_cast<Letter>(a)));
    }
    j["coding"] = coding;
  } else {
    j["coding"] = nullptr;
  }
  return j;
}

int cmd_fixpoint(std::string const& file, std::size_t n) {
  auto sys = load_system(file);
  std::cout << sys.image_alphabet().render(fixed_point_prefix(sys, n)) << "\n";
  return 0;
}

int cmd_analyze(std::string const& file, std::size_t verify_depth,
                bool with_language, bool with_periodicity,
                std::size_t depth) {
  auto sys = load_system(file);
  Json j;
  j["version"] = kVersion;
  j["label"]   = sys.label();
  j["system"]  = system_to_json(sys);

  auto m = incidence_matrix(sys.sigma());
  auto dominant = dominant_eigenvalue(m);
  j["spectral"] = Json{{"incidence", matrix_to_json(m)},
                       {"charpoly", poly_to_json(m.charpoly())},
                       {"dominant", perron_to_json(dominant)}};

  if (sys.sigma().is_non_erasing()) {
    auto summary = substitution_growth(sys.sigma());
    Json letters = Json::array();
    for (std::size_t a = 0; a < sys.alphabet().size(); ++a) {
      auto& g = summary.per_letter[a];
      auto fit = empirical_growth_fit(sys.sigma(), static_cast<Letter>(a));
      letters.push_back(Json{
          {"letter", sys.alphabet().token(static_cast<Letter>(a))},
          {"d", g.d},
          {"theta", perron_to_json(g.theta)},
          {"c_estimate", fit.c_estimate},
          {"residual", fit.max_relative_residual},
      });
    }
    Json amax = Json::array();
    for (Letter a : summary.A_max) {
      amax.push_back(sys.alphabet().token(a));
    }
    j["growth"] = Json{{"Theta", perron_to_json(summary.Theta)},
                       {"D", summary.D},
                       {"A_max", amax},
                       {"growing", summary.growing},
                       {"letters", letters},
                       {"diagnostics", summary.diagnostics}};
  } else {
    j["growth"] = nullptr;  // erasing: growth is defined after normalization
  }

  Json subs = Json::array();
  for (auto const& letters : invariant_subalphabets(sys.sigma())) {
    Json toks = Json::array();
    for (Letter a : letters) {
      toks.push_back(sys.alphabet().token(a));
    }
    Morphism r = restrict_to(sys.sigma(), letters);
    IntMatrix rm = incidence_matrix(r);
    bool prim = !rm.is_zero() && is_primitive(rm);
    Json entry{{"letters", toks}, {"primitive", prim}};
    if (!rm.is_zero()) {
      auto ev = dominant_eigenvalue(rm);
      entry["eigenvalue"] = perron_to_json(ev);
    } else {
      entry["eigenvalue"] = nullptr;
    }
    subs.push_back(std::move(entry));
  }
  auto verdict = is_good(sys.sigma());
  Json good{{"good", verdict.good}};
  if (verdict.good) {
    Json toks = Json::array();
    for (Letter a : verdict.witness->letters) {
      toks.push_back(sys.alphabet().token(a));
    }
    good["witness"] = toks;
  } else {
    good["reason"] = verdict.reason;
  }
  j["structure"] = Json{{"subalphabets", subs}, {"good", good}};

  if (sys.sigma_erasing() || !sys.phi_coding()) {
    auto norm = eliminate_erasure(sys);
    auto rep  = verify_normalization(norm, verify_depth);
    auto nm   = incidence_matrix(norm.normalized.sigma());
    auto nev  = dominant_eigenvalue(nm);
    j["normalization"] = Json{
        {"alphabet", norm.normalized.alphabet().tokens()},
        {"k", norm.k},
        {"phi_power", norm.phi_power},
        {"eigenvalue", perron_to_json(nev)},
        {"verified_depth", norm.verified_depth},
        {"agree", rep.agree},
        {"trace", norm.trace},
    };
  } else {
    j["normalization"] = nullptr;
  }

  if (with_language) {
    auto est = recurrence_constants(sys, 12, depth);
    Json rec = Json::array();
    for (std::size_t len = 1; len <= 3; ++len) {
      Json row = Json::array();
      for (auto const& f : recurrent_factors(sys, len, depth)) {
        row.push_back(sys.image_alphabet().render(f));
      }
      rec.push_back(Json{{"length", len}, {"factors", row}});
    }
    j["language"] = Json{
        {"prefix", depth},
        {"L_estimate", est.L.value()},
        {"K_estimate", est.K},
        {"factors_tested", est.factors_tested},
        {"recurrent_factors", rec},
    };
  } else {
    j["language"] = nullptr;
  }

  if (with_periodicity) {
    auto cert = detect_ultimate_periodicity(sys, depth, depth / 4,
                                            std::max<std::size_t>(depth / 4, 1));
    j["periodicity"] = periodicity_to_json(cert);
  } else {
    j["periodicity"] = nullptr;
  }

  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_growth(std::string const& file, std::size_t n_max) {
  auto sys = load_system(file);
  auto mortals = mortality(sys.sigma());
  std::cout << "letter,d,theta_approx,theta_charpoly,mortal,c_estimate,residual\n";
  for (std::size_t a = 0; a < sys.alphabet().size(); ++a) {
    std::string tok = sys.alphabet().token(static_cast<Letter>(a));
    if (mortals.mortal[a]) {
      std::cout << csv_field(tok) << ",,,,true,,\n";
      continue;
    }
    auto g   = growth_type(sys.sigma(), static_cast<Letter>(a));
    auto fit = empirical_growth_fit(sys.sigma(), static_cast<Letter>(a), n_max);
    std::cout << csv_field(tok) << "," << g.d << ","
              << g.theta.decimal(12) << ","
              << csv_field(g.theta.charpoly().str()) << ",false,"
              << fit.c_estimate << "," << fit.max_relative_residual << "\n";
  }
  return 0;
}

int cmd_normalize(std::string const& file, std::string const& out,
                  std::size_t depth) {
  auto sys  = load_system(file);
  auto norm = eliminate_erasure(sys);
  auto rep  = verify_normalization(norm, depth);
  if (!rep.agree) {
    throw validation_error("normalization self-check failed at index "
                           + std::to_string(*rep.mismatch));
  }
  auto oev = dominant_eigenvalue(incidence_matrix(sys.sigma()));
  auto nev = dominant_eigenvalue(incidence_matrix(norm.normalized.sigma()));
  Json sidecar{{"k", norm.k},
               {"phi_power", norm.phi_power},
               {"verified_depth", norm.verified_depth},
               {"eigenvalues",
                Json{{"original", perron_to_json(oev)},
                     {"normalized", perron_to_json(nev)}}},
               {"trace", norm.trace}};
  std::string text = emit_substitution_file(norm.normalized);
  if (out.empty()) {
    std::cout << text;
    std::cout << "# sidecar: " << sidecar.dump() << "\n";
  } else {
    std::ofstream f(out, std::ios::binary);
    f << text;
    std::ofstream s(out + ".json", std::ios::binary);
    s << sidecar.dump(2) << "\n";
  }
  return 0;
}

int cmd_returns(std::string const& file, std::vector<std::string> const& u_toks,
                std::size_t n, std::string const& lengths) {
  auto sys = load_system(file);
  Word x   = image_prefix(sys, n);
  std::cout << "u,len,returns,min_len,max_len,max_gap\n";
  auto print_row = [&](Word const& u) {
    auto idx = return_words(x, u);
    std::size_t mn = SIZE_MAX, mx = 0;
    for (auto const& w : idx.return_words) {
      mn = std::min(mn, w.size());
      mx = std::max(mx, w.size());
    }
    std::cout << csv_field(sys.image_alphabet().render(u)) << "," << u.size()
              << "," << idx.return_words.size() << "," << mn << "," << mx
              << "," << idx.max_gap << "\n";
  };
  if (!u_toks.empty()) {
    print_row(sys.image_alphabet().word_from_tokens(u_toks));
  }
  if (!lengths.empty()) {
    auto colon = lengths.find(':');
    std::size_t lo = std::stoul(lengths.substr(0, colon));
    std::size_t hi = colon == std::string::npos
                         ? lo
                         : std::stoul(lengths.substr(colon + 1));
    for (std::size_t len = lo; len <= hi && len >= 1; ++len) {
      for (auto const& u : factors_of_prefix(x, len)) {
        if (occurrences(x, u).size() >= 2) {
          print_row(u);
        }
      }
    }
    auto est = recurrence_constants(sys, hi, n);
    std::cerr << "L_estimate=" << est.L.value() << " (" << est.L.num << "/"
              << est.L.den << ") K_estimate=" << est.K << " factors="
              << est.factors_tested << "\n";
  }
  return 0;
}

int cmd_periodicity(std::string const& file, std::size_t n,
                    std::optional<std::size_t> max_pre,
                    std::optional<std::size_t> max_per) {
  auto sys = load_system(file);
  std::size_t cap_p = max_pre.value_or(n / 4);
  std::size_t cap_q = std::max<std::size_t>(max_per.value_or(n / 4), 1);
  auto cert = detect_ultimate_periodicity(sys, n, cap_p, cap_q);
  Json j = periodicity_to_json(cert);
  j["verified"] = cert.periodic
                      ? Json(verify_periodicity(sys, cert.preperiod,
                                                cert.period, n))
                      : Json();
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_cobham(std::string const& file_a, std::string const& file_b,
               CobhamOptions const& opts) {
  auto a   = load_system(file_a);
  auto b   = load_system(file_b);
  auto rep = cobham_check(a, b, opts);
  std::cout << cobham_report_to_json(rep).dump(2) << "\n";
  return rep.exit_code();
}

int cmd_fuzz(unsigned seed, std::size_t count, std::size_t n) {
  std::mt19937 rng(seed);
  std::size_t tension = 0;
  for (std::size_t i = 0; i < count; ++i) {
    auto [a, b] = make_agreeing_periodic_pair(rng);
    auto rep = cobham_check(a, b, {.N = n});
    std::cout << i << " " << to_string(rep.conclusion) << " " << rep.detail
              << "\n";
    if (rep.conclusion == CobhamConclusion::TheoremTension) {
      ++tension;
    }
  }
  std::cout << "checked " << count << " agreeing pairs, " << tension
            << " tension verdicts\n";
  return tension == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"substitution systems, growth, normalization and the Cobham "
               "check harness"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  unsigned bits = subst::kDefaultPrecisionBits;
  app.add_option("--bits", bits, "precision for eigenvalue intervals");

  std::string file, file_b, out, lengths;
  std::vector<std::string> u_toks;
  std::size_t n = 64;
  std::size_t n_max = 30;
  std::optional<std::size_t> max_pre, max_per;
  CobhamOptions copts;
  unsigned seed = 1;
  std::size_t fuzz_count = 20;

  auto* fixpoint =
      app.add_subcommand("fixpoint", "print a prefix of the image sequence");
  fixpoint->add_option("file", file)->required();
  fixpoint->add_option("-n,--length", n, "prefix length");

  auto* analyze =
      app.add_subcommand("analyze", "full JSON report for one system");
  analyze->add_option("file", file)->required();
  std::size_t verify_depth = 10000;
  analyze->add_option("--verify-depth", verify_depth,
                      "normalization self-check depth");
  bool with_language = false, with_periodicity = false;
  analyze->add_flag("--language", with_language,
                    "include recurrence estimates and recurrent factors");
  analyze->add_flag("--periodicity", with_periodicity,
                    "include a bounded periodicity verdict");
  std::size_t analyze_depth = 50000;
  analyze->add_option("--depth", analyze_depth,
                      "prefix length for the optional sections");

  auto* growth = app.add_subcommand("growth", "per-letter growth CSV");
  growth->add_option("file", file)->required();
  growth->add_option("--n-max", n_max, "samples for the empirical fit");

  auto* normalize = app.add_subcommand(
      "normalize", "eliminate erasure; emit the rewritten system");
  normalize->add_option("file", file)->required();
  normalize->add_option("-o,--output", out,
                        "output file (sidecar goes to <out>.json)");
  std::size_t nde = 100000;
  normalize->add_option("-n,--verify-depth", nde, "prefix agreement depth");

  auto* returns = app.add_subcommand("returns", "return-word CSV");
  returns->add_option("file", file)->required();
  returns->add_option("-u,--word", u_toks, "factor tokens");
  std::size_t rn = 100000;
  returns->add_option("-n,--length", rn, "prefix length");
  returns->add_option("--lengths", lengths, "factor length range lo:hi");

  auto* periodicity = app.add_subcommand(
      "periodicity", "bounded ultimate-periodicity verdict");
  periodicity->add_option("file", file)->required();
  std::size_t pn = 100000;
  periodicity->add_option("-n,--length", pn, "prefix length");
  std::size_t raw_pre = 0, raw_per = 0;
  auto* pre_opt =
      periodicity->add_option("--max-preperiod", raw_pre, "preperiod cap");
  auto* per_opt =
      periodicity->add_option("--max-period", raw_per, "period cap");

  auto* cobham = app.add_subcommand(
      "cobham", "confront two presentations of one sequence");
  cobham->add_option("fileA", file)->required();
  cobham->add_option("fileB", file_b)->required();
  cobham->add_option("-n,--length", copts.N, "agreement depth");
  cobham->add_option("--indep-bound", copts.indep_bound, "exponent bound");
  std::size_t craw_pre = 0, craw_per = 0;
  auto* cpre_opt =
      cobham->add_option("--max-preperiod", craw_pre, "preperiod cap");
  auto* cper_opt = cobham->add_option("--max-period", craw_per, "period cap");

  auto* fuzz = app.add_subcommand(
      "fuzz", "random agreeing periodic pairs through the check");
  fuzz->add_option("--seed", seed, "generator seed");
  fuzz->add_option("--count", fuzz_count, "number of pairs");
  std::size_t fn = 10000;
  fuzz->add_option("-n,--length", fn, "agreement depth");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // 1 = usage
  }

  try {
    copts.bits = bits;
    if (pre_opt->count() > 0) {
      max_pre = raw_pre;
    }
    if (per_opt->count() > 0) {
      max_per = raw_per;
    }
    if (cpre_opt->count() > 0) {
      copts.max_preperiod = craw_pre;
    }
    if (cper_opt->count() > 0) {
      copts.max_period = craw_per;
    }
    if (*fixpoint) {
      return cmd_fixpoint(file, n);
    }
    if (*analyze) {
      return cmd_analyze(file, verify_depth, with_language,
                         with_periodicity, analyze_depth);
    }
    if (*growth) {
      return cmd_growth(file, n_max);
    }
    if (*normalize) {
      return cmd_normalize(file, out, nde);
    }
    if (*returns) {
      return cmd_returns(file, u_toks, rn, lengths);
    }
    if (*periodicity) {
      return cmd_periodicity(file, pn, max_pre, max_per);
    }
    if (*cobham) {
      return cmd_cobham(file, file_b, copts);
    }
    if (*fuzz) {
      return cmd_fuzz(seed, fuzz_count, fn);
    }
  } catch (subst::parse_error const& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (subst::validation_error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
