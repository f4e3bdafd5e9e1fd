// SPDX-License-Identifier: Apache-2.0
//
// lec: coefficients, per-n certification, asymptotic bounds, the full sweep,
// radial shooting and certificate replay.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "lec/asymptotic.hpp"
#include "lec/certifier.hpp"
#include "lec/coefficients.hpp"
#include "lec/errors.hpp"
#include "lec/poly.hpp"
#include "lec/radial.hpp"

#ifndef LEC_VERSION
#define LEC_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace lec;

namespace {

constexpr int kUsage = 1;

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::certified:
      return 0;
    case Verdict::refuted:
      return 2;
    case Verdict::inconclusive:
      return 3;
  }
  return 3;
}

Verdict worst(Verdict a, Verdict b) {
  if (a == Verdict::refuted || b == Verdict::refuted) return Verdict::refuted;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::certified;
}

void write_atomic(const fs::path& path, const std::string& data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << data;
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

Rational rat(const std::string& s) { return Rational::parse(s); }

std::string file_name(const std::string& name) {
  std::string out;
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

std::string joined(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) s += (s.empty() ? "" : " ") + a;
  return s;
}

EngineOptions engine(int depth, int workers) {
  EngineOptions o;
  if (depth > 0) o.depth_cap = depth;
  o.workers = workers;
  return o;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void print_certificate_summary(const Certificate& c, std::ostream& os) {
  os << "verdict " << verdict_name(c.verdict) << "\n";
  for (std::size_t i = 0; i < c.condition_names.size(); ++i) {
    os << "  " << verdict_name(c.condition_results[i].verdict) << "  " << c.condition_names[i];
    if (c.condition_results[i].verdict == Verdict::refuted) {
      os << "  at (";
      for (std::size_t k = 0; k < c.condition_results[i].witness.size(); ++k)
        os << (k ? ", " : "") << c.condition_results[i].witness[k];
      os << ")";
    }
    os << "\n";
  }
  for (const auto& u : c.uncovered) os << "  uncovered: " << u << "\n";
}

Scheme pick_scheme(const std::string& s, long n) {
  if (s == "I") return Scheme::I;
  if (s == "II") return Scheme::II;
  return n >= 5 && n <= 12 ? Scheme::II : Scheme::I;
}

// ---------------------------------------------------------------- sweep

struct Entry {
  std::string name, claim, file;
  Verdict verdict;
  std::string hash;
};

json entry_json(const Entry& e) {
  json j = {{"name", e.name}, {"verdict", verdict_name(e.verdict)}, {"certificate", e.file}};
  if (!e.claim.empty()) j["claim"] = e.claim;
  if (!e.hash.empty()) j["input_hash"] = e.hash;
  return j;
}

Entry save_cert(const fs::path& dir, const std::string& sub, const std::string& name, const std::string& claim,
                const Certificate& c) {
  std::string rel = sub + "/" + file_name(name) + ".json";
  write_atomic(dir / rel, c.to_json());
  return {name, claim, rel, c.verdict, c.input_hash};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certification engine for the Lane-Emden coefficient conditions", "lec"};
  app.set_version_flag("--version", std::string("lec ") + LEC_VERSION);
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "worker threads (default LEC_WORKERS or all cores)");
  std::vector<std::string> echo(argv, argv + argc);
  echo[0] = "lec";

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "print the coefficient set at one point");
  long c_n = 13;
  std::string c_d1 = "1", c_d2 = "0", c_scheme = "I", c_eps0 = "0", c_width = "2^-30";
  coeffs->add_option("--n", c_n)->required();
  coeffs->add_option("--d1", c_d1)->required();
  coeffs->add_option("--d2", c_d2)->required();
  coeffs->add_option("--scheme", c_scheme)->check(CLI::IsMember({"I", "II"}));
  coeffs->add_option("--eps0", c_eps0);
  coeffs->add_option("--width", c_width, "interval width for the surd scheme");

  // certify
  auto* certify = app.add_subcommand("certify", "certify the conditions at one dimension");
  long k_n = 13;
  std::string k_scheme = "auto", k_c0 = "4", k_tau = "2^-10", k_out;
  int k_depth = 0;
  certify->add_option("--n", k_n)->required();
  certify->add_option("--scheme", k_scheme)->check(CLI::IsMember({"I", "II", "auto"}));
  certify->add_option("--c0", k_c0);
  certify->add_option("--tau", k_tau);
  certify->add_option("--depth", k_depth, "subdivision depth cap");
  certify->add_option("--out", k_out, "certificate path");

  // asymptotic
  auto* asym = app.add_subcommand("asymptotic", "derive the large-n expansion and certify its bounds");
  std::string a_variant = "c04", a_emit, a_certs;
  asym->add_option("--variant", a_variant)->check(CLI::IsMember({"case2", "c04"}));
  asym->add_option("--emit", a_emit, "decomposition JSON path");
  asym->add_option("--certs", a_certs, "directory for bound certificates");

  // tail
  auto* tail = app.add_subcommand("tail", "certify the tail inequality for n >= nmin");
  long t_nmin = 35;
  std::string t_out;
  tail->add_option("--nmin", t_nmin);
  tail->add_option("--out", t_out);

  // c0
  auto* c0 = app.add_subcommand("c0", "explicit large-n threshold for a given c0");
  std::string z_value = "4", z_out;
  c0->add_option("--value", z_value);
  c0->add_option("--out", z_out);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "full computational skeleton for every n >= 5");
  std::string s_c0 = "4", s_tau = "2^-10", s_dir = "lec-sweep";
  long s_nmin = 35;
  sweep->add_option("--c0", s_c0);
  sweep->add_option("--tau", s_tau);
  sweep->add_option("--nmin", s_nmin, "tail handoff");
  sweep->add_option("--out-dir", s_dir);

  // radial
  auto* radial = app.add_subcommand("radial", "radial shooting for the system");
  long r_n = 3;
  std::string r_p = "5", r_q = "5", r_csv, r_svg, r_json;
  double r_u0 = 1, r_v0 = 1, r_rmax = 10, r_rel = 1e-10, r_abs = 1e-12;
  radial->add_option("--n", r_n)->required();
  radial->add_option("--p", r_p)->required();
  radial->add_option("--q", r_q)->required();
  radial->add_option("--u0", r_u0);
  radial->add_option("--v0", r_v0);
  radial->add_option("--rmax", r_rmax);
  radial->add_option("--rel-tol", r_rel);
  radial->add_option("--abs-tol", r_abs);
  radial->add_option("--csv", r_csv);
  radial->add_option("--svg", r_svg);
  radial->add_option("--json", r_json);

  // expand
  auto* expand = app.add_subcommand("expand", "expand a polynomial expression to canonical JSON");
  std::string e_expr;
  bool e_collect = false;
  expand->add_option("expr", e_expr)->required();
  expand->add_flag("--collect-n", e_collect, "also list the coefficients of powers of n");

  // replay
  auto* rp = app.add_subcommand("replay", "re-verify a certificate file");
  std::string p_file;
  rp->add_option("file", p_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    Timer timer;
    if (*coeffs) {
      Rational d1 = rat(c_d1), d2 = rat(c_d2);
      if (c_scheme == "I") {
        std::cout << to_json(scheme1(c_n, d1, d2), c_n, d1, d2) << "\n";
      } else {
        std::cout << to_json(scheme2(c_n, d1, d2, rat(c_eps0), rat(c_width)), c_n, d1, d2) << "\n";
      }
      return 0;
    }

    if (*certify) {
      ConditionsOptions o;
      o.c0 = rat(k_c0);
      o.tau = rat(k_tau);
      o.engine = engine(k_depth, workers);
      Scheme sc = pick_scheme(k_scheme, k_n);
      Certificate c = certify_conditions(k_n, sc, o);
      std::cout << "n = " << k_n << ", scheme " << scheme_name(sc) << ", c0 = " << o.c0 << ", tau = " << o.tau
                << "\n";
      print_certificate_summary(c, std::cout);
      std::fprintf(stdout, "wall %.3f s\n", c.wall_seconds);
      if (!k_out.empty()) write_atomic(k_out, c.to_json());
      return exit_code(c.verdict);
    }

    if (*asym) {
      Variant v = variant_from_name(a_variant);
      Decomposition dec = derive_decomposition(v);
      std::cout << "reassembly identity: ok\n";
      bool mid_ok = dec.mid == (v == Variant::case2 ? printed_P() : printed_T());
      bool quart_ok = dec.A3 == printed_A3() && dec.A4 == printed_A4();
      std::cout << (v == Variant::case2 ? "P" : "T") << " matches printed: " << (mid_ok ? "yes" : "no") << "\n";
      std::cout << "A3, A4 match printed: " << (quart_ok ? "yes" : "no") << "\n";
      std::cout << "residual degree: " << dec.residual_degree() << "\n";
      if (!a_emit.empty()) write_atomic(a_emit, dec.to_json() + "\n");
      EngineOptions eo = engine(0, workers);
      std::vector<BoundResult> bounds;
      if (v == Variant::c04) bounds = verify_Ri_bounds(dec, eo);
      bounds.push_back(verify_mid_bound(dec, eo));
      Verdict all = mid_ok && quart_ok ? Verdict::certified : Verdict::refuted;
      for (const auto& b : bounds) {
        std::cout << "  " << verdict_name(b.cert.verdict) << "  " << b.claim << "\n";
        all = worst(all, b.cert.verdict);
        if (!a_certs.empty()) write_atomic(fs::path(a_certs) / (file_name(b.name) + ".json"), b.cert.to_json());
      }
      std::cout << "verdict " << verdict_name(all) << "\n";
      return exit_code(all);
    }

    if (*tail) {
      TailReport t = verify_tail(t_nmin, engine(0, workers));
      std::cout << "tail n >= " << t_nmin << ": " << verdict_name(t.verdict) << " (" << t.route << ")\n";
      if (t.refuting_n) std::cout << "  display <= 0 at n = " << *t.refuting_n << "\n";
      if (!t_out.empty()) write_atomic(t_out, t.to_json() + "\n");
      return exit_code(t.verdict);
    }

    if (*c0) {
      C0Report r = verify_c0_asymptotic(rat(z_value), engine(0, workers));
      std::cout << "c0 = " << r.c0 << ": C0* = " << r.C0_star << ", n1* = " << r.n1_star << ", N* = " << r.N_star
                << ", " << (r.certified ? "CERTIFIED" : "INCONCLUSIVE") << "\n";
      if (!z_out.empty()) write_atomic(z_out, r.to_json() + "\n");
      return r.certified ? 0 : 3;
    }

    if (*sweep) {
      fs::path dir(s_dir);
      ConditionsOptions o;
      o.c0 = rat(s_c0);
      o.tau = rat(s_tau);
      o.engine = engine(0, workers);
      EngineOptions eo = engine(0, workers);
      bool paper_c0 = o.c0 == Rational(4);
      if (s_nmin < 13) throw DomainError("nmin must be at least 13");

      json report;
      report["schema"] = "lec/1";
      report["tool"] = std::string("lec ") + LEC_VERSION;
      report["command"] = joined(echo);
      json in = {{"c0", o.c0.str()}, {"tau", o.tau.str()}, {"nmin", s_nmin}};
      report["inputs"] = in;
      report["input_hash"] = fnv1a_hex(in.dump());
      Verdict overall = Verdict::certified;
      auto tally = [&](json& arr, const Entry& e) {
        arr.push_back(entry_json(e));
        overall = worst(overall, e.verdict);
        std::cout << "  " << verdict_name(e.verdict) << "  " << e.name << "\n" << std::flush;
      };

      // the large-n handoff: tail display at c0 = 4, explicit N*(c0) otherwise
      long n_hi = s_nmin;
      json tail_j;
      if (paper_c0) {
        TailReport t = verify_tail(s_nmin, eo);
        write_atomic(dir / "tail.json", t.to_json() + "\n");
        tail_j = entry_json({"tail n >= " + std::to_string(s_nmin), "", "tail.json", t.verdict, ""});
        overall = worst(overall, t.verdict);
        std::cout << "  " << verdict_name(t.verdict) << "  tail n >= " << s_nmin << "\n";
      } else {
        C0Report r = verify_c0_asymptotic(o.c0, eo);
        write_atomic(dir / "c0.json", r.to_json() + "\n");
        json certs = json::array();
        for (const auto& b : r.certs) certs.push_back(entry_json(save_cert(dir, "c0", b.name, b.claim, b.cert)));
        Verdict v = r.certified ? Verdict::certified : Verdict::inconclusive;
        tail_j = entry_json({"n >= N*(c0) = " + std::to_string(r.N_star), "", "c0.json", v, ""});
        tail_j["N_star"] = r.N_star;
        tail_j["certificates"] = certs;
        overall = worst(overall, v);
        n_hi = std::max(s_nmin, r.N_star);
        std::cout << "  " << verdict_name(v) << "  n >= " << r.N_star << "\n";
      }

      json s2 = json::array(), s1 = json::array();
      for (long n = 5; n <= 12; ++n) {
        Certificate c = certify_conditions(n, Scheme::II, o);
        std::string claim;
        if (auto e = json::parse(c.inputs_json).value("eps0", std::string()); !e.empty()) claim = "eps0 = " + e;
        tally(s2, save_cert(dir, "scheme2", "n" + std::to_string(n), claim, c));
      }
      for (long n = 13; n <= n_hi; ++n)
        tally(s1, save_cert(dir, "scheme1", "n" + std::to_string(n), "", certify_conditions(n, Scheme::I, o)));

      // bound suite
      json bounds = json::array();
      Decomposition c04 = derive_decomposition(Variant::c04);
      Decomposition case2 = derive_decomposition(Variant::case2);
      bool printed = c04.mid == printed_T() && case2.mid == printed_P() && c04.A3 == printed_A3() &&
                     c04.A4 == printed_A4();
      for (const auto& b : verify_Ri_bounds(c04, eo)) tally(bounds, save_cert(dir, "bounds", b.name, b.claim, b.cert));
      for (const auto* d : {&case2, &c04}) {
        BoundResult b = verify_mid_bound(*d, eo);
        tally(bounds, save_cert(dir, "bounds", b.name, b.claim, b.cert));
      }
      QuarticBoundReport q = verify_A3A4_bounds(2, 200, eo);
      json quart = json::array();
      Verdict qv = q.certified ? Verdict::certified : Verdict::refuted;
      for (const auto* part : {&q.per_n, &q.tail})
        for (const auto& b : *part) {
          Entry e = save_cert(dir, "quartic", b.name, b.claim, b.cert);
          quart.push_back(entry_json(e));
          qv = worst(qv, e.verdict);
        }
      overall = worst(overall, qv);
      std::cout << "  " << verdict_name(qv) << "  A3, A4 lower bounds (" << quart.size() << " certificates)\n";

      report["printed_polynomials_match"] = printed;
      if (!printed) overall = worst(overall, Verdict::refuted);
      report["large_n"] = tail_j;
      report["scheme2"] = s2;
      report["scheme1"] = s1;
      report["bounds"] = bounds;
      report["quartic_bounds"] = quart;
      report["verdict"] = verdict_name(overall);
      write_atomic(dir / "report.json", report.dump(1) + "\n");
      std::cout << "verdict " << verdict_name(overall) << "\n";
      std::fprintf(stdout, "wall %.1f s\n", timer.seconds());
      return exit_code(overall);
    }

    if (*radial) {
      radial::Trajectory t = radial::shoot(r_n, rat(r_p), rat(r_q), r_u0, r_v0, r_rmax, r_rel, r_abs);
      std::string js = radial::to_json(t);
      std::cout << js;
      if (!r_csv.empty()) write_atomic(r_csv, radial::to_csv(t));
      if (!r_svg.empty()) write_atomic(r_svg, radial::to_svg(t));
      if (!r_json.empty()) write_atomic(r_json, js);
      return 0;
    }

    if (*expand) {
      PolyExpr p = PolyExpr::parse(e_expr);
      if (!e_collect) {
        std::cout << p.to_json() << "\n";
        return 0;
      }
      json j = json::parse(p.to_json());
      json cs = json::array();
      for (const auto& [i, c] : p.collect_n()) cs.push_back({{"i", i}, {"coeff", c.str()}});
      j["collect_n"] = cs;
      std::cout << j.dump() << "\n";
      return 0;
    }

    if (*rp) {
      std::string text = read_file(p_file);
      json j = json::parse(text);
      std::string kind = j.value("kind", std::string());
      if (kind == "tail") {
        long n_min = j.at("n_min").get<long>();
        TailReport t = verify_tail(n_min, engine(0, workers));
        bool same = t.to_json() + "\n" == text || t.to_json() == text;
        std::cout << "tail n >= " << n_min << ": recomputed " << verdict_name(t.verdict)
                  << (same ? ", report identical\n" : ", report differs\n");
        if (!same) return 3;
        return exit_code(t.verdict);
      }
      ReplayReport r = replay(text, workers);
      std::cout << "hash " << (r.hash_ok ? "ok" : "MISMATCH") << ", structure " << (r.structure_ok ? "ok" : "BAD")
                << ", leaves " << r.leaves_checked << ", mismatches " << r.mismatches << "\n";
      for (const auto& pr : r.problems) std::cout << "  " << pr << "\n";
      if (!r.ok()) return r.mismatches > 0 ? 2 : 3;
      std::cout << "verdict " << verdict_name(r.verdict) << " confirmed\n";
      return exit_code(r.verdict);
    }
  } catch (const ParseError& e) {
    std::cerr << "lec: parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "lec: parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "lec: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "lec: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
