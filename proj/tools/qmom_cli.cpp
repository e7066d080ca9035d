#include <algorithm>
#include <cctype>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmom/cocycle.hpp"
#include "qmom/config.hpp"
#include "qmom/kacmoody.hpp"
#include "qmom/moments.hpp"
#include "qmom/predictor.hpp"
#include "qmom/selftest.hpp"

using namespace qmom;
using json = nlohmann::json;

namespace {

// "3..6", "3,5,7" or "4"
std::vector<int> parse_range(const std::string& s) {
  std::vector<int> out;
  auto dots = s.find("..");
  try {
    if (dots != std::string::npos) {
      int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
      if (b < a) throw ConfigError("empty range " + s);
      for (int d = a; d <= b; ++d) out.push_back(d);
      return out;
    }
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  } catch (const std::logic_error&) {
    throw ConfigError("cannot parse range '" + s + "'");
  }
  if (out.empty()) throw ConfigError("empty range");
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

// Splits "a+bi", "bi", "a" into real and imaginary text.
std::pair<std::string, std::string> complex_parts(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  if (s.empty()) throw ConfigError("empty number");
  if (s.back() != 'i') return {s, "0"};
  s.pop_back();
  size_t pos = std::string::npos;
  for (size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      pos = k;
      break;
    }
  std::string re = "0", im = s;
  if (pos != std::string::npos) {
    re = s.substr(0, pos);
    im = s.substr(pos);
  }
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  if (im[0] == '+') im = im.substr(1);
  return {re, im};
}

Cd parse_complex(const std::string& s) {
  auto [re, im] = complex_parts(s);
  try {
    size_t a = 0, b = 0;
    double x = std::stod(re, &a), y = std::stod(im, &b);
    if (a != re.size() || b != im.size()) throw std::invalid_argument(s);
    return {x, y};
  } catch (const std::logic_error&) {
    throw ConfigError("cannot parse complex number '" + s + "'");
  }
}

mpq_class parse_rational(std::string s) {
  mpq_class v;
  if (!s.empty() && s[0] == '+') s = s.substr(1);
  if (v.set_str(s, 10) != 0) throw ConfigError("cannot parse rational '" + s + "'");
  v.canonicalize();
  return v;
}

QI parse_qi(const std::string& s) {
  auto [re, im] = complex_parts(s);
  return QI(parse_rational(re), parse_rational(im));
}

json cjson(const Cd& v) { return json::array({v.real(), v.imag()}); }

int cmd_moments(long q, int r, const std::string& Ds, bool timing, bool naive, bool allow_large, int threads) {
  require_admissible_q(q);
  MomentOptions mo;
  mo.threads = threads;
  mo.allow_large = allow_large;
  std::cout << moments_csv_header() << "\n";
  for (int D : parse_range(Ds)) {
    if (D < 1) throw ConfigError("D must be >= 1");
    MomentRow row = naive ? moment_naive(q, r, D) : moment(q, r, D, mo);
    if (!timing) row.seconds = 0;
    std::cout << moments_csv_row(row) << "\n";
  }
  return 0;
}

int cmd_predict(const std::string& which, long q, int r, const std::string& Ds, int pmax, double rho, int quad,
                const std::string& outfmt, int threads) {
  QuadratureSpec qs;
  qs.rho = rho;
  qs.n = quad;
  qs.threads = threads;
  auto D = parse_range(Ds);
  PredictResult base;
  Q2Result q2;
  bool is_q2 = which == "q2";
  if (is_q2) {
    q2 = q2_coefficients(q, r, D, pmax, qs);
    base = q2;
  } else {
    base = q1_coefficients(q, r, D, pmax, qs);
  }
  if (outfmt == "csv") {
    std::cout << "kind,q,r,D,re,im,delta,euler_tail,outside_range\n";
    std::cout << std::setprecision(17);
    for (size_t k = 0; k < D.size(); ++k)
      std::cout << which << "," << q << "," << r << "," << D[k] << "," << base.value[k].real() << ","
                << base.value[k].imag() << "," << base.delta[k] << "," << base.euler_tail << ","
                << (base.outside_range ? 1 : 0) << "\n";
    return 0;
  }
  json j;
  j["kind"] = which;
  j["q"] = q;
  j["r"] = r;
  j["pmax"] = pmax;
  j["rho"] = rho;
  j["quad"] = quad;
  j["euler_tail"] = base.euler_tail;
  j["outside_range"] = base.outside_range;
  j["note"] = base.note;
  json rows = json::array();
  for (size_t k = 0; k < D.size(); ++k) {
    json row = {{"D", D[k]}, {"value", cjson(base.value[k])}, {"delta", base.delta[k]}};
    if (is_q2) {
      json pz = json::array();
      for (int z = 0; z < 4; ++z) pz.push_back(cjson(q2.per_zeta[z][k]));
      row["per_zeta"] = pz;
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_roots(int r, int lvl, int hb) {
  for (const auto& a : enumerate_phi(r, lvl, hb)) {
    auto w = weyl_word(a);
    json j = {{"vector", a}, {"height", height(a)}, {"level", level(a)}, {"word", w.letters}};
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int cmd_cocycle_eval(const std::string& word_s, const std::string& z_s, long q, bool exact, bool bar) {
  require_admissible_q(q);
  std::vector<int> word;
  for (auto& t : split(word_s, ',')) {
    try {
      word.push_back(std::stoi(t));
    } catch (const std::logic_error&) {
      throw ConfigError("cannot parse letter '" + t + "'");
    }
  }
  auto zt = split(z_s, ',');
  if (zt.size() < 2) throw ConfigError("--z needs r+1 >= 2 comma-separated values");
  json j;
  j["word"] = word;
  j["q"] = q;
  j["bar"] = bar;
  json mat = json::array();
  if (exact) {
    std::vector<KNum> z;
    for (auto& t : zt) z.push_back(KNum(q, parse_qi(t)));
    auto s = k_scalars(q);
    auto M = bar ? cocycle_bar(word, z, s) : cocycle(word, z, s);
    json ex = json::array();
    for (auto& row : M) {
      json er = json::array(), fr = json::array();
      for (auto& v : row) {
        er.push_back(v.str());
        fr.push_back(cjson(v.embed()));
      }
      ex.push_back(er);
      mat.push_back(fr);
    }
    j["mode"] = "exact";
    j["exact"] = ex;
  } else {
    std::vector<Cd> z;
    for (auto& t : zt) z.push_back(parse_complex(t));
    auto s = c_scalars(static_cast<double>(q));
    auto M = bar ? cocycle_bar(word, z, s) : cocycle(word, z, s);
    for (auto& row : M) {
      json fr = json::array();
      for (auto& v : row) fr.push_back(cjson(v));
      mat.push_back(fr);
    }
    j["mode"] = "complex";
  }
  j["matrix"] = mat;
  std::cout << j.dump() << "\n";
  return 0;
}

std::string qpow4(int k) {
  static const char* names[9] = {"", "q^(1/4)", "q^(1/2)", "q^(3/4)", "q", "q^(5/4)", "q^(3/2)", "q^(7/4)", "q^2"};
  return names[k];
}

// Sum of c_k q^(k/4) with signs folded into the separators.
std::string poly_str(const std::array<QI, 9>& p) {
  std::string out;
  for (int k = 0; k < 9; ++k) {
    const QI& c = p[k];
    if (c.is_zero()) continue;
    bool neg = false;
    QI a = c;
    if (sgn(c.im()) == 0 && sgn(c.re()) < 0) neg = true;
    if (sgn(c.re()) == 0 && sgn(c.im()) < 0) neg = true;
    if (neg) a = -c;
    std::string coef;
    if (a == QI(1)) coef = "";
    else if (a == QI::i()) coef = "i";
    else if (sgn(a.re()) == 0) coef = a.im().get_str() + "i";
    else coef = a.str();
    std::string term = coef;
    std::string t = qpow4(k);
    if (!t.empty()) term += (coef.empty() ? "" : " ") + t;
    if (term.empty()) term = "1";
    if (out.empty()) out = neg ? "-" + term : term;
    else out += (neg ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

int cmd_gamma_table(long q) {
  require_admissible_q(q);
  static const char* zeta_names[4] = {"1", "i", "-1", "-i"};
  json rows = json::array();
  for (int zp = 0; zp < 4; ++zp) {
    auto p = gamma_table_polynomial(zp);
    KNum v = gamma_table_exact(q, zp);
    json coeffs = json::array();
    for (auto& c : p) coeffs.push_back(c.str());
    rows.push_back({{"zeta", zeta_names[zp]},
                    {"sgn", zp % 2 ? -1 : 1},
                    {"polynomial", poly_str(p)},
                    {"coefficients", coeffs},
                    {"exact", v.str()},
                    {"value", cjson(v.embed())}});
  }
  json j = {{"q", q}, {"rows", rows}};
  std::cout << j.dump(1) << "\n";
  return 0;
}

int cmd_verify(long q, int r, const std::string& Ds, int N, double theta, int pmax, double rho, int quad, int threads) {
  RunConfig cfg;
  cfg.q = q;
  cfg.r = r;
  cfg.N = N;
  cfg.theta = theta;
  cfg.threads = threads;
  cfg.validate();
  if (N > 2) throw ConfigError("verify supports N in {1, 2}");
  auto D = parse_range(Ds);
  MomentOptions mo;
  mo.threads = threads;
  mo.op_budget = cfg.op_budget;
  std::vector<MomentRow> moments;
  for (int d : D) moments.push_back(moment(q, r, d, mo));
  QuadratureSpec qs;
  qs.rho = rho;
  qs.n = quad;
  qs.threads = threads;
  auto q1 = q1_coefficients(q, r, D, pmax, qs);
  std::vector<std::vector<std::complex<double>>> pred(D.size());
  for (size_t k = 0; k < D.size(); ++k) pred[k].push_back(q1.value[k]);
  if (N == 2) {
    auto q2 = q2_coefficients(q, r, D, pmax, qs);
    for (size_t k = 0; k < D.size(); ++k) pred[k].push_back(q2.value[k]);
  }
  auto table = residual_table(moments, pred, theta);
  std::cout << residual_csv_header(N) << "\n";
  for (auto& row : table) std::cout << residual_csv_row(row) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmom: moments of quadratic L-functions over F_q[x] and their predicted secondary terms"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0: QMOM_THREADS or hardware)");

  long q = 5;
  int r = 4, pmax = 6, quad = 64, N = 1, lvl = 1, hb = 0;
  double rho = 0.1, theta = 0.75;
  std::string mom_D = "1..4", pred_D = "6", ver_D = "3..6", outfmt = "json", word, zs, which;
  bool timing = false, naive = false, allow_large = false, exact = false, bar = false;

  auto* mom = app.add_subcommand("moments", "exact moments M_r(D) as CSV");
  mom->add_option("--q", q);
  mom->add_option("--r", r);
  mom->add_option("--D", mom_D, "degrees: a..b or a,b,c")->capture_default_str();
  mom->add_flag("--timing", timing, "fill the seconds column (breaks byte-identical reruns)");
  mom->add_flag("--naive", naive, "use the per-pair reference oracle");
  mom->add_flag("--allow-large", allow_large, "lift the work budget");

  auto* pred = app.add_subcommand("predict", "predicted coefficients Q_1 or Q_2");
  pred->add_option("kind", which, "q1 or q2")->required()->check(CLI::IsMember({"q1", "q2"}));
  pred->add_option("--q", q);
  pred->add_option("--r", r);
  pred->add_option("--D", pred_D)->capture_default_str();
  pred->add_option("--pmax", pmax);
  pred->add_option("--rho", rho);
  pred->add_option("--quad", quad);
  pred->add_option("--out", outfmt)->check(CLI::IsMember({"json", "csv"}));

  auto* roots = app.add_subcommand("roots", "positive real roots of a given level as JSON lines");
  roots->add_option("--r", r);
  roots->add_option("--level", lvl);
  roots->add_option("--height", hb, "height bound (0: default)");

  auto* coc = app.add_subcommand("cocycle", "cocycle evaluation");
  coc->require_subcommand(1);
  auto* ev = coc->add_subcommand("eval", "M_w(z; q) at one point");
  ev->add_option("--word", word, "letters, e.g. 1,2,3,4")->required();
  ev->add_option("--z", zs, "r+1 values, e.g. 0.5,0.3+0.1i,2,1.5")->required();
  ev->add_option("--q", q);
  ev->add_flag("--exact", exact, "read z as Gaussian rationals (e.g. 1/3+2/5i) and evaluate in K");
  ev->add_flag("--bar", bar, "evaluate Mbar_w(z; q) = M_w(qz; 1/q)");
  auto* gt = coc->add_subcommand("gamma-table", "Gamma table at r = 3 in powers of q^(1/4)");
  gt->add_option("--q", q);

  auto* ver = app.add_subcommand("verify", "moments minus predicted terms, as CSV");
  ver->add_option("--q", q);
  ver->add_option("--r", r);
  ver->add_option("--D", ver_D)->capture_default_str();
  ver->add_option("--N", N);
  ver->add_option("--theta", theta);
  ver->add_option("--pmax", pmax);
  ver->add_option("--rho", rho);
  ver->add_option("--quad", quad);

  SelftestOptions st;
  std::string only;
  auto* self = app.add_subcommand("selftest", "run the acceptance criteria");
  self->add_option("--seed", st.seed);
  self->add_option("--quad", st.quad_n);
  self->add_option("--only", only, "comma-separated criterion ids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (mom->parsed()) return cmd_moments(q, r, mom_D, timing, naive, allow_large, threads);
    if (pred->parsed()) return cmd_predict(which, q, r, pred_D, pmax, rho, quad, outfmt, threads);
    if (roots->parsed()) return cmd_roots(r, lvl, hb);
    if (ev->parsed()) return cmd_cocycle_eval(word, zs, q, exact, bar);
    if (gt->parsed()) return cmd_gamma_table(q);
    if (ver->parsed()) return cmd_verify(q, r, ver_D, N, theta, pmax, rho, quad, threads);
    if (self->parsed()) {
      st.threads = threads;
      if (!only.empty()) st.only = parse_range(only);
      auto res = run_selftest(st, std::cout);
      return selftest_ok(res) ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 4;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
