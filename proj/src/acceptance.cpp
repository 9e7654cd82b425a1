#include "maasslift/acceptance.hpp"

#include "maasslift/json_io.hpp"
#include "maasslift/lift.hpp"
#include "maasslift/modforms.hpp"
#include "maasslift/phi.hpp"
#include "maasslift/sha256.hpp"
#include "maasslift/siegel.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

namespace ml {

namespace {

void check(bool cond, const std::string& msg) {
  if (!cond) throw MathError(msg);
}

// Bounds and lazily shared heavyweight objects.  The expansions are built
// once at the largest precision any criterion needs.
struct SuiteContext {
  bool quick;

  explicit SuiteContext(bool q) : quick(q) {}

  Int siegel_dmax() const { return quick ? 12 : 24; }
  Int d2max() const { return quick ? 20 : 40; }
  Int d4max() const { return quick ? 32 : 63; }
  long factor_mmax() const { return quick ? 100 : 200; }
  long border_mmax() const { return quick ? 30 : 60; }
  Int scan1_bound() const { return quick ? 50 : 100; }
  Int scan2_bound() const { return quick ? 12 : 24; }
  long compare_prec() const { return quick ? 100 : 200; }
  // Inputs for the operator comparison shrink by l^2, so the source
  // expansions must be built 9x longer than the comparison window.
  long eigen_prec() const { return compare_prec() * 9 + 2; }

  const EigenformHalf& g9() {
    if (!g9_) g9_ = plus_eigenform(9, eigen_prec(), 13);
    return *g9_;
  }
  const EigenformHalf& g6() {
    if (!g6_) g6_ = plus_eigenform(6, eigen_prec(), 13);
    return *g6_;
  }
  const CoefficientTable& t2() {
    if (!t2_) t2_ = build_lift_table(g9(), 2, d2max());
    return *t2_;
  }
  const CoefficientTable& t4() {
    if (!t4_) t4_ = build_lift_table(g6(), 4, d4max());
    return *t4_;
  }

 private:
  std::optional<EigenformHalf> g9_, g6_;
  std::optional<CoefficientTable> t2_, t4_;
};

// c(m) read off an eigenform expansion for every admissible m <= M.
MaassParameter param_from_eigenform(const EigenformHalf& g, const Int& M) {
  MaassParameter c;
  c.k_parity = ((g.k % 2) + 2) % 2;
  c.M = M;
  for (Int m = 1; m <= M; ++m)
    if (c.admissible(m)) c.values[m] = g.q.coeff(to_long(m));
  return c;
}

std::string criterion_local_series(SuiteContext& ctx) {
  long forms = 0, checks = 0;
  for (const HalfIntegralForm& h : enumerate_forms(2, ctx.siegel_dmax())) {
    ++forms;
    Int D = D_of(h);
    for (long p : {2L, 3L, 5L, 7L}) {
      LocalSiegelData d = local_siegel_data(h, p);
      check(d.F.size() >= 1 && d.F[0] == 1,
            "local polynomial constant term differs from 1 at " + encode_form(h));
      check(invert_variable(d.Ftilde) == d.Ftilde,
            "normalized polynomial not symmetric at " + encode_form(h) +
                ", p=" + std::to_string(p));
      if (D % p != 0)
        check(d.F.size() == 1,
              "local polynomial nontrivial at inert prime, form " + encode_form(h));
      checks += 3;
    }
  }
  std::ostringstream os;
  os << forms << " binary classes x {2,3,5,7}, " << checks
     << " structural checks (enumerated coefficients revalidated in-engine)";
  return os.str();
}

std::string criterion_expansion(SuiteContext& ctx) {
  long forms = 0, locals = 0, divisors = 0;
  for (const HalfIntegralForm& h : enumerate_forms(2, ctx.siegel_dmax())) {
    PhiExpansionReport r = phi_expansion_check(h);
    check(r.expansion_holds, "basis recombination fails at " + encode_form(h));
    check(r.integral, "non-integral divisor weight at " + encode_form(h));
    ++forms;
    locals += r.locals_checked;
    divisors += r.divisors_checked;
  }
  std::ostringstream os;
  os << forms << " classes, " << locals << " local coefficients recombined, " << divisors
     << " divisor weights integral";
  return os.str();
}

std::string criterion_dimensions(SuiteContext&) {
  std::ostringstream os;
  for (long two_k : {12L, 14L, 16L, 18L, 20L, 22L, 26L}) {
    long k = two_k / 2;
    long dim_half = static_cast<long>(plus_cusp_space(k, 4 * k + 12).size());
    long dim_int = dim_cusp_level1(two_k);
    check(dim_half == dim_int,
          "space dimensions differ at weight " + std::to_string(two_k) + ": " +
              std::to_string(dim_half) + " vs " + std::to_string(dim_int));
    os << two_k << ":" << dim_half << " ";
  }
  return "dimensions agree at 2k = " + os.str();
}

std::string criterion_factorization(SuiteContext& ctx) {
  long total = 0;
  for (long k : {6L, 9L}) {
    const EigenformHalf& g = (k == 6) ? ctx.g6() : ctx.g9();
    for (Int m = 1; m <= ctx.factor_mmax(); ++m) {
      if (!is_plus_exponent(k, m)) continue;
      DiscriminantData dd = disc_split(m, k, "factorization criterion");
      Rational pred = g.q.coeff(to_long(dd.d));
      for (const auto& [q, e] : factor(dd.f)) {
        (void)e;
        long qp = to_long(q);
        pred *= Rational(lambda_int(qp, m, k, 0, k, g.matched.eigenvalues.at(qp)));
      }
      check(pred == g.q.coeff(to_long(m)),
            "eigenvalue factorization fails at k=" + std::to_string(k) +
                ", m=" + m.get_str());
      ++total;
    }
  }
  return std::to_string(total) + " exponents factor through the conductor product";
}

std::string criterion_degree2(SuiteContext& ctx) {
  const EigenformHalf& g = ctx.g9();
  const CoefficientTable& t = ctx.t2();
  for (const HalfIntegralForm& h : t.classes)
    check(lift_coeff_A(h, g) == lift_coeff_B(h, g),
          "route disagreement at " + encode_form(h));
  MaassParameter c = param_from_eigenform(g, ctx.d2max());
  MaassVerifyReport ver = maass_verify(t, c, 9);
  check(ver.all_hold, "relation system fails on the degree-2 table");
  MaassSolveResult sol = maass_solve(t, 9, ctx.d2max());
  check(sol.consistent, "relation system inconsistent on the degree-2 table");
  check(sol.kernel.empty(), "degree-2 solution not unique");
  for (const Int& m : sol.domain)
    check(sol.particular.at(m) == c.at(m),
          "recovered parameter differs at m=" + m.get_str());
  // A deliberately corrupted parameter must be rejected.
  MaassParameter bad = c;
  bad.values[3] += 1;
  check(!maass_verify(t, bad, 9).all_hold, "corrupted parameter not detected");

  EvenLattice S = make_even_lattice({{Int(2)}});
  JacobiTable slice = fj_extract(t, S);
  JacobiTable direct = index2_jacobi_table(g, S, t.dmax);
  check(slice.entries == direct.entries, "slice table differs from direct table");
  for (const auto& [key, val] : slice.entries)
    check(jacobi_product_coeff(S, g, g.matched, key.first, key.second) == val,
          "product formula differs at a=" + key.first.get_str());
  MTypeReport mt = mtype_check(slice);
  check(mt.is_mtype, "slice table not constant on invariant fibers");
  std::ostringstream os;
  os << t.classes.size() << " classes, both routes equal; solver unique; "
     << slice.entries.size() << " slice entries match on " << mt.C.size() << " fibers";
  return os.str();
}

std::string criterion_degree4(SuiteContext& ctx) {
  const EigenformHalf& g = ctx.g6();
  const CoefficientTable& t = ctx.t4();
  MaassParameter c = param_from_eigenform(g, ctx.d4max());
  MaassVerifyReport ver = maass_verify(t, c, 6);
  check(ver.all_hold, "relation system fails on the degree-4 table");

  // Shifting the parameter along the square-supported direction must
  // preserve every relation ...
  MaassParameter shifted = c;
  for (Int f = 1; f * f <= ctx.d4max(); ++f)
    shifted.values[f * f] += Rational(pow_int(f, 6));
  check(maass_verify(t, shifted, 6).all_hold,
        "square-supported shift not in the relation kernel");

  // ... and be the only freedom the solver finds.
  MaassSolveResult sol = maass_solve(t, 6, ctx.d4max());
  check(sol.consistent, "relation system inconsistent on the degree-4 table");
  check(sol.kernel.size() == 1, "degree-4 kernel dimension is not 1");
  const std::map<Int, Rational>& dir = sol.kernel[0];
  check(dir.count(Int(1)) == 1, "kernel direction vanishes at m=1");
  Rational unit = dir.at(Int(1));
  long squares = 0;
  for (const auto& [m, v] : dir) {
    check(is_square(m), "kernel direction supported off squares at m=" + m.get_str());
    Int f = isqrt(m);
    check(v == unit * Rational(pow_int(f, 6)),
          "kernel direction deviates from the sixth-power pattern at m=" + m.get_str());
    ++squares;
  }
  for (Int f = 1; f * f <= ctx.d4max(); ++f) {
    Int sq = f * f;
    check(dir.count(sq) == 1, "kernel direction misses the square " + sq.get_str());
  }

  // Vanishing sum on classes whose invariant is a perfect square.
  long square_classes = 0;
  for (const HalfIntegralForm& h : t.classes) {
    if (disc_split(D_of(h), 2, "degree-4 criterion").d != 1) continue;
    check(square_disc_sum_check(h, 6), "divisor sum does not vanish at " + encode_form(h));
    ++square_classes;
  }
  check(square_classes > 0, "no square-invariant classes in range");

  // The exact-depth boundary: one more power of 2 in the conductor than
  // the local engine supports must fail loudly, not approximately.
  HalfIntegralForm deep = make_form({{Int(2), Int(0), Int(0), Int(0)},
                                     {Int(0), Int(2), Int(0), Int(0)},
                                     {Int(0), Int(0), Int(2), Int(0)},
                                     {Int(0), Int(0), Int(0), Int(8)}});
  bool capability_signaled = false;
  try {
    lift_coeff_B(deep, g);
  } catch (const CapabilityError&) {
    capability_signaled = true;
  }
  check(capability_signaled, "out-of-depth class did not raise a capability error");

  std::ostringstream os;
  os << t.classes.size() << " classes verified, kernel = square direction (" << squares
     << " squares), " << square_classes << " vanishing sums, depth boundary enforced";
  return os.str();
}

std::string criterion_invariant_corpus(SuiteContext& ctx) {
  long reach_checks = 0, eta_flip_failures = 0;
  for (long p : {2L, 3L, 5L, 7L}) {
    HalfIntegralForm b1 = find_prime_disc_form(p, 1);
    HalfIntegralForm b3 = find_prime_disc_form(p, 3);
    check(D_of(b1) == p && D_of(b3) == p,
          "search returned a wrong invariant at p=" + std::to_string(p));
    for (const HalfIntegralForm* b : {&b1, &b3}) {
      EtaProductReport er = eta_sign_product_check(*b);
      check(er.holds, "local sign product off at p=" + std::to_string(p));
      if (!eta_sign_product_check(*b, true).holds) ++eta_flip_failures;
      long n = (b->m + 1) / 2;
      for (Int m = 1; m <= ctx.border_mmax(); ++m) {
        if (!is_disc_value(m, n)) continue;
        BorderReachResult rr = border_reach(*b, m, 64);
        check(rr.criterion == rr.witness_found,
              "border criterion and search disagree at p=" + std::to_string(p) +
                  ", m=" + m.get_str());
        ++reach_checks;
      }
    }
  }
  // The flipped-convention control must trip somewhere, or it tests nothing.
  check(eta_flip_failures > 0, "sign-flip control failed to fail");

  const EigenformHalf& g = ctx.g9();
  const CoefficientTable& t = ctx.t2();
  MaassParameter c = param_from_eigenform(g, ctx.d2max());
  long recursion_checks = 0;
  for (long p : {2L, 3L}) {
    BorderRecursionReport br = border_recursion_check(t, find_prime_disc_form(p, 1), c, 9);
    check(br.precondition_ok, "recursion precondition fails at p=" + std::to_string(p));
    check(br.all_hold, "border recursion fails at p=" + std::to_string(p) +
                           " with witness " + br.witness);
    recursion_checks += br.checked;
  }

  DiscScanResult s1 = disc_scan(1, ctx.scan1_bound());
  check(s1.match, "achieved invariants differ from the predicted set (binary)");
  for (const Int& m : s1.achieved)
    check(m != 1 && m != 2, "forbidden invariant achieved in the binary scan");
  DiscScanResult s2 = disc_scan(2, ctx.scan2_bound());
  check(s2.match, "achieved invariants differ from the predicted set (quaternary)");
  for (const Int& m : s2.achieved)
    check(m != 1, "invariant 1 achieved in the quaternary scan");

  std::ostringstream os;
  os << reach_checks << " border criteria matched, " << recursion_checks
     << " recursion entries hold, sign products + scans pass, flip control trips "
     << eta_flip_failures << "/8";
  return os.str();
}

std::string criterion_operator_comparison(SuiteContext& ctx) {
  std::ostringstream os;
  for (long k : {6L, 9L}) {
    const EigenformHalf& g = (k == 6) ? ctx.g6() : ctx.g9();
    for (long ell : {2L, 3L}) {
      POpResult r = P_op(ell, k, g.q);
      check(r.predicted.prec >= ctx.compare_prec(),
            "comparison window too short at l=" + std::to_string(ell));
      check(r.agree || r.agree_raw,
            "no operator normalization matches the coefficient prediction at l=" +
                std::to_string(ell) + ", k=" + std::to_string(k));
      os << "k=" << k << ",l=" << ell << ":"
         << (r.agree && r.agree_raw ? "both" : (r.agree ? "projected" : "raw")) << " ";
    }
  }
  return "matching normalization per case: " + os.str();
}

std::string criterion_determinism(SuiteContext& ctx) {
  auto artifact_digest = [&]() {
    long prec = std::max(to_long(ctx.d2max()) + 1, 4L * 9 + 12);
    EigenformHalf g = plus_eigenform(9, prec, 7);
    CoefficientTable t = build_lift_table(g, 2, ctx.d2max());
    MaassParameter c = param_from_eigenform(g, ctx.d2max());
    EvenLattice S = make_even_lattice({{Int(2)}});
    JacobiTable jt = fj_extract(t, S);
    HalfIntegralForm h = t.classes.front();
    LocalSiegelData d = local_siegel_data(h, 2);
    std::string blob = table_to_json(t) + table_to_csv(t) + param_to_json(c) +
                       jacobi_to_json(jt, mtype_check(jt)) +
                       siegel_report_json(d, phi_local(d)) + qexp_to_json(g.q);
    return sha256_hex(blob);
  };
  std::string first = artifact_digest();
  std::string second = artifact_digest();
  check(first == second, "artifact bytes differ between identical runs");
  return "artifact digest stable across rebuilds: " + first.substr(0, 12);
}

}  // namespace

AcceptanceReport acceptance_suite(const std::string& profile) {
  bool quick;
  if (profile == "quick")
    quick = true;
  else if (profile == "full")
    quick = false;
  else
    throw UsageError("acceptance_suite: profile must be \"quick\" or \"full\"");

  SuiteContext ctx(quick);
  AcceptanceReport rep;
  rep.all_passed = true;

  auto run = [&](int number, const std::string& name,
                 const std::function<std::string(SuiteContext&)>& body) {
    CriterionResult r;
    r.number = number;
    r.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
      r.detail = body(ctx);
      r.passed = true;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    r.ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    if (!r.passed) rep.all_passed = false;
    rep.criteria.push_back(std::move(r));
  };

  run(1, "local series structure", criterion_local_series);
  run(2, "expansion coefficients", criterion_expansion);
  run(3, "space dimensions", criterion_dimensions);
  run(4, "eigenvalue factorization", criterion_factorization);
  run(5, "degree-2 round trip", criterion_degree2);
  run(6, "degree-4 relation system", criterion_degree4);
  run(7, "invariant corpus", criterion_invariant_corpus);
  run(8, "operator comparison", criterion_operator_comparison);
  run(9, "determinism", criterion_determinism);
  return rep;
}

std::string render_report(const AcceptanceReport& rep) {
  std::ostringstream os;
  for (const CriterionResult& r : rep.criteria)
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.number << " " << std::left
       << std::setw(26) << r.name << " " << std::right << std::setw(7) << r.ms
       << " ms  " << r.detail << "\n";
  os << (rep.all_passed ? "all criteria passed" : "SUITE FAILED") << "\n";
  return os.str();
}

}  // namespace ml
