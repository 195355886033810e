#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "ptskdv/numeval.hpp"

using namespace ptskdv;
using namespace ptskdv::num;
using sym::Expr;
using th::crat;
using th::eps_exp;

namespace {

constexpr int N = 6;

GrassmannElement random_element(std::mt19937& rng, int want_parity, double body_floor = 0.0) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  GrassmannElement r(N);
  for (std::size_t m = 0; m < r.c.size(); ++m) {
    if (static_cast<int>(std::popcount(m)) % 2 != want_parity) continue;
    r.c[m] = Complex(d(rng), d(rng)) * 0.4;
  }
  if (want_parity == 0 && body_floor > 0.0) {
    double b = std::abs(r.c[0]);
    if (b < body_floor) r.c[0] += Complex(body_floor + 0.3, 0.1);
  }
  return r;
}

GrassmannElement gen(int i) { return GrassmannElement::generator(N, i); }

bool approx(const GrassmannElement& a, const GrassmannElement& b, double tol = 1e-9) {
  double scale = std::max({1.0, a.norm_inf(), b.norm_inf()});
  return g_sub(a, b).norm_inf() <= tol * scale;
}

NumContext random_context(std::mt19937& rng) {
  NumContext ctx;
  ctx.n_gen = N;
  for (int k = 0; k <= 3; ++k) {
    ctx.jets[sym::Jet{sym::Field::U, k, 0}] = random_element(rng, 0, k == 1 ? 0.6 : 0.0);
    ctx.jets[sym::Jet{sym::Field::F, k, 0}] = random_element(rng, 0);
    ctx.jets[sym::Jet{sym::Field::Xi, k, 0}] = random_element(rng, 1);
  }
  ctx.etas[0] = random_element(rng, 1);
  ctx.etas[1] = random_element(rng, 1);
  ctx.theta = random_element(rng, 1);
  ctx.params = {{sym::Param::Lambda, Complex(1.5, 0.0)}, {sym::Param::Eps, Complex(1.7, 0.0)}};
  return ctx;
}

// atoms chosen so that symbolic canonicalization is numerically faithful
Expr random_expr(std::mt19937& rng, int depth) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  if (depth == 0) {
    switch (pick(9)) {
      case 0: return sym::sc(pick(7) - 3);
      case 1: return sym::scale(sym::imag_unit(), sym::Coefficient(crat(pick(5) + 1, pick(3) + 1)));
      case 2: return sym::jet_u(pick(4));
      case 3: return sym::jet_f(pick(3));
      case 4: return sym::jet_xi(pick(4));
      case 5: return sym::eta(pick(2));
      case 6: return sym::theta();
      case 7: return sym::sc(sym::Coefficient::var(sym::Param::Lambda));
      default: return th::ipow_of(sym::jet_u(1), eps_exp(pick(3) - 1));
    }
  }
  Expr a = random_expr(rng, depth - 1);
  Expr b = random_expr(rng, depth - 1);
  return pick(2) == 0 ? sym::add(a, b) : sym::mul(a, b);
}

}  // namespace

TEST_CASE("generators anticommute and square to zero") {
  for (int i = 0; i < N; ++i) {
    CHECK(g_mul(gen(i), gen(i)).is_zero());
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      CHECK(approx(g_mul(gen(i), gen(j)), g_scale(g_mul(gen(j), gen(i)), Complex(-1.0)), 1e-15));
    }
  }
}

TEST_CASE("triple products carry the permutation sign") {
  GrassmannElement base = g_mul(gen(0), g_mul(gen(1), gen(2)));
  int idx[3] = {0, 1, 2};
  int signs[6];
  GrassmannElement prods[6];
  int perm = 0;
  std::sort(idx, idx + 3);
  do {
    int inv = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        if (idx[a] > idx[b]) ++inv;
    signs[perm] = inv % 2 ? -1 : 1;
    prods[perm] = g_mul(gen(idx[0]), g_mul(gen(idx[1]), gen(idx[2])));
    ++perm;
  } while (std::next_permutation(idx, idx + 3));
  for (int k = 0; k < perm; ++k)
    CHECK(approx(prods[k], g_scale(base, Complex(signs[k])), 1e-15));
}

TEST_CASE("multiplication is associative and distributive") {
  std::mt19937 rng(2024);
  for (int k = 0; k < 50; ++k) {
    GrassmannElement a = random_element(rng, k % 2);
    GrassmannElement b = random_element(rng, (k / 2) % 2);
    GrassmannElement c = random_element(rng, (k / 4) % 2);
    CHECK(approx(g_mul(g_mul(a, b), c), g_mul(a, g_mul(b, c)), 1e-12));
    CHECK(approx(g_mul(a, g_add(b, c)), g_add(g_mul(a, b), g_mul(a, c)), 1e-12));
  }
}

TEST_CASE("integer powers agree with repeated multiplication") {
  std::mt19937 rng(7);
  for (int p = 0; p <= 5; ++p) {
    GrassmannElement x = random_element(rng, 0);
    GrassmannElement by_mul = GrassmannElement::scalar(N, Complex(1.0));
    for (int k = 0; k < p; ++k) by_mul = g_mul(by_mul, x);
    CHECK(approx(g_pow(x, Complex(static_cast<double>(p))), by_mul, 1e-12));
  }
  // soulful element with zero body still powers along the integer path
  GrassmannElement s = g_mul(gen(0), gen(1));
  CHECK(g_pow(s, Complex(2.0)).is_zero());
}

TEST_CASE("fractional powers follow the principal branch") {
  std::mt19937 rng(99);
  for (int k = 0; k < 30; ++k) {
    GrassmannElement x = random_element(rng, 0, 0.7);
    GrassmannElement r = g_pow(x, Complex(0.5));
    CHECK(approx(g_mul(r, r), x, 1e-10));
    GrassmannElement a = g_pow(x, Complex(1.3, 0.0));
    GrassmannElement b = g_pow(x, Complex(-2.1, 0.0));
    CHECK(approx(g_mul(a, b), g_pow(x, Complex(-0.8, 0.0)), 1e-10));
    CHECK(approx(g_mul(g_pow(x, Complex(2.5)), g_pow(x, Complex(-2.5))),
                 GrassmannElement::scalar(N, Complex(1.0)), 1e-10));
  }
}

TEST_CASE("non-integer power of a body-free element is singular") {
  GrassmannElement s = g_mul(gen(0), gen(1));
  CHECK_THROWS_AS(g_pow(s, Complex(0.5), 17), SingularConfiguration);
  try {
    g_pow(s, Complex(2.5), 17);
  } catch (const SingularConfiguration& e) {
    CHECK(e.grid_index == 17);
  }
}

TEST_CASE("numeric evaluation is a ring homomorphism") {
  std::mt19937 rng(31337);
  NumContext ctx = random_context(rng);
  for (int k = 0; k < 120; ++k) {
    Expr a = random_expr(rng, 2);
    Expr b = random_expr(rng, 2);
    GrassmannElement va = num_evaluate(a, ctx);
    GrassmannElement vb = num_evaluate(b, ctx);
    CHECK(approx(num_evaluate(sym::mul(a, b), ctx), g_mul(va, vb), 1e-8));
    CHECK(approx(num_evaluate(sym::add(a, b), ctx), g_add(va, vb), 1e-10));
  }
}

TEST_CASE("formal phases evaluate as quarter turns") {
  std::mt19937 rng(5);
  NumContext ctx = random_context(rng);
  ctx.params[sym::Param::Eps] = Complex(3.0, 0.0);
  GrassmannElement v = num_evaluate(sym::phase_power(eps_exp(0)), ctx);
  CHECK(approx(v, GrassmannElement::scalar(N, Complex(0.0, -1.0)), 1e-12));
}

TEST_CASE("deformed power series matches the algebraic expansion") {
  std::mt19937 rng(606);
  NumContext ctx = random_context(rng);
  // base i*(u_x + xi_x xi_xx) is even with a nilpotent tail
  Expr base = sym::mul(sym::imag_unit(),
                       sym::add(sym::jet_u(1), sym::mul(sym::jet_xi(1), sym::jet_xi(2))));
  Expr sym_pow = sym::nilpotent_power(base, eps_exp(0));
  GrassmannElement direct = g_pow(num_evaluate(base, ctx), ctx.params[sym::Param::Eps]);
  CHECK(approx(num_evaluate(sym_pow, ctx), direct, 1e-9));
}

TEST_CASE("absorption bookkeeping is numerically faithful") {
  std::mt19937 rng(607);
  NumContext ctx = random_context(rng);
  // u_x (i u_x)^eps canonicalizes through a quarter-turn phase
  Expr e = sym::mul(sym::jet_u(1), th::ipow_of(sym::jet_u(1), eps_exp(0)));
  GrassmannElement v = ctx.jets[sym::Jet{sym::Field::U, 1, 0}];
  GrassmannElement expect = g_mul(v, g_pow(g_scale(v, Complex(0.0, 1.0)), ctx.params[sym::Param::Eps]));
  CHECK(approx(num_evaluate(e, ctx), expect, 1e-10));
}

TEST_CASE("evaluation validates assignments") {
  NumContext ctx;
  ctx.n_gen = N;
  CHECK_THROWS_AS(num_evaluate(sym::jet_u(0), ctx), ValidationError);
  ctx.jets[sym::Jet{sym::Field::U, 0, 0}] = gen(0);  // odd value on an even jet
  CHECK_THROWS_AS(num_evaluate(sym::jet_u(0), ctx), ValidationError);
  CHECK_THROWS_AS(num_evaluate(sym::theta(), ctx), ValidationError);
  CHECK_THROWS_AS(num_evaluate(sym::superjet(0), ctx), MalformedExpression);
  CHECK_THROWS_AS(num_evaluate(sym::deformed_xi_jet(0, eps_exp(0)), ctx), MalformedExpression);
}
