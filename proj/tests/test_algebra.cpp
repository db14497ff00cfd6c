#include <doctest.h>

#include "fermiopt/algebra.hpp"
#include "fermiopt/errors.hpp"
#include "fermiopt/rng.hpp"
#include "oracles.hpp"

using namespace fermiopt;

namespace {

Support sup(std::initializer_list<int> one_based) {
  Support s = 0;
  for (int j : one_based) s |= Support{1} << (j - 1);
  return s;
}

Polynomial random_sparse(int n, int terms, int max_deg, RngStream& rng) {
  Polynomial p(n);
  for (int t = 0; t < terms; ++t) {
    Support s = 0;
    int deg = static_cast<int>(rng.bits() % (max_deg + 1));
    for (int k = 0; k < deg; ++k) s |= Support{1} << (rng.bits() % n);
    p.add(s, cplx(rng.normal(), rng.normal()));
  }
  return p;
}

AnticommGraph random_graph(int n, RngStream& rng) {
  AnticommGraph g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.bits() & 1) g.add_edge(a, b);
  return g;
}

} // namespace

TEST_CASE("normal form product signs on small supports") {
  auto k4 = AnticommGraph::complete(4);
  Monomial a{sup({1, 2}), 1}, b{sup({2, 3}), 1};
  Monomial ab = normal_form_product(a, b, k4);
  CHECK(ab.support == sup({1, 3}));
  CHECK(ab.sign == 1);
  Monomial ba = normal_form_product(b, a, k4);
  CHECK(ba.support == sup({1, 3}));
  CHECK(ba.sign == -1);
  Monomial ba_free = normal_form_product(b, a, AnticommGraph::empty(4));
  CHECK(ba_free.sign == 1);
}

TEST_CASE("normal form product agrees with bubble-sort oracle on random graphs") {
  RngStream rng("alg-test", 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng.bits() % 6);
    AnticommGraph g = random_graph(n, rng);
    Support s = rng.bits() & ((Support{1} << n) - 1);
    Support t = rng.bits() & ((Support{1} << n) - 1);
    auto [support, sign] = oracle::word_product(s, t, g);
    Monomial m = normal_form_product({s, 1}, {t, 1}, g);
    REQUIRE(m.support == support);
    REQUIRE(m.sign == sign);
  }
}

TEST_CASE("index out of range is an input error") {
  auto k4 = AnticommGraph::complete(4);
  CHECK_THROWS_AS(normal_form_product({sup({5}), 1}, {sup({1}), 1}, k4), InputError);
  CHECK_THROWS_AS(multiply(Polynomial(3), Polynomial(4), AnticommGraph::complete(4)), InputError);
}

TEST_CASE("polynomial products") {
  auto k4 = AnticommGraph::complete(4);
  Polynomial p = Polynomial::scalar(4, 2.0), q = Polynomial::scalar(4, cplx(0, 3));
  CHECK(multiply(p, q, k4).coeff(0) == cplx(0, 6));

  std::vector<double> a{0.3, -1.2, 0.5, 2.0};
  Polynomial l = Polynomial::linear(a);
  Polynomial ll = multiply(l, l, k4);
  CHECK(ll.size() == 1);
  CHECK(ll.coeff(0).real() == doctest::Approx(0.09 + 1.44 + 0.25 + 4.0));

  Polynomial h(4);
  h.add(sup({1, 2}), cplx(0, 1));
  h.add(sup({3, 4}), cplx(0, 1));
  Polynomial h2 = multiply(h, h, k4);
  CHECK(h2.size() == 2);
  CHECK(std::abs(h2.coeff(0) - 2.0) < 1e-15);
  CHECK(std::abs(h2.coeff(sup({1, 2, 3, 4})) + 2.0) < 1e-15);
  // Dense cross-check of the same square.
  auto g = oracle::gammas(4);
  CHECK(oracle::max_abs(oracle::dense(h2, g) - oracle::dense(h, g) * oracle::dense(h, g)) < 1e-14);
}

TEST_CASE("adjoint signs") {
  auto k4 = AnticommGraph::complete(4);
  Polynomial x = Polynomial::monomial(4, sup({1, 2}));
  CHECK(adjoint(x, k4).coeff(sup({1, 2})) == cplx(-1));
  Polynomial y = Polynomial::monomial(4, sup({1, 2, 3, 4}));
  CHECK(adjoint(y, k4).coeff(sup({1, 2, 3, 4})) == cplx(1));
  Polynomial c = Polynomial::scalar(4, cplx(1, 2));
  CHECK(adjoint(c, k4).coeff(0) == cplx(1, -2));

  RngStream rng("adj-test", 2);
  for (int t = 0; t < 20; ++t) {
    AnticommGraph g = random_graph(7, rng);
    Polynomial f = random_sparse(7, 10, 5, rng);
    CHECK(max_coeff_diff(adjoint(adjoint(f, g), g), f) == 0.0);
  }
}

TEST_CASE("commutators of generators") {
  auto k2 = AnticommGraph::complete(2);
  Polynomial c1 = Polynomial::monomial(2, 1), c2 = Polynomial::monomial(2, 2);
  Polynomial comm = commutator(c1, c2, k2);
  CHECK(comm.size() == 1);
  CHECK(comm.coeff(3) == cplx(2));
  CHECK(commutator(c1, c2, k2, true).empty());
  auto k5 = AnticommGraph::complete(5);
  Polynomial h = Polynomial::monomial(5, sup({1, 2, 3, 4}));
  CHECK(commutator(h, Polynomial::monomial(5, sup({5})), k5).empty());
}

TEST_CASE("associativity on random sparse polynomials") {
  RngStream rng("assoc", 3);
  for (int t = 0; t < 30; ++t) {
    const int n = 4 + static_cast<int>(rng.bits() % 5);
    AnticommGraph g = random_graph(n, rng);
    Polynomial f = random_sparse(n, 6, 4, rng), p = random_sparse(n, 6, 4, rng), h = random_sparse(n, 6, 4, rng);
    CHECK(max_coeff_diff(multiply(multiply(f, p, g), h, g), multiply(f, multiply(p, h, g), g)) < 1e-12);
  }
}

TEST_CASE("anticommutation sign law for equal degrees") {
  auto k = AnticommGraph::complete(10);
  RngStream rng("signlaw", 4);
  for (int q = 1; q <= 5; ++q) {
    auto subs = subsets_colex(10, q);
    for (int t = 0; t < 100; ++t) {
      Support s = subs[rng.bits() % subs.size()], u = subs[rng.bits() % subs.size()];
      int st = product_sign(s, u, k), ts = product_sign(u, s, k);
      bool anti = (q - popcount(s & u)) % 2 == 1;
      CHECK((st != ts) == anti);
    }
  }
}

TEST_CASE("trace cyclicity") {
  RngStream rng("cyc", 5);
  for (int t = 0; t < 30; ++t) {
    AnticommGraph g = random_graph(6, rng);
    Polynomial f = random_sparse(6, 8, 4, rng), h = random_sparse(6, 8, 4, rng);
    CHECK(std::abs(multiply(f, h, g).trace() - multiply(h, f, g).trace()) < 1e-12);
  }
}

TEST_CASE("typical real-coefficient polynomials are self-adjoint") {
  auto k = AnticommGraph::complete(8);
  RngStream rng("sa", 6);
  for (int q = 1; q <= 6; ++q) {
    Polynomial h(8);
    for (Support s : subsets_colex(8, q)) h.add(s, i_pow_binom2(q) * rng.normal());
    CHECK(is_self_adjoint(h, k));
    if (q % 4 == 2 || q % 4 == 3) {
      Polynomial bad(8);
      for (Support s : subsets_colex(8, q)) bad.add(s, rng.normal());
      CHECK_FALSE(is_self_adjoint(bad, k));
    }
  }
}

TEST_CASE("degree and zero conventions") {
  CHECK(Polynomial(4).degree() == -1);
  CHECK(Polynomial::scalar(4, 1.0).degree() == 0);
  Polynomial p(4);
  p.add(3, 1.0);
  p.add(3, -1.0);
  CHECK(p.empty());
  CHECK(subsets_colex(6, 3).size() == 20);
  CHECK(binom(12, 4) == 495);
}
