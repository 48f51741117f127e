// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "linalg.hpp"
#include "rng.hpp"

using namespace actwarp;

TEST_CASE("inverse and condition gate") {
  Mat a(2, 2);
  a(0, 0) = 4;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 3;
  Mat inv = inverse(a);
  Mat prod = a * inv;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(prod(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));

  Mat sing(2, 2);
  sing(0, 0) = 1;
  sing(0, 1) = 2;
  sing(1, 0) = 2;
  sing(1, 1) = 4;
  CHECK_THROWS_AS(inverse(sing), Error);
}

TEST_CASE("cholesky and jacobi eigenvalues") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng.uniform(0, 4));
    Mat b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = rng.uniform(-1, 1);
    Mat spd = b.transposed() * b + Mat::identity(n);
    Mat l = cholesky(spd);
    Mat rec = l * l.transposed();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(rec(i, j) == doctest::Approx(spd(i, j)).epsilon(1e-10));

    Vec ev;
    Mat vecs;
    jacobi_eigen(spd, ev, vecs);
    CHECK(ev.front() >= 1.0 - 1e-9);
    for (int k = 0; k < n; ++k) {
      Vec v = vecs.col(k);
      Vec av = spd.apply(v);
      for (int i = 0; i < n; ++i) CHECK(av[i] == doctest::Approx(ev[k] * v[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("householder qr complement") {
  Rng rng(17);
  Mat a(5, 2);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = rng.uniform(-1, 1);
  Mat q, r;
  householder_qr(a, q, r);
  Mat qr = q * r;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 2; ++j) CHECK(qr(i, j) == doctest::Approx(a(i, j)).epsilon(1e-12));
  // complement columns orthogonal to the range
  for (int c = 2; c < 5; ++c)
    for (int j = 0; j < 2; ++j) {
      Vec qc = q.col(c), aj = a.col(j);
      CHECK(std::abs(dot(qc, aj)) < 1e-12);
    }
}

TEST_CASE("singular values flag rank deficiency") {
  Mat a(4, 2);
  for (int i = 0; i < 4; ++i) {
    a(i, 0) = i + 1.0;
    a(i, 1) = 2.0 * (i + 1.0);
  }
  Vec sv = singular_values(a);
  CHECK(sv[0] > 1.0);
  CHECK(sv[1] < 1e-7);
}

TEST_CASE("gram-schmidt with metric inner product") {
  Mat g(3, 3);
  g(0, 0) = 1;
  g(1, 1) = 4;
  g(2, 2) = 9;
  std::vector<Vec> in = {{1, 0, 0}, {1, 1, 0}, {2, 2, 0}, {0, 1, 1}};
  auto gs = gram_schmidt(g, in, 1e-8);
  CHECK(gs.vectors.size() == 3);
  CHECK(gs.collapsed == std::vector<int>{2});
  CHECK(orthonormality_residual(g, gs.vectors) < 1e-12);
}
