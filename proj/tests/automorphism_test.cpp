#include "bass/automorphism.hpp"
#include "bass/counting.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace bass {
namespace {

Polynomial
x(unsigned nvars, unsigned i)
{
  return Polynomial::variable(nvars, i);
}

SchemeParams
params_with(unsigned n)
{
  SchemeParams p;
  p.n = n;
  return p;
}

// Always returns zero: every coin lands on "fix".
struct ZeroSource
{
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{ 0 }; }
  result_type operator()() { return 0; }
};

TEST(SampleSparse, ShapeAtSuggestedParameters)
{
  const SchemeParams params;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto rng = Rng::seeded(seed);
    const Polynomial p = sample_sparse(params, 31, rng);
    ASSERT_EQ(p.size(), 3U);
    for (const Term& t : p.terms()) {
      ASSERT_GE(t.monomial.degree(), 1U);
      ASSERT_LE(t.monomial.degree(), 3U);
      ASSERT_TRUE(t.coefficient == 1 || t.coefficient == -1);
    }
  }
}

TEST(SampleSparse, MinimalCase)
{
  SchemeParams params;
  params.t = 1;
  params.b = 1;
  auto rng = Rng::seeded(1);
  const Polynomial p = sample_sparse(params, 6, rng);
  ASSERT_EQ(p.size(), 1U);
  EXPECT_EQ(p.terms()[0].monomial.degree(), 1U);
  EXPECT_EQ(std::abs(p.terms()[0].coefficient), 1);
}

TEST(SampleSparse, DistinctMonomialsWhenSpaceIsTight)
{
  // Only 3 monomials of degree 1 exist in 3 variables; all must appear.
  SchemeParams params;
  params.t = 3;
  params.b = 1;
  auto rng = Rng::seeded(4);
  EXPECT_EQ(sample_sparse(params, 3, rng).size(), 3U);
}

TEST(SampleSparse, GoldenVector)
{
  auto a = Rng::seeded(2024);
  auto b = Rng::seeded(2024);
  const Polynomial p = sample_sparse(SchemeParams{}, 31, a);
  EXPECT_EQ(p, sample_sparse(SchemeParams{}, 31, b));
  EXPECT_EQ(to_text(p), "nvars=31\n-1:19,28\n1:1,10,31\n1:23,31\n");
}

TEST(SampleSparse, RejectsTooFewVariables)
{
  auto rng = Rng::seeded(0);
  EXPECT_THROW(sample_sparse(SchemeParams{}, 2, rng), InvalidParams);
}

TEST(IsIndicator, Examples)
{
  EXPECT_TRUE(is_indicator(x(2, 1)));
  EXPECT_TRUE(is_indicator(complement(x(2, 1))));
  EXPECT_FALSE(is_indicator(x(2, 1) + x(2, 2)));
  EXPECT_TRUE(is_indicator(Polynomial(2)));
}

TEST(SampleG, OutputsAreIndicators)
{
  const SchemeParams params;
  auto rng = Rng::seeded(99);
  for (int i = 0; i < 1000; ++i) {
    const unsigned n = 4 + static_cast<unsigned>(uniform_below(rng, 28));
    const Polynomial h = sample_g(n, 0, params, rng);
    ASSERT_FALSE(h.is_zero());
    ASSERT_TRUE(is_indicator(h));
  }
}

TEST(SampleG, IndicatorCheckAgreesWithCubeValues)
{
  SchemeParams params;
  params.r = 3;
  auto rng = Rng::seeded(5);
  for (int i = 0; i < 200; ++i) {
    const Polynomial h = sample_g(8, 0, params, rng);
    for (Coefficient v : testing::dense_values(h)) {
      ASSERT_TRUE(v == 0 || v == 1);
    }
  }
}

TEST(SampleG, RespectsExcludedVariables)
{
  const SchemeParams params;
  const unsigned n = 10;
  const std::uint64_t keep = (std::uint64_t{ 1 } << 2) | (std::uint64_t{ 1 } << 6); // x_3, x_7
  auto rng = Rng::seeded(17);
  for (int i = 0; i < 300; ++i) {
    const Polynomial h = sample_g(n, detail::low_mask(n) & ~keep, params, rng);
    ASSERT_EQ(h.support() & ~keep, 0U);
    ASSERT_TRUE(is_indicator(h));
  }
}

TEST(SampleG, SingleAvailableVariable)
{
  SchemeParams params;
  params.r = 2;
  auto rng = Rng::seeded(2);
  for (int i = 0; i < 50; ++i) {
    const Polynomial h = sample_g(5, detail::low_mask(5) & ~std::uint64_t{ 16 }, params, rng);
    ASSERT_TRUE(h == x(5, 5) || h == complement(x(5, 5)));
  }
}

TEST(SampleG, NoAvailableVariableThrows)
{
  auto rng = Rng::seeded(0);
  EXPECT_THROW(sample_g(4, detail::low_mask(4), SchemeParams{}, rng), SamplingError);
  const std::vector<unsigned> all{ 1, 2, 3, 4 };
  EXPECT_THROW(sample_g(4, std::span<const unsigned>(all), SchemeParams{}, rng), SamplingError);
}

TEST(SampleG, GoldenVector)
{
  auto rng = Rng::seeded(2024);
  const Polynomial h = sample_g(8, 0, SchemeParams{}, rng);
  // (1 - x7) x2
  EXPECT_EQ(to_text(h), "nvars=8\n1:2\n-1:2,7\n");
  EXPECT_TRUE(is_indicator(h));
}

TEST(Elementary, ZeroIsIdentity)
{
  EXPECT_TRUE(elementary(3, 2, Polynomial(3)).is_identity());
}

TEST(Elementary, FlipOnTheSquare)
{
  const Automorphism a = elementary(2, 2, x(2, 1));
  EXPECT_EQ(a.image(2), x(2, 2) + x(2, 1) - 2 * (x(2, 1) * x(2, 2)));
  // Vertex bits: x_1 is bit 0, x_2 is bit 1.
  EXPECT_EQ(testing::vertex_map(a), (std::vector<std::uint64_t>{ 0b00, 0b11, 0b10, 0b01 }));
}

TEST(Elementary, InvolutionOnTheCube)
{
  auto rng = Rng::seeded(8);
  for (int i = 0; i < 50; ++i) {
    const unsigned n = 4 + static_cast<unsigned>(uniform_below(rng, 5));
    const unsigned k = 1 + static_cast<unsigned>(uniform_below(rng, n));
    const Polynomial h = sample_g(n, std::uint64_t{ 1 } << (k - 1), SchemeParams{}, rng);
    const auto map = testing::vertex_map(elementary(n, k, h));
    ASSERT_TRUE(testing::is_bijection(map));
    for (std::size_t t = 0; t < map.size(); ++t) {
      ASSERT_EQ(map[map[t]], t);
    }
  }
}

TEST(Elementary, RejectsInvalidGenerators)
{
  EXPECT_THROW(elementary(3, 1, x(3, 1)), InvalidGenerator);
  EXPECT_THROW(elementary(3, 1, x(3, 2) + x(3, 3)), InvalidGenerator);
  EXPECT_THROW(elementary(3, 4, x(3, 2)), DimensionError);
}

TEST(Permutation, Basics)
{
  EXPECT_TRUE(permutation({ 1, 2, 3 }).is_identity());
  const Automorphism swap = permutation({ 2, 1, 3 });
  EXPECT_EQ(apply(swap, x(3, 1)), x(3, 2));
  EXPECT_TRUE(compose(swap, swap).is_identity());
  EXPECT_THROW(permutation({ 1, 1, 3 }), InvalidPermutation);
  EXPECT_THROW(permutation({ 1, 2, 4 }), InvalidPermutation);
}

TEST(Permutation, RandomIsBijection)
{
  auto rng = Rng::seeded(3);
  for (int i = 0; i < 20; ++i) {
    EXPECT_TRUE(testing::is_bijection(testing::vertex_map(random_permutation(6, rng))));
  }
}

TEST(Triangular, AllFixCoinsGiveIdentity)
{
  ZeroSource zeros;
  EXPECT_TRUE(triangular(Direction::up, 6, SchemeParams{}, zeros).is_identity());
  EXPECT_TRUE(triangular(Direction::down, 6, SchemeParams{}, zeros).is_identity());
}

TEST(Triangular, SupportConstraints)
{
  auto rng = Rng::seeded(21);
  const unsigned n = 12;
  const SchemeParams params = params_with(n);
  for (int iter = 0; iter < 30; ++iter) {
    const Automorphism up = triangular(Direction::up, params, rng);
    const Automorphism down = triangular(Direction::down, params, rng);
    for (unsigned k = 1; k <= n; ++k) {
      // up: only x_k and x_j with j > k; down: only x_k and x_j with j < k.
      ASSERT_EQ(up.image(k).support() & detail::low_mask(k - 1), 0U);
      ASSERT_EQ(down.image(k).support() & ~detail::low_mask(k), 0U);
    }
  }
}

TEST(Triangular, GoldenVector)
{
  auto rng = Rng::seeded(2024);
  const Automorphism a = triangular(Direction::up, 5, SchemeParams{}, rng);
  EXPECT_EQ(to_text(a),
            "nvars=5\n"
            "\nnvars=5\n1:1\n1:3,4,5\n-2:1,3,4,5\n"
            "\nnvars=5\n1:2\n1:3\n-2:2,3\n-1:3,4\n2:2,3,4\n"
            "\nnvars=5\n1:3\n1:4,5\n-2:3,4,5\n"
            "\nnvars=5\n1:4\n"
            "\nnvars=5\n1:\n-1:5\n");
}

TEST(Compose, IdentityLaws)
{
  auto rng = Rng::seeded(6);
  const Automorphism phi = generate_private_automorphism(6, params_with(6), rng);
  const Automorphism id = Automorphism::identity(6);
  EXPECT_EQ(compose(id, phi), phi);
  EXPECT_EQ(compose(phi, id), phi);
}

TEST(Compose, MatchesSequentialApplication)
{
  auto rng = Rng::seeded(12);
  const SchemeParams params = params_with(4);
  const Polynomial p = x(4, 1) * x(4, 2);
  for (int i = 0; i < 20; ++i) {
    const Automorphism f = generate_private_automorphism(4, params, rng);
    const Automorphism g = generate_private_automorphism(4, params, rng);
    const Polynomial via_compose = apply(compose(g, f), p);
    ASSERT_EQ(via_compose, apply(g, apply(f, p)));
    // Independent route: substitute images by dense evaluation.
    std::vector<Polynomial> g_images(g.images().begin(), g.images().end());
    std::vector<Polynomial> f_images(f.images().begin(), f.images().end());
    ASSERT_EQ(via_compose, testing::substitute_oracle(testing::substitute_oracle(p, f_images), g_images));
  }
}

TEST(Compose, DimensionMismatchThrows)
{
  EXPECT_THROW(compose(Automorphism::identity(3), Automorphism::identity(4)), DimensionError);
  EXPECT_THROW(apply(Automorphism::identity(3), x(4, 1)), DimensionError);
}

TEST(Apply, Basics)
{
  const Polynomial p = x(3, 1) * x(3, 3) - x(3, 2);
  EXPECT_EQ(apply(Automorphism::identity(3), p), p);
  EXPECT_EQ(apply(elementary(2, 2, x(2, 1)), x(2, 2)), x(2, 2) + x(2, 1) - 2 * (x(2, 1) * x(2, 2)));
}

TEST(Apply, PreservesValueCounts)
{
  std::mt19937_64 gen(1);
  auto rng = Rng::seeded(77);
  for (int i = 0; i < 100; ++i) {
    const unsigned n = 4 + static_cast<unsigned>(uniform_below(gen, 7));
    const Polynomial p = testing::random_polynomial(gen, n, 6, 3);
    const Automorphism phi = generate_private_automorphism(n, params_with(n), rng);
    const auto before = testing::brute_counts(p);
    const auto after = testing::brute_counts(apply(phi, p));
    ASSERT_EQ(before.positive, after.positive);
    ASSERT_EQ(before.zero, after.zero);
    ASSERT_EQ(before.negative, after.negative);
  }
}

TEST(Apply, ValueTableIsPermutedByVertexMap)
{
  // apply(phi, p)(t) = p(phi(t)); this is what makes counts invariant and also
  // shows the result depends only on the B(K) class of p.
  std::mt19937_64 gen(2);
  auto rng = Rng::seeded(78);
  for (int i = 0; i < 30; ++i) {
    const Polynomial p = testing::random_polynomial(gen, 6, 8, 4);
    const Automorphism phi = generate_private_automorphism(6, params_with(6), rng);
    const auto map = testing::vertex_map(phi);
    const auto before = testing::dense_values(p);
    const auto after = testing::dense_values(apply(phi, p));
    for (std::size_t t = 0; t < map.size(); ++t) {
      ASSERT_EQ(after[t], before[map[t]]);
    }
  }
}

TEST(Apply, IdealIsPreserved)
{
  // x_i^2 - x_i is zero in B(K); evaluate the unreduced form through the images.
  auto rng = Rng::seeded(13);
  const Automorphism phi = generate_private_automorphism(6, params_with(6), rng);
  for (unsigned i = 1; i <= 6; ++i) {
    const Polynomial y = phi.image(i);
    EXPECT_TRUE((mul(y, y) - y).is_zero());
  }
}

TEST(ExtendForSigning, ZeroFixesNewVariable)
{
  auto rng = Rng::seeded(30);
  const Automorphism phi = generate_private_automorphism(5, params_with(5), rng);
  const Automorphism ext = extend_for_signing(phi, Polynomial(5));
  EXPECT_EQ(ext.nvars(), 6U);
  EXPECT_EQ(ext.image(6), x(6, 6));
}

TEST(ExtendForSigning, NewCoordinateIsXor)
{
  auto rng = Rng::seeded(31);
  const Automorphism phi = generate_private_automorphism(5, params_with(5), rng);
  const Polynomial r = sample_g(5, 0, SchemeParams{}, rng);
  const Automorphism ext = extend_for_signing(phi, r);
  const auto r_vals = testing::dense_values(r);
  for (std::uint64_t t = 0; t < 64; ++t) {
    const auto img = cube_image(ext, { t, 6 });
    ASSERT_TRUE(img.has_value());
    const bool last = (t >> 5) & 1U;
    ASSERT_EQ((*img)[6], last != (r_vals[t & 31] == 1));
  }
  EXPECT_TRUE(testing::is_bijection(testing::vertex_map(ext)));
}

TEST(ExtendForSigning, AgreesWithPhiOnOldVariables)
{
  auto rng = Rng::seeded(32);
  std::mt19937_64 gen(32);
  const Automorphism phi = generate_private_automorphism(5, params_with(5), rng);
  const Automorphism ext = extend_for_signing(phi, sample_g(5, 0, SchemeParams{}, rng));
  const Polynomial p = testing::random_polynomial(gen, 5, 5, 3);
  EXPECT_EQ(apply(ext, p.widened(6)), apply(phi, p).widened(6));
}

TEST(ExtendForSigning, RejectsBadR)
{
  const Automorphism phi = Automorphism::identity(4);
  EXPECT_THROW(extend_for_signing(phi, x(5, 5)), InvalidGenerator);
  EXPECT_THROW(extend_for_signing(phi, x(4, 1) + x(4, 2)), InvalidGenerator);
  EXPECT_THROW(extend_for_signing(phi, x(3, 1)), DimensionError);
}

TEST(CubeFlip, SingleCoordinateReachability)
{
  // n = 3: for every vertex v and coordinate k, the product of literals that
  // is 1 exactly at v (ignoring x_k) flips v to v ^ e_k and fixes every
  // vertex that disagrees with v off coordinate k.
  const unsigned n = 3;
  for (std::uint64_t v = 0; v < 8; ++v) {
    for (unsigned k = 1; k <= n; ++k) {
      Polynomial h = Polynomial::constant(n, 1);
      for (unsigned j = 1; j <= n; ++j) {
        if (j != k) {
          h = mul(h, ((v >> (j - 1)) & 1U) ? x(n, j) : complement(x(n, j)));
        }
      }
      const auto map = testing::vertex_map(elementary(n, k, h));
      ASSERT_EQ(map[v], v ^ (std::uint64_t{ 1 } << (k - 1)));
      for (std::uint64_t w = 0; w < 8; ++w) {
        if ((w | (std::uint64_t{ 1 } << (k - 1))) != (v | (std::uint64_t{ 1 } << (k - 1)))) {
          ASSERT_EQ(map[w], w);
        }
      }
    }
  }
}

TEST(GeneratedAutomorphisms, CubeBijection)
{
  auto rng = Rng::seeded(40);
  for (int i = 0; i < 50; ++i) {
    const unsigned n = 4 + static_cast<unsigned>(uniform_below(rng, 9));
    const Automorphism phi = generate_private_automorphism(n, params_with(n), rng);
    ASSERT_TRUE(testing::is_bijection(testing::vertex_map(phi))) << "n=" << n;
  }
}

TEST(GeneratedAutomorphisms, FullScaleSpotCheck)
{
  auto rng = Rng::seeded(41);
  const Automorphism phi = generate_private_automorphism(31, SchemeParams{}, rng);
  for (int i = 0; i < 2000; ++i) {
    const BooleanTuple t{ rng() & detail::low_mask(31), 31 };
    ASSERT_TRUE(cube_image(phi, t).has_value());
  }
}

TEST(AutomorphismText, RoundTripAndErrors)
{
  auto rng = Rng::seeded(50);
  const Automorphism phi = generate_private_automorphism(7, params_with(7), rng);
  EXPECT_EQ(parse_automorphism(to_text(phi)), phi);
  EXPECT_THROW(parse_automorphism("nvars=2\n\nnvars=2\n1:1\n"), ParseError);                  // missing image
  EXPECT_THROW(parse_automorphism("nvars=2\n\nnvars=2\n2:1\n\nnvars=2\n1:2\n"), ParseError);   // 2 x_1 not 0/1
  EXPECT_THROW(parse_automorphism("nvars=2\n\nnvars=3\n1:1\n\nnvars=2\n1:2\n"), ParseError);   // width mismatch
}

} // namespace
} // namespace bass
