#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "densecode/model.hpp"
#include "densecode/scheme_io.hpp"
#include "support/errors.hpp"
#include "support/random.hpp"

using namespace densecode;
using namespace densecode::testing;

namespace {

EncodingScheme two_member(const ComplexMatrix& a, const ComplexMatrix& b) {
  return EncodingScheme(static_cast<int>(a.rows()), {a, b});
}

const ComplexMatrix kI2 = ComplexMatrix::Identity(2, 2);

}  // namespace

TEST(SchmidtSpectrum, SortsDescendingStably) {
  const SchmidtSpectrum s({0.2, 0.5, 0.3});
  EXPECT_EQ(s[0], 0.5);
  EXPECT_EQ(s[1], 0.3);
  EXPECT_EQ(s[2], 0.2);
  EXPECT_EQ(s.order(), (std::vector<int>{1, 2, 0}));
  const SchmidtSpectrum ties({0.25, 0.5, 0.25});
  EXPECT_EQ(ties.order(), (std::vector<int>{1, 0, 2}));
}

TEST(SchmidtSpectrum, RejectsInvalid) {
  EXPECT_EQ(kind_of([] { SchmidtSpectrum({0.6, 0.6}); }), ErrorKind::InvalidSpectrum);
  EXPECT_EQ(kind_of([] { SchmidtSpectrum({1.2, -0.2}); }), ErrorKind::InvalidSpectrum);
  EXPECT_EQ(kind_of([] { SchmidtSpectrum(std::vector<double>{}); }), ErrorKind::InvalidSpectrum);
  EXPECT_EQ(kind_of([] { SchmidtSpectrum({NAN, 1.0}); }), ErrorKind::InvalidSpectrum);
}

TEST(SchmidtSpectrum, Flags) {
  EXPECT_TRUE(SchmidtSpectrum::uniform(4).is_maximal());
  EXPECT_FALSE(SchmidtSpectrum({0.6, 0.4}).is_maximal());
  EXPECT_FALSE(SchmidtSpectrum({0.5 + 1e-6, 0.5 - 1e-6}).is_maximal());
  EXPECT_TRUE(SchmidtSpectrum({0.5 + 1e-12, 0.5 - 1e-12}).is_maximal());
  EXPECT_TRUE(SchmidtSpectrum({1.0, 0.0}).has_zero());
  EXPECT_FALSE(SchmidtSpectrum({1.0, 0.0}).strictly_positive());
}

TEST(EncodingScheme, ValidatesMembers) {
  EXPECT_EQ(kind_of([] { EncodingScheme(2, {2.0 * kI2}); }), ErrorKind::NotUnitary);
  EXPECT_EQ(kind_of([] { EncodingScheme(2, {ComplexMatrix::Identity(3, 3)}); }), ErrorKind::InvalidDimension);
  EXPECT_EQ(kind_of([] { EncodingScheme(2, {}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { EncodingScheme(1, {ComplexMatrix::Identity(1, 1), ComplexMatrix::Identity(1, 1)}); }),
            ErrorKind::InvalidArgument);
}

TEST(EntangledState, Examples) {
  const ComplexVector product = make_entangled_state(SchmidtSpectrum({1.0, 0.0}));
  EXPECT_EQ(product, (ComplexVector(4) << 1.0, 0.0, 0.0, 0.0).finished());

  const ComplexVector bell = make_entangled_state(SchmidtSpectrum::uniform(2));
  EXPECT_NEAR(bell(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(bell(3).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(bell(1), Complex(0.0, 0.0));

  const ComplexVector partial = make_entangled_state(SchmidtSpectrum({0.6, 0.4}));
  EXPECT_NEAR(partial(0).real(), std::sqrt(0.6), 1e-15);
  EXPECT_NEAR(partial(3).real(), std::sqrt(0.4), 1e-15);
  EXPECT_NEAR(partial.norm(), 1.0, 1e-12);
}

TEST(Gram, Examples) {
  const GramMatrix weyl = gram(weyl_scheme(2), SchmidtSpectrum::uniform(2));
  EXPECT_LE((weyl.entries - ComplexMatrix::Identity(4, 4)).norm(), 1e-15);

  const SchmidtSpectrum lambda({0.6, 0.4});
  const GramMatrix ix = gram(two_member(kI2, pauli_x()), lambda);
  EXPECT_LE((ix.entries - ComplexMatrix::Identity(2, 2)).norm(), 1e-15);

  const GramMatrix iz = gram(two_member(kI2, pauli_z()), lambda);
  EXPECT_NEAR(std::abs(iz.entries(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(iz.entries(0, 1) - 0.2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(iz.entries(1, 0) - 0.2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(iz.entries(1, 1) - 1.0), 0.0, 1e-15);
}

TEST(Gram, DimensionMismatch) {
  EXPECT_EQ(kind_of([] { gram(weyl_scheme(2), SchmidtSpectrum::uniform(3)); }), ErrorKind::InvalidDimension);
  EXPECT_EQ(kind_of([] { encode(weyl_scheme(2), SchmidtSpectrum::uniform(3)); }), ErrorKind::InvalidDimension);
}

TEST(Gram, PropertiesOnRandomSchemes) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 3;
    const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(d * d));
    std::vector<ComplexMatrix> members;
    for (int i = 0; i < n; ++i) members.push_back(random_unitary(d, rng));
    const EncodingScheme scheme(d, members);
    const SchmidtSpectrum lambda = random_spectrum(d, rng);
    const GramMatrix g = gram(scheme, lambda);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(std::abs(g.entries(i, i) - 1.0), 0.0, 1e-12);
      for (int j = 0; j < n; ++j) EXPECT_NEAR(std::abs(g.entries(j, i) - std::conj(g.entries(i, j))), 0.0, 1e-12);
    }
    // a common left unitary leaves the Gram matrix unchanged
    const ComplexMatrix w = random_unitary(d, rng);
    for (auto& m : members) m = w * m;
    EXPECT_LE((gram(EncodingScheme(d, members), lambda).entries - g.entries).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Encode, Examples) {
  const SchmidtSpectrum lambda({0.6, 0.4});
  const auto single = encode(EncodingScheme(2, {kI2}), lambda);
  ASSERT_EQ(single.size(), 1U);
  EXPECT_LE((single[0] - make_entangled_state(lambda)).norm(), 1e-15);

  const auto states = encode(two_member(kI2, pauli_x()), lambda);
  EXPECT_NEAR(std::abs(states[0].dot(states[1])), 0.0, 1e-15);
}

TEST(Encode, OverlapsMatchGram) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 3;
    const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(d * d));
    std::vector<ComplexMatrix> members;
    for (int i = 0; i < n; ++i) members.push_back(random_unitary(d, rng));
    const EncodingScheme scheme(d, members);
    const SchmidtSpectrum lambda = random_spectrum(d, rng);
    const GramMatrix g = gram(scheme, lambda);
    const auto states = encode(scheme, lambda);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        EXPECT_NEAR(std::abs(states[static_cast<std::size_t>(i)].dot(states[static_cast<std::size_t>(j)]) - g.entries(i, j)),
                    0.0, 1e-12);
  }
}

TEST(VerifyScheme, Examples) {
  const VerifyReport weyl3 = verify_scheme(weyl_scheme(3), SchmidtSpectrum::uniform(3), 1e-8);
  EXPECT_TRUE(weyl3.ok);
  EXPECT_LT(weyl3.max_deviation, 1e-12);

  const VerifyReport iz = verify_scheme(two_member(kI2, pauli_z()), SchmidtSpectrum({0.6, 0.4}), 1e-8);
  EXPECT_FALSE(iz.ok);
  EXPECT_NEAR(iz.max_deviation, 0.2, 1e-15);

  std::mt19937_64 rng(7);
  const VerifyReport single = verify_scheme(EncodingScheme(3, {random_unitary(3, rng)}), random_spectrum(3, rng));
  EXPECT_TRUE(single.ok);
  EXPECT_LT(single.max_deviation, 1e-14);

  EXPECT_EQ(kind_of([] { verify_scheme(weyl_scheme(2), SchmidtSpectrum::uniform(2), 0.0); }), ErrorKind::InvalidArgument);
}

TEST(WeylScheme, PauliSetForQubits) {
  const EncodingScheme w = weyl_scheme(2);
  ASSERT_EQ(w.size(), 4);
  EXPECT_LE((w[0] - kI2).norm(), 1e-15);
  EXPECT_LE((w[1] - pauli_z()).norm(), 1e-15);
  EXPECT_LE((w[2] - pauli_x()).norm(), 1e-15);
  EXPECT_LE((w[3] - pauli_x() * pauli_z()).norm(), 1e-15);
}

TEST(WeylScheme, UnitaryAndOrthonormalUnderUniformWeights) {
  for (int d = 1; d <= 5; ++d) {
    const EncodingScheme w = weyl_scheme(d);
    ASSERT_EQ(w.size(), d * d);
    for (const auto& u : w.unitaries()) EXPECT_LE(unitarity_deviation(u), 1e-12);
    const GramMatrix g = gram(w, SchmidtSpectrum::uniform(d));
    EXPECT_LE((g.entries - ComplexMatrix::Identity(d * d, d * d)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SchemeFile, RoundTripAndRepermutation) {
  std::mt19937_64 rng(19);
  const SchmidtSpectrum lambda = random_spectrum(3, rng);
  std::vector<ComplexMatrix> members{random_unitary(3, rng), random_unitary(3, rng)};
  const EncodingScheme scheme(3, members);
  const SchemeFile back = parse_scheme(scheme_to_json(scheme, lambda));
  EXPECT_EQ(back.spectrum.dim(), 3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(back.spectrum[static_cast<std::size_t>(i)], lambda[static_cast<std::size_t>(i)]);
  for (int i = 0; i < 2; ++i) EXPECT_EQ(back.scheme[static_cast<std::size_t>(i)], scheme[static_cast<std::size_t>(i)]);

  // an unsorted file keeps its Gram matrix: columns follow the coefficients
  nlohmann::json j = scheme_to_json(EncodingScheme(2, {kI2, pauli_z()}), SchmidtSpectrum({0.6, 0.4}));
  j["lambda"] = {0.4, 0.6};
  for (auto& u : j["unitaries"])
    for (auto& row : u) std::swap(row[0], row[1]);
  const SchemeFile swapped = parse_scheme(j);
  EXPECT_NEAR(verify_scheme(swapped.scheme, swapped.spectrum).max_deviation, 0.2, 1e-15);
}

TEST(SchemeFile, ReportsFirstViolation) {
  const nlohmann::json good = scheme_to_json(weyl_scheme(2), SchmidtSpectrum::uniform(2));
  auto expect_kind = [](const nlohmann::json& j, ErrorKind kind) {
    EXPECT_EQ(kind_of([&] { parse_scheme(j); }), kind) << j.dump();
  };
  expect_kind(nlohmann::json::array(), ErrorKind::ParseError);
  nlohmann::json j = good;
  j.erase("d");
  expect_kind(j, ErrorKind::ParseError);
  j = good;
  j["lambda"] = {0.5, 0.5, 0.0};
  expect_kind(j, ErrorKind::ParseError);
  j = good;
  j["lambda"] = {0.7, 0.5};
  expect_kind(j, ErrorKind::InvalidSpectrum);
  j = good;
  j["unitaries"][1][0][0] = {2.0, 0.0};
  expect_kind(j, ErrorKind::NotUnitary);
  j = good;
  j["unitaries"][0][1] = {{0.0, 0.0}};
  expect_kind(j, ErrorKind::ParseError);
  j = good;
  j["unitaries"] = nlohmann::json::array();
  expect_kind(j, ErrorKind::InvalidArgument);
}
