#include <doctest.h>

#include "medsolve/io.hpp"
#include "oracles.hpp"

using namespace medsolve;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const MedError& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_CASE("ensemble documents round trip exactly") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto e = random_ensemble(RankProfile({2, 1, 1}), seed);
    const std::string text = ensemble_to_json(e, {seed, e.profile.ranks()}).dump();
    const auto back = ensemble_from_json(parse_json(text));
    CHECK(back.profile == e.profile);
    for (int i = 0; i < e.size(); ++i) {
      CHECK(back.priors[i] == e.priors[i]);
      CHECK((back.states[i] - e.states[i]).norm() == 0.0);
    }
    CHECK(ensemble_to_json(back, {seed, e.profile.ranks()}).dump() == text);
  }
}

TEST_CASE("POVM documents round trip exactly") {
  const auto e = random_ensemble(RankProfile({2, 1}), 3);
  const auto r = solve_ensemble(e);
  const auto back = povm_from_json(parse_json(povm_to_json(r.povm).dump()), e.profile);
  CHECK(oracle::max_element_distance(back.elements, r.povm.elements) == 0.0);
}

TEST_CASE("malformed documents name the violated invariant") {
  const auto e = oracle::pure_pair(0.5, 0.6);
  json doc = ensemble_to_json(e);

  CHECK(kind_of([] { parse_json("{\"dim\": 2,"); }) == ErrorKind::ParseError);

  json nonsquare = doc;
  nonsquare["states"][0]["rho"][1].erase(1);
  CHECK(kind_of([&] { ensemble_from_json(nonsquare); }) == ErrorKind::ShapeMismatch);

  json wrong_dim = doc;
  wrong_dim["dim"] = 3;
  CHECK(kind_of([&] { ensemble_from_json(wrong_dim); }) == ErrorKind::ShapeMismatch);

  json asym = doc;
  asym["states"][1]["rho"][0][1] = json::array({0.3, 0.2});
  CHECK(kind_of([&] { ensemble_from_json(asym); }) == ErrorKind::NotHermitian);

  json priors = doc;
  priors["states"][0]["p"] = 0.4;
  CHECK(kind_of([&] { ensemble_from_json(priors); }) == ErrorKind::InvalidEnsemble);

  json text = doc;
  text["states"][0]["p"] = "half";
  CHECK(kind_of([&] { ensemble_from_json(text); }) == ErrorKind::ParseError);

  json profile = doc;
  profile["metadata"] = {{"profile", {2}}};
  CHECK(kind_of([&] { ensemble_from_json(profile); }) == ErrorKind::ProfileMismatch);
}

TEST_CASE("error documents carry kind and detail") {
  const json j = error_to_json(MedError(ErrorKind::ShapeMismatch, "bad"));
  CHECK(j["error"]["kind"] == "ShapeMismatch");
  CHECK(j["error"]["detail"] == "bad");
}
