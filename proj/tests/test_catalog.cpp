#include <catch2/catch_amalgamated.hpp>

#include "sumlab/catalog.hpp"
#include "sumlab/jsonio.hpp"

using namespace sumlab;

TEST_CASE("builtin catalog carries the expected entries") {
  const auto cat = builtin_catalog();
  CHECK(cat.modulus("log1p").declared == Compatibility::incompatible);
  CHECK(cat.modulus("lambertw").declared == Compatibility::incompatible);
  CHECK(cat.modulus("xplusratio").declared == Compatibility::compatible);
  CHECK(cat.modulus("powersum").declared == Compatibility::compatible);
  CHECK(cat.modulus("xpluslog").declared == Compatibility::compatible);
  for (const char* name : {"geo2", "geo15", "poly2", "expl_unb"}) CHECK_NOTHROW(cat.theta(name));
  const auto prof = cat.theta("geo2").ratio_profile(100);
  CHECK(prof.liminf_est == 2.0);
  CHECK(prof.limsup_est == 2.0);
  CHECK(cat.theta("expl_unb").ratio_profile(24).unbounded_flag);
  for (const char* name :
       {"zero", "inv_square", "chi_evens", "chi_squares", "reciproco_log1p_geo2",
        "th3_log1p_geo2", "gap_expl_unb"})
    CHECK_NOTHROW(cat.sequence(name));
  CHECK(cat.constructions.count("reciproco_log1p_geo2") == 1);
  CHECK_THROWS_AS(cat.modulus("nope"), Error);
}

TEST_CASE("catalog files parse back into the builtin entries") {
  Catalog cat;
  load_moduli(cat, read_file(std::string(SUMLAB_DATA_DIR) + "/moduli.cat"));
  load_thetas(cat, read_file(std::string(SUMLAB_DATA_DIR) + "/thetas.cat"));
  load_sequences(cat, read_file(std::string(SUMLAB_DATA_DIR) + "/sequences.cat"));

  const auto ref = builtin_catalog();
  for (const auto& [name, m] : ref.moduli) {
    REQUIRE(cat.moduli.count(name) == 1);
    const auto& parsed = cat.moduli.at(name);
    CHECK(parsed.kind == m.kind);
    CHECK(parsed.declared == m.declared);
    for (double x : {0.1, 1.0, 123.0, 1e6}) CHECK(parsed(x) == m(x));
  }
  for (const auto& [name, th] : ref.thetas) {
    REQUIRE(cat.thetas.count(name) == 1);
    for (std::size_t r = 1; r <= 20; ++r) CHECK(cat.thetas.at(name).k(r) == th.k(r));
  }
  for (const auto& [name, s] : ref.sequences) {
    REQUIRE(cat.sequences.count(name) == 1);
    for (std::uint64_t n : {1ull, 17ull, 1000ull, 123456ull})
      CHECK(cat.sequences.at(name)(n) == s(n));
  }
  for (const auto& [name, ws] : ref.constructions) {
    REQUIRE(cat.constructions.count(name) == 1);
    CHECK(cat.constructions.at(name).witness_blocks == ws.witness_blocks);
  }
}

TEST_CASE("malformed catalog blocks are rejected") {
  Catalog cat;
  CHECK_THROWS_AS(load_moduli(cat, "name = x\nkind = no_such\n"), Error);
  CHECK_THROWS_AS(load_moduli(cat, "kind = identity\n"), Error);
  CHECK_THROWS_AS(load_thetas(cat, "name = t\nkind = geometric\n"), Error);
  CHECK_THROWS_AS(load_thetas(cat, "name = t\nkind = geometric\nrho = abc\n"), Error);
  CHECK_THROWS_AS(parse_kv_blocks("just some line\n"), Error);
}

TEST_CASE("scientific notation parses in catalog values") {
  Catalog cat;
  load_thetas(cat, "name = t\nkind = explicit\nterms = 1e2,1e4,1e6,2e6,4e6\n");
  CHECK(cat.theta("t").k(1) == 100.0);
  CHECK(cat.theta("t").k(3) == 1e6);
}
