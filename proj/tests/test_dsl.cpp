#include "specount/specdsl.hpp"

#include "specount/polygonal.hpp"
#include "specount/succulents.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

using namespace specount;

namespace {

std::string read_sample(const std::string& name) {
  std::ifstream in(std::string(SPECOUNT_SAMPLES_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool layers_equal(const PsPolynomial& a, const PsPolynomial& b, int n) {
  return ps_retruncate(a, n) == ps_retruncate(b, n);
}

bool layers_equal(const S2Series& a, const S2Series& b, int n) {
  return layers_equal(a.part_e.poly, b.part_e.poly, n) &&
         layers_equal(a.part_tau.poly, b.part_tau.poly, n);
}

}  // namespace

TEST_CASE("parsing round-trips through the printer") {
  for (const char* name : {"polygonal.species", "kgonal4.species",
                           "succulents.species", "polygonal_literal.species"}) {
    std::string text = read_sample(name);
    SpeciesSystem sys = parse_species(text);
    std::string printed = print_species(sys);
    CHECK(print_species(parse_species(printed)) == printed);
  }
  std::string one = "B = (X + L[2](X)) * C[>=3](X * X) - sum(n>=1, L[n+1](X));";
  CHECK(print_species(parse_species(print_species(parse_species(one)))) ==
        print_species(parse_species(one)));
}

TEST_CASE("parser rejects malformed systems") {
  CHECK_THROWS_AS(parse_species("B = X; B = X * X;"), ParseError);
  CHECK_THROWS_AS(parse_species("E = X;"), ParseError);
  CHECK_THROWS_AS(parse_species("B = X +;"), ParseError);
  CHECK_THROWS_AS(parse_species("B = L[](X);"), ParseError);
  CHECK_THROWS_AS(parse_species("B = X ? X;"), ParseError);
  try {
    parse_species("B = X;\nCc = X *;");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("static checks reject bad structure") {
  CHECK_THROWS_AS(check_species_system(parse_species("B = Unknown + X;")),
                  ParseError);
  CHECK_THROWS_AS(check_species_system(parse_species("B = E(B);")), ParseError);
  CHECK_THROWS_AS(check_species_system(parse_species("B = B + X;")), ParseError);
  CHECK_THROWS_AS(check_species_system(parse_species("B = L[n](X);")), ParseError);
  CHECK_THROWS_AS(
      check_species_system(parse_species("B = sum(n>=1, P[n](X, X));")),
      ParseError);
  CHECK_THROWS_AS(
      check_species_system(parse_species("B = X * X * D(B);")), ParseError);
  CHECK_NOTHROW(check_species_system(parse_species("B = X * B;")));
  CHECK_NOTHROW(check_species_system(parse_species("B = P[3](X, B) + X;")));
  CHECK_NOTHROW(
      check_species_system(parse_species(read_sample("succulents.species"))));
}

TEST_CASE("solver surfaces semantic errors") {
  CHECK_THROWS_AS(
      solve_species_ordinary(parse_species("B = quot2(X);"), 4),
      std::invalid_argument);
  CHECK_THROWS_AS(
      solve_species_ordinary(parse_species("B = sum(n>=0, X);"), 4),
      std::invalid_argument);
  CHECK_THROWS_AS(
      solve_species_ordinary(parse_species("B = C[>=3](X + 1);"), 4),
      std::invalid_argument);
}

TEST_CASE("fixed sizes follow the product and cycle formulas") {
  auto env = solve_species_ordinary(
      parse_species("B2 = L[2](X); B3 = C[3](X); B4 = C[4](X); S = L[3](X + X);"),
      6);
  CHECK(env.at("B2").poly == ps_term(mono_var(1, 2), 1, 6));
  PsPolynomial c3 = ps_add(ps_scale(ps_term(mono_var(1, 3), 1, 6), rational(1, 3)),
                           ps_scale(ps_term(mono_var(3), 1, 6), rational(2, 3)));
  CHECK(env.at("B3").poly == c3);
  CHECK(env.at("S").poly == ps_term(mono_var(1, 3), 8, 6));
  // C4 = (p1^4 + p2^2 + 2 p4)/4.
  PsPolynomial c4 = ps_scale(
      ps_add(ps_add(ps_term(mono_var(1, 4), 1, 6), ps_term(mono_var(2, 2), 1, 6)),
             ps_term(mono_var(4), 2, 6)),
      rational(1, 4));
  CHECK(env.at("B4").poly == c4);
}

TEST_CASE("formula application agrees with materialized series under composition") {
  // A structured inner series with nontrivial reversal part.
  S2Series g = g_sub(solve_polygonal(8).anchored, s2_const(1, 8));
  int t = 8;
  for (int n = 1; n <= 6; ++n) {
    S2Series via_builtin = g_plethysm(g_l(n, t), g);
    S2Series direct = detail::EquivariantSemantics::lin(n, g, t);
    CHECK(layers_equal(via_builtin, direct, t));
    if (n >= 3) {
      S2Series via_c = g_plethysm(g_c(n, t), g);
      S2Series direct_c = detail::EquivariantSemantics::cyc(n, g, t);
      CHECK(layers_equal(via_c, direct_c, t));
    }
  }
}

TEST_CASE("sizes beyond the truncation still apply") {
  // The materialized order-n series is empty past the truncation, but
  // L[t+1] applied to a series with a constant term must still produce
  // its (t+1)-fold product.
  auto env = solve_species_ordinary(
      parse_species("A = 1 + X; B = L[9](A);"), 6);
  PsPolynomial expect = ps_const(1, 6);
  for (int i = 0; i < 9; ++i)
    expect = ps_mul(expect, ps_add(ps_const(1, 6), ps_var(1, 6)));
  CHECK(env.at("B").poly == expect);
  CHECK(builtin_l(9, 6).is_zero());
}

TEST_CASE("alternating polygon matches the rooted polygon series") {
  S2Series a = solve_polygonal(10).anchored;
  for (int k = 3; k <= 6; ++k) {
    S2Series direct =
        detail::EquivariantSemantics::polygon(k, g_x(10), a, 10);
    S2Series reference = polygon_rooted(a, only_kgon(k));
    CHECK(layers_equal(direct, reference, 10));
  }
}

TEST_CASE("polygonal system matches the built-in pipeline") {
  PolygonalSolution ref = solve_polygonal(15);
  auto env = solve_species_equivariant(
      parse_species(read_sample("polygonal.species")), 15);
  CHECK(env.at("Astar").truncation() >= 15);
  CHECK(layers_equal(env.at("Astar"), ref.anchored, 15));
  CHECK(layers_equal(env.at("Ae"), ref.rooted.edge, 15));
  CHECK(layers_equal(env.at("Ap"), ref.rooted.polygon, 15));
  CHECK(layers_equal(env.at("Ape"), ref.rooted.polygon_edge, 15));
  CHECK(layers_equal(env.at("A"), ref.oriented, 15));
  CHECK(layers_equal(env.at("Aq").part_e.poly, ref.unoriented.poly, 15));
  CHECK(layers_equal(env.at("Aq").part_tau.poly, ref.unoriented.poly, 15));
}

TEST_CASE("square-only system matches the built-in pipeline") {
  PolygonalSolution ref = solve_kgonal(4, 15);
  auto env = solve_species_equivariant(
      parse_species(read_sample("kgonal4.species")), 15);
  CHECK(layers_equal(env.at("A"), ref.oriented, 15));
  CHECK(layers_equal(env.at("Aq").part_e.poly, ref.unoriented.poly, 15));
}

TEST_CASE("succulent system matches the built-in pipeline") {
  SucculentSolution ref = solve_succulents(15);
  auto env = solve_species_equivariant(
      parse_species(read_sample("succulents.species")), 15);
  // The derivative demands one extra layer of the whole block chain.
  CHECK(env.at("Aq").truncation() >= 16);
  CHECK(env.at("Shat").truncation() >= 15);
  CHECK(layers_equal(env.at("Shat").part_e.poly, ref.pointed.poly, 15));
  CHECK(layers_equal(env.at("S").part_e.poly, ref.series.poly, 15));
  CHECK(layers_equal(env.at("S").part_tau.poly, ref.series.poly, 15));
}

TEST_CASE("literal cycle variant: same quotient, different reversal part") {
  PolygonalSolution ref = solve_polygonal(15);
  auto env = solve_species_equivariant(
      parse_species(read_sample("polygonal_literal.species")), 15);
  CHECK(layers_equal(env.at("A").part_e.poly, ref.oriented.part_e.poly, 15));
  CHECK_FALSE(layers_equal(env.at("A").part_tau.poly,
                           ref.oriented.part_tau.poly, 15));
  for (int n = 0; n <= 4; ++n)
    CHECK(layer(env.at("A").part_tau, n) == layer(ref.oriented.part_tau, n));
  CHECK_FALSE(layer(env.at("A").part_tau, 5) == layer(ref.oriented.part_tau, 5));
  // The disagreement carries no weight after averaging: unlabeled and
  // labeled counts coincide at every size.
  CycleIndexSeries q = quotient_s2(env.at("A"));
  for (int n = 0; n <= 15; ++n) {
    CHECK(unlabeled_count(q, n) == unlabeled_count(ref.unoriented, n));
    CHECK(labeled_count(q, n) == labeled_count(ref.unoriented, n));
  }
}

TEST_CASE("ordinary solving handles the orientation-free chain") {
  std::string text =
      "Astar = E(sum(n>=1, L[n](X) * L[n+1](Astar)));"
      "Ae = L[2](X) * (Astar - 1);"
      "Ap = P[>=3](X, Astar);"
      "Ape = L[2](X) * Astar * sum(n>=1, L[n](X) * L[n+1](Astar));"
      "A = Ae + Ap - Ape;";
  PolygonalSolution ref = solve_polygonal(12);
  auto env = solve_species_ordinary(parse_species(text), 12);
  CHECK(layers_equal(env.at("A").poly, ref.oriented.part_e.poly, 12));
}
