// Copyright 2026 The ksapprox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ksa/kscolor.hpp"
#include "test_support.hpp"

using namespace ksa;
using namespace ksa::testing;

namespace {

RaySet canonical_basis() {
  return RaySet({UnitVector3(1.0, 0.0, 0.0), UnitVector3(0.0, 1.0, 0.0), UnitVector3(0.0, 0.0, 1.0)});
}

RaySet subset(const RaySet& rs, const std::vector<std::size_t>& idx) {
  std::vector<UnitVector3> rays;
  std::vector<std::string> labels;
  for (std::size_t i : idx) {
    rays.push_back(rs[i]);
    labels.push_back(rs.label(i));
  }
  return RaySet(rays, labels);
}

/// Triads as sets of ray indices, after mapping each ray through `perm`.
std::set<std::set<std::size_t>> permuted_triads(const RaySet& rs, const OrthoStructure& os, const std::array<int, 3>& perm) {
  std::set<std::set<std::size_t>> out;
  for (const auto& t : os.triads) {
    std::set<std::size_t> s;
    for (std::size_t i : t) {
      const Vec3& v = rs[i].vec();
      const auto j = rs.find({v[perm[0]], v[perm[1]], v[perm[2]]});
      REQUIRE(j.has_value());
      s.insert(*j);
    }
    out.insert(s);
  }
  return out;
}

}  // namespace

TEST_CASE("Peres set: size, axes and orthogonality structure") {
  const RaySet peres = peres_rays();
  CHECK(peres.size() == 33);
  CHECK(peres.find({1.0, 0.0, 0.0}).has_value());
  CHECK(peres.find({0.0, 1.0, 0.0}).has_value());
  CHECK(peres.find({0.0, 0.0, -1.0}).has_value());
  for (std::size_t i = 0; i < peres.size(); ++i) {
    // Components are 0, +-1, +-sqrt2 up to normalization: squares are multiples of 1/n2.
    const Vec3& v = peres[i].vec();
    const double smallest = *std::min_element(v.begin(), v.end(), [](double a, double b) {
      const auto key = [](double x) { return std::abs(x) < 1e-12 ? 1e9 : std::abs(x); };
      return key(a) < key(b);
    });
    for (double c : v) {
      const double ratio = std::abs(c / smallest);
      const bool ok = std::abs(ratio) < 1e-12 || std::abs(ratio - 1.0) < 1e-12 || std::abs(ratio - std::sqrt(2.0)) < 1e-12 ||
                      std::abs(ratio - 1.0 / std::sqrt(2.0)) < 1e-12;
      CHECK(ok);
    }
  }
  const OrthoStructure os = ortho_structure(peres);
  CHECK(os.triads.size() >= 16);
  CHECK(os.triads.size() == 16);
  CHECK(os.pairs.size() == 72);
  for (const auto& t : os.triads) {
    for (auto [a, b] : {std::pair{t[0], t[1]}, std::pair{t[0], t[2]}, std::pair{t[1], t[2]}}) {
      CHECK(std::find(os.pairs.begin(), os.pairs.end(), std::array<std::size_t, 2>{a, b}) != os.pairs.end());
    }
  }
}

TEST_CASE("ortho_structure: small cases") {
  CHECK(ortho_structure(canonical_basis()).triads.size() == 1);
  const double s = 1.0 / std::sqrt(2.0);
  const RaySet rs({UnitVector3(1.0, 0.0, 0.0), UnitVector3(0.0, 1.0, 0.0), UnitVector3(0.0, 0.0, 1.0), UnitVector3(s, s, 0.0)});
  const OrthoStructure os = ortho_structure(rs);
  CHECK(std::find(os.pairs.begin(), os.pairs.end(), std::array<std::size_t, 2>{2, 3}) != os.pairs.end());
  CHECK(os.pairs.size() == 4);
  CHECK(os.triads.size() == 1);
}

TEST_CASE("ortho_structure: Peres set is symmetric under axis permutations") {
  const RaySet peres = peres_rays();
  const OrthoStructure os = ortho_structure(peres, 1e-9);
  const auto base = permuted_triads(peres, os, {0, 1, 2});
  for (const auto& perm : std::vector<std::array<int, 3>>{{1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}}) {
    CHECK(permuted_triads(peres, os, perm) == base);
  }
}

TEST_CASE("solver: Peres set is not colourable") {
  const RaySet peres = peres_rays();
  const ColoringResult res = find_legal_coloring(ortho_structure(peres), peres.size());
  CHECK_FALSE(res.satisfiable());
  CHECK(res.stats.contradictions > 0);
  MESSAGE("Peres search: " << res.stats.nodes << " nodes, " << res.stats.contradictions << " contradictions");
}

TEST_CASE("solver: Peres set without triad constraints alone is colourable") {
  // Only the triad rule, no pair rule: colourable, so the pair rule is essential.
  const RaySet peres = peres_rays();
  OrthoStructure os = ortho_structure(peres);
  std::set<std::array<std::size_t, 2>> in_triads;
  for (const auto& t : os.triads) {
    in_triads.insert({t[0], t[1]});
    in_triads.insert({t[0], t[2]});
    in_triads.insert({t[1], t[2]});
  }
  std::vector<std::array<std::size_t, 2>> kept;
  for (const auto& p : os.pairs) {
    if (in_triads.count(p)) kept.push_back(p);
  }
  os.pairs = kept;
  CHECK(find_legal_coloring(os, peres.size()).satisfiable());
}

TEST_CASE("solver: single triad") {
  const OrthoStructure os = ortho_structure(canonical_basis());
  const ColoringResult res = find_legal_coloring(os, 3);
  REQUIRE(res.satisfiable());
  CHECK(res.coloring->values == std::vector<std::uint8_t>{0, 1, 1});
  CHECK(check_coloring(os, *res.coloring).empty());
}

TEST_CASE("solver: Peres set without the z axis") {
  const RaySet peres = peres_rays();
  const auto z = peres.find({0.0, 0.0, 1.0});
  REQUIRE(z.has_value());
  const RaySet reduced = remove_ray(peres, *z);
  CHECK(reduced.size() == 32);
  const OrthoStructure os = ortho_structure(reduced);
  const ColoringResult res = find_legal_coloring(os, reduced.size());
  MESSAGE("without z: " << os.triads.size() << " triads, " << os.pairs.size() << " pairs, satisfiable = " << res.satisfiable());
  CHECK(os.triads.size() < 16);
  REQUIRE(res.satisfiable());
  CHECK(check_coloring(os, *res.coloring).empty());
}

TEST_CASE("check_coloring: violations") {
  const OrthoStructure os = ortho_structure(canonical_basis());
  CHECK(check_coloring(os, Coloring{{1, 0, 1}}).empty());
  const std::vector<Violation> all_ones = check_coloring(os, Coloring{{1, 1, 1}});
  REQUIRE(all_ones.size() == 1);
  CHECK(all_ones[0].kind == Violation::Kind::kTriad);
  CHECK(all_ones[0].combination == "111");
  const std::vector<Violation> zeros = check_coloring(os, Coloring{{0, 0, 1}});
  CHECK(zeros.size() == 2);  // triad 001 and pair (0, 0)
  try {
    check_coloring(os, Coloring{{1, 0}});
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIncompleteColoring);
  }
}

TEST_CASE("check_coloring: random total colourings of the Peres set all fail") {
  const RaySet peres = peres_rays();
  const OrthoStructure os = ortho_structure(peres);
  Rng rng(51);
  std::bernoulli_distribution coin(0.6);
  for (int trial = 0; trial < 1000; ++trial) {
    Coloring c;
    for (std::size_t i = 0; i < peres.size(); ++i) c.values.push_back(coin(rng) ? 1 : 0);
    CHECK_FALSE(check_coloring(os, c).empty());
  }
}

TEST_CASE("solver agrees with exhaustive enumeration on random subsets") {
  const RaySet peres = peres_rays();
  Rng rng(52);
  std::vector<std::size_t> idx(peres.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  int unsat = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t n = 6 + static_cast<std::size_t>(trial % 15);  // 6..20 rays
    const RaySet rs = subset(peres, std::vector<std::size_t>(idx.begin(), idx.begin() + static_cast<long>(n)));
    const OrthoStructure os = ortho_structure(rs);
    const ColoringResult res = find_legal_coloring(os, rs.size());
    CHECK(res.satisfiable() == brute_force_colourable(os, rs.size()));
    if (res.satisfiable()) {
      CHECK(check_coloring(os, *res.coloring).empty());
    } else {
      ++unsat;
    }
  }
  MESSAGE("unsatisfiable random subsets: " << unsat);
}

TEST_CASE("solver agrees with exhaustive enumeration on constructed unsatisfiable inputs") {
  // Two triads sharing one ray plus a pair forcing a conflict are small enough to enumerate.
  OrthoStructure os;
  os.n_rays = 5;
  os.triads = {{0, 1, 2}, {0, 3, 4}};
  os.pairs = {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}, {1, 3}, {2, 4}};
  const ColoringResult res = find_legal_coloring(os, 5);
  CHECK(res.satisfiable() == brute_force_colourable(os, 5));
}

TEST_CASE("common rotations preserve satisfiability and triad counts") {
  const RaySet peres = peres_rays();
  Rng rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    const RaySet rot = rotated(peres, random_rotation(rng));
    const OrthoStructure os = ortho_structure(rot, 1e-9);
    CHECK(os.triads.size() == 16);
    CHECK(os.pairs.size() == 72);
    CHECK_FALSE(find_legal_coloring(os, rot.size()).satisfiable());
  }
  const RaySet tri = rotated(canonical_basis(), random_rotation(rng));
  CHECK(find_legal_coloring(ortho_structure(tri), 3).satisfiable());
}

TEST_CASE("solver is deterministic") {
  const RaySet peres = peres_rays();
  const RaySet reduced = remove_ray(peres, 5);
  const OrthoStructure os = ortho_structure(reduced);
  const ColoringResult a = find_legal_coloring(os, reduced.size());
  const ColoringResult b = find_legal_coloring(os, reduced.size());
  CHECK(a.satisfiable() == b.satisfiable());
  if (a.satisfiable()) CHECK(a.coloring->values == b.coloring->values);
  CHECK(a.stats.nodes == b.stats.nodes);
}

TEST_CASE("ray sets reject duplicates up to sign") {
  CHECK_THROWS_AS(RaySet({UnitVector3(1.0, 0.0, 0.0), UnitVector3(-1.0, 0.0, 0.0)}), Error);
  CHECK_THROWS_AS(RaySet({UnitVector3(1.0, 0.0, 0.0)}, {"a", "b"}), Error);
}

TEST_CASE("ray file parsing") {
  std::istringstream good("# canonical basis\n1 0 0\n0 2 0   # unnormalized\n\n0 0 -3\n");
  const RaySet rs = parse_ray_file(good);
  REQUIRE(rs.size() == 3);
  CHECK(rs[1].y() == doctest::Approx(1.0));
  CHECK(rs[2].z() == doctest::Approx(-1.0));
  CHECK(rs.label(0) == "line2");

  const auto parse_error = [](const std::string& text) -> std::string {
    std::istringstream in(text);
    try {
      parse_ray_file(in);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
      return e.what();
    }
    return "";
  };
  CHECK(parse_error("1 0 0\n0 1 x\n").find("line 2") != std::string::npos);
  CHECK(parse_error("1 0 0\n\n0 1\n").find("line 3") != std::string::npos);
  CHECK(parse_error("1 0 0 4\n").find("line 1") != std::string::npos);
  CHECK(parse_error("0 0 0\n").find("line 1") != std::string::npos);
  CHECK(parse_error("1 0 0\n-2 0 0\n").find("line 2") != std::string::npos);

  try {
    load_ray_file("/nonexistent/rays.txt");
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
}

TEST_CASE("solver agrees with exhaustive enumeration on random abstract structures") {
  Rng rng(54);
  int unsat = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial % 11);  // 4..14 nodes
    std::uniform_int_distribution<std::size_t> node(0, n - 1);
    OrthoStructure os;
    os.n_rays = n;
    std::set<std::array<std::size_t, 2>> pairs;
    const int n_triads = 2 + trial % 9;
    for (int k = 0; k < n_triads; ++k) {
      std::array<std::size_t, 3> t{node(rng), node(rng), node(rng)};
      std::sort(t.begin(), t.end());
      if (t[0] == t[1] || t[1] == t[2]) continue;
      os.triads.push_back(t);
      pairs.insert({t[0], t[1]});
      pairs.insert({t[0], t[2]});
      pairs.insert({t[1], t[2]});
    }
    for (int k = 0; k < trial % 7; ++k) {
      std::array<std::size_t, 2> p{node(rng), node(rng)};
      std::sort(p.begin(), p.end());
      if (p[0] != p[1]) pairs.insert(p);
    }
    os.pairs.assign(pairs.begin(), pairs.end());
    const ColoringResult res = find_legal_coloring(os, n);
    CHECK(res.satisfiable() == brute_force_colourable(os, n));
    if (res.satisfiable()) {
      CHECK(check_coloring(os, *res.coloring).empty());
    } else {
      ++unsat;
    }
  }
  MESSAGE("unsatisfiable abstract structures: " << unsat);
  CHECK(unsat > 0);
}
