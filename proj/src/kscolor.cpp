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

#include "ksa/kscolor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace ksa {

namespace {

double ray_distance(const Vec3& a, const Vec3& b) {
  const Vec3 d{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  const Vec3 s{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
  return std::min(norm(d), norm(s));
}

}  // namespace

RaySet::RaySet(std::vector<UnitVector3> rays, std::vector<std::string> labels)
    : rays_(std::move(rays)), labels_(std::move(labels)) {
  if (labels_.empty()) {
    for (std::size_t i = 0; i < rays_.size(); ++i) labels_.push_back("r" + std::to_string(i));
  }
  if (labels_.size() != rays_.size()) throw Error(ErrorCode::kInvalidArgument, "one label per ray required");
  for (std::size_t i = 0; i < rays_.size(); ++i)
    for (std::size_t j = i + 1; j < rays_.size(); ++j)
      if (ray_distance(rays_[i].vec(), rays_[j].vec()) <= kTol.ray_duplicate) {
        throw Error(ErrorCode::kInvalidArgument,
                    "duplicate ray: " + labels_[i] + " and " + labels_[j] + " coincide up to sign");
      }
}

std::optional<std::size_t> RaySet::find(const Vec3& v, double tol) const {
  const UnitVector3 u = UnitVector3::normalize(v);
  for (std::size_t i = 0; i < rays_.size(); ++i)
    if (ray_distance(rays_[i].vec(), u.vec()) <= tol) return i;
  return std::nullopt;
}

RaySet peres_rays() {
  const double s2 = std::sqrt(2.0);
  const std::array<Vec3, 4> patterns{{{0, 0, 1}, {0, 1, 1}, {0, 1, s2}, {1, 1, s2}}};

  std::vector<UnitVector3> rays;
  std::vector<std::string> labels;
  const auto symbol = [s2](double c) -> std::string {
    if (c == 0.0) return "0";
    const std::string sign = c < 0 ? "-" : "";
    return sign + (std::abs(c) == s2 ? "s2" : "1");
  };
  const auto canonical_sign = [](Vec3 v) {
    for (double c : v) {
      if (c != 0.0) {
        if (c < 0) v = {-v[0], -v[1], -v[2]};
        break;
      }
    }
    return v;
  };

  // Axes first, then each pattern under permutations and sign changes.
  for (const Vec3& pattern : patterns) {
    Vec3 perm = pattern;
    std::sort(perm.begin(), perm.end());
    do {
      for (int signs = 0; signs < 8; ++signs) {
        Vec3 v{perm[0] * ((signs & 4) ? -1.0 : 1.0), perm[1] * ((signs & 2) ? -1.0 : 1.0),
               perm[2] * ((signs & 1) ? -1.0 : 1.0)};
        v = canonical_sign(v);
        const UnitVector3 u = UnitVector3::normalize(v);
        const bool seen = std::any_of(rays.begin(), rays.end(), [&](const UnitVector3& r) {
          return ray_distance(r.vec(), u.vec()) <= kTol.ray_duplicate;
        });
        if (seen) continue;
        rays.push_back(u);
        labels.push_back("(" + symbol(v[0]) + "," + symbol(v[1]) + "," + symbol(v[2]) + ")");
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  // The axes come out of the first pattern as z, y, x; list them x, y, z.
  std::reverse(rays.begin(), rays.begin() + 3);
  std::reverse(labels.begin(), labels.begin() + 3);
  return RaySet(std::move(rays), std::move(labels));
}

OrthoStructure ortho_structure(const RaySet& rs, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "orthogonality tolerance must be >= 0");
  OrthoStructure os;
  os.n_rays = rs.size();
  const std::size_t n = rs.size();
  std::vector<std::vector<bool>> orth(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(dot(rs[i], rs[j])) <= tol) {
        orth[i][j] = orth[j][i] = true;
        os.pairs.push_back({i, j});
      }
  for (const auto& [i, j] : os.pairs)
    for (std::size_t k = j + 1; k < n; ++k)
      if (orth[i][k] && orth[j][k]) os.triads.push_back({i, j, k});
  return os;
}

// Solver -------------------------------------------------------------------------

namespace {

class ColoringSearch {
 public:
  ColoringSearch(const OrthoStructure& os, std::size_t n_rays)
      : os_(os), value_(n_rays, kUnset), triads_of_(n_rays), pairs_of_(n_rays) {
    for (std::size_t t = 0; t < os.triads.size(); ++t)
      for (std::size_t v : os.triads[t]) at(triads_of_, v).push_back(t);
    for (std::size_t p = 0; p < os.pairs.size(); ++p)
      for (std::size_t v : os.pairs[p]) at(pairs_of_, v).push_back(p);
  }

  ColoringResult run() {
    ColoringResult result;
    if (search()) {
      Coloring c;
      c.values.assign(value_.begin(), value_.end());
      result.coloring = std::move(c);
    }
    result.stats = stats_;
    return result;
  }

 private:
  static constexpr std::int8_t kUnset = -1;

  static std::vector<std::size_t>& at(std::vector<std::vector<std::size_t>>& v, std::size_t i) {
    if (i >= v.size()) throw Error(ErrorCode::kIndexOutOfRange, "structure references a ray beyond n_rays");
    return v[i];
  }

  bool assign(std::size_t v, std::int8_t val) {
    if (value_[v] != kUnset) return value_[v] == val;
    value_[v] = val;
    trail_.push_back(v);
    queue_.push_back(v);
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      const std::size_t v = queue_.back();
      queue_.pop_back();
      for (std::size_t t : triads_of_[v]) {
        int zeros = 0, ones = 0;
        std::size_t free_ray = 0;
        for (std::size_t u : os_.triads[t]) {
          if (value_[u] == 0) ++zeros;
          else if (value_[u] == 1) ++ones;
          else free_ray = u;
        }
        if (zeros >= 2 || ones == 3) return false;
        if (zeros + ones == 3) continue;
        if (zeros == 1) {
          for (std::size_t u : os_.triads[t])
            if (value_[u] == kUnset && !assign(u, 1)) return false;
        } else if (ones == 2) {
          if (!assign(free_ray, 0)) return false;
        }
      }
      if (value_[v] == 0) {
        for (std::size_t p : pairs_of_[v]) {
          const auto& pr = os_.pairs[p];
          const std::size_t other = pr[0] == v ? pr[1] : pr[0];
          if (!assign(other, 1)) return false;
        }
      }
    }
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = kUnset;
      trail_.pop_back();
    }
    queue_.clear();
  }

  bool search() {
    const auto next = std::find(value_.begin(), value_.end(), kUnset);
    if (next == value_.end()) return true;
    const auto v = static_cast<std::size_t>(next - value_.begin());
    for (std::int8_t val : {std::int8_t{0}, std::int8_t{1}}) {
      ++stats_.nodes;
      const std::size_t mark = trail_.size();
      if (assign(v, val) && propagate()) {
        if (search()) return true;
      } else {
        ++stats_.contradictions;
      }
      undo_to(mark);
    }
    return false;
  }

  const OrthoStructure& os_;
  std::vector<std::int8_t> value_;
  std::vector<std::vector<std::size_t>> triads_of_;
  std::vector<std::vector<std::size_t>> pairs_of_;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> queue_;
  SearchStats stats_;
};

}  // namespace

ColoringResult find_legal_coloring(const OrthoStructure& os, std::size_t n_rays) {
  return ColoringSearch(os, n_rays).run();
}

std::vector<Violation> check_coloring(const OrthoStructure& os, const Coloring& c) {
  if (c.values.size() != os.n_rays) {
    throw Error(ErrorCode::kIncompleteColoring, "colouring covers " + std::to_string(c.values.size()) + " of " +
                                                    std::to_string(os.n_rays) + " rays");
  }
  for (std::uint8_t v : c.values)
    if (v > 1) throw Error(ErrorCode::kInvalidArgument, "colour values must be 0 or 1");

  std::vector<Violation> out;
  for (const auto& t : os.triads) {
    const int ones = c.values[t[0]] + c.values[t[1]] + c.values[t[2]];
    if (ones != 2) {
      std::string combo;
      for (std::size_t v : t) combo += static_cast<char>('0' + c.values[v]);
      out.push_back({Violation::Kind::kTriad, t, combo});
    }
  }
  for (const auto& p : os.pairs) {
    if (c.values[p[0]] == 0 && c.values[p[1]] == 0) out.push_back({Violation::Kind::kPair, {p[0], p[1], 0}, "00"});
  }
  return out;
}

// Ray files -----------------------------------------------------------------------

namespace {

bool parse_real(const std::string& tok, double& out) {
  const char* begin = tok.data();
  const char* end = tok.data() + tok.size();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

}  // namespace

RaySet parse_ray_file(std::istream& in) {
  std::vector<UnitVector3> rays;
  std::vector<std::string> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (tokens.size() != 3) {
      throw Error(ErrorCode::kParse, where + "expected 3 numbers, found " + std::to_string(tokens.size()) + " fields");
    }
    Vec3 v{};
    for (std::size_t k = 0; k < 3; ++k)
      if (!parse_real(tokens[k], v[k])) throw Error(ErrorCode::kParse, where + "'" + tokens[k] + "' is not a number");
    if (norm(v) == 0.0) throw Error(ErrorCode::kParse, where + "zero vector is not a ray");
    const UnitVector3 u = UnitVector3::normalize(v);
    for (std::size_t k = 0; k < rays.size(); ++k) {
      if (std::abs(std::abs(dot(rays[k].vec(), u.vec())) - 1.0) < 1e-12)
        throw Error(ErrorCode::kParse, where + "duplicates the ray on " + labels[k]);
    }
    rays.push_back(u);
    labels.push_back("line" + std::to_string(line_no));
  }
  try {
    return RaySet(std::move(rays), std::move(labels));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

RaySet load_ray_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open ray file '" + path.string() + "'");
  return parse_ray_file(in);
}

RaySet remove_ray(const RaySet& rs, std::size_t i) {
  if (i >= rs.size()) throw Error(ErrorCode::kIndexOutOfRange, "ray index out of range");
  std::vector<UnitVector3> rays;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    if (k == i) continue;
    rays.push_back(rs[k]);
    labels.push_back(rs.label(k));
  }
  return RaySet(std::move(rays), std::move(labels));
}

RaySet rotated(const RaySet& rs, const std::array<Vec3, 3>& rotation) {
  std::vector<UnitVector3> rays;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const Vec3& v = rs[k].vec();
    rays.push_back(UnitVector3::normalize({dot(rotation[0], v), dot(rotation[1], v), dot(rotation[2], v)}));
    labels.push_back(rs.label(k));
  }
  return RaySet(std::move(rays), std::move(labels));
}

}  // namespace ksa
