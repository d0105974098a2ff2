#include "mactab/char_lattice.hpp"

#include <algorithm>
#include <map>

namespace mactab {

std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> out;
  Partition cur;
  // descending-first recursive enumeration
  auto rec = [&](auto&& self, int rest, int maxpart) -> void {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int k = std::min(rest, maxpart); k >= 1; --k) {
      cur.push_back(k);
      self(self, rest - k, k);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

int partition_weight(const Partition& p) {
  int s = 0;
  for (int x : p) s += x;
  return s;
}

int64_t partition_n_stat(const Partition& p) {
  int64_t s = 0;
  for (size_t i = 0; i < p.size(); ++i) s += (int64_t)i * p[i];
  return s;
}

std::vector<int> partition_hooks(const Partition& p) {
  std::vector<int> hooks;
  for (size_t i = 0; i < p.size(); ++i) {
    for (int j = 0; j < p[i]; ++j) {
      int arm = p[i] - j - 1;
      int leg = 0;
      for (size_t r = i + 1; r < p.size(); ++r)
        if (p[r] > j) ++leg;
      hooks.push_back(arm + leg + 1);
    }
  }
  return hooks;
}

bool ParamFunction::operator<(const ParamFunction& o) const {
  return parts < o.parts;
}

LevelChar reduce_level(int64_t q, LevelChar t) {
  int64_t on = ipow(q, t.level) - 1;
  t.exponent = mod_pos(t.exponent, on);
  for (int m = 1; m < t.level; ++m) {
    if (t.level % m != 0) continue;
    int64_t s = on / (ipow(q, m) - 1);
    if (t.exponent % s == 0) return LevelChar{m, t.exponent / s};
  }
  return t;
}

bool is_regular(int64_t q, const LevelChar& t) {
  int64_t on = ipow(q, t.level) - 1;
  int64_t e = mod_pos(t.exponent, on);
  int64_t cur = e;
  for (int i = 1; i < t.level; ++i) {
    cur = cur * (q % on) % on;
    if (cur == e) return false;
  }
  return true;
}

GaloisOrbit orbit_of(int64_t q, const LevelChar& t0) {
  LevelChar t = reduce_level(q, t0);
  int64_t on = ipow(q, t.level) - 1;
  GaloisOrbit o;
  o.degree = t.level;
  int64_t e = t.exponent;
  do {
    o.orbit.push_back(e);
    e = e * (q % on) % on;
  } while (e != t.exponent);
  std::sort(o.orbit.begin(), o.orbit.end());
  o.rep_exponent = o.orbit.front();
  require((int)o.orbit.size() == t.level, Err::Internal,
          "orbit size disagrees with minimal level");
  return o;
}

Cyclotomic eval_orbit_rep(const FieldTower& tw, const GaloisOrbit& o, FieldElem x) {
  require(x.level % o.degree == 0, Err::LevelMismatch, "orbit degree does not divide level");
  if (tw.is_zero(x)) fail(Err::ZeroElement, "character of zero");
  // theta at minimal level d evaluated on x in k_m, d | m: theta(N_{m,d} x).
  FieldElem y = tw.norm(x, o.degree);
  int64_t on = tw.unit_order(o.degree);
  return Cyclotomic::root(on, mod_pos(o.rep_exponent * tw.dlog(y), on));
}

std::vector<GaloisOrbit> orbits_of_degree(const FieldTower& tw, int d) {
  require(tw.top_level() % d == 0, Err::LevelMismatch, "degree not in tower");
  int64_t q = tw.q();
  int64_t on = ipow(q, d) - 1;
  std::vector<char> seen(on, 0);
  std::vector<GaloisOrbit> out;
  for (int64_t e = 0; e < on; ++e) {
    if (seen[e]) continue;
    // mark the orbit
    std::vector<int64_t> orb;
    int64_t cur = e;
    do {
      seen[cur] = 1;
      orb.push_back(cur);
      cur = cur * (q % on) % on;
    } while (cur != e);
    if ((int)orb.size() != d) continue;  // inflated from a proper sublevel
    // minimal level must be d: orbit of size d means not fixed by any proper power
    GaloisOrbit o;
    o.degree = d;
    std::sort(orb.begin(), orb.end());
    o.orbit = std::move(orb);
    o.rep_exponent = o.orbit.front();
    out.push_back(std::move(o));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ParamFunction make_param(std::vector<std::pair<GaloisOrbit, Partition>> parts) {
  ParamFunction p;
  std::sort(parts.begin(), parts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& pr : parts) {
    require(!pr.second.empty(), Err::Internal, "zero partition in parameter");
    p.total += partition_weight(pr.second) * pr.first.degree;
  }
  p.parts = std::move(parts);
  return p;
}

std::vector<ParamFunction> enumerate_params(const FieldTower& tw, int n, int64_t cap) {
  require(n <= tw.top_level(), Err::LimitExceeded, "n exceeds tower top level");
  std::vector<GaloisOrbit> orbits;
  for (int d = 1; d <= n; ++d) {
    if (tw.top_level() % d != 0) continue;
    auto od = orbits_of_degree(tw, d);
    orbits.insert(orbits.end(), od.begin(), od.end());
  }
  std::sort(orbits.begin(), orbits.end());

  std::vector<std::vector<Partition>> parts_by_weight(n + 1);
  for (int w = 1; w <= n; ++w) parts_by_weight[w] = partitions_of(w);

  std::vector<ParamFunction> out;
  std::vector<std::pair<GaloisOrbit, Partition>> cur;
  auto rec = [&](auto&& self, size_t idx, int rest) -> void {
    if (rest == 0) {
      out.push_back(make_param(cur));
      require((int64_t)out.size() <= cap, Err::LimitExceeded, "parameter enumeration cap");
      return;
    }
    if (idx == orbits.size()) return;
    const GaloisOrbit& o = orbits[idx];
    // skip this orbit entirely
    self(self, idx + 1, rest);
    for (int w = 1; w * o.degree <= rest; ++w) {
      for (const Partition& lam : parts_by_weight[w]) {
        cur.emplace_back(o, lam);
        self(self, idx + 1, rest - w * o.degree);
        cur.pop_back();
      }
    }
  };
  rec(rec, 0, n);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<GaloisOrbit, int>> orbit_product_decompose(const FieldTower& tw,
                                                                 const GaloisOrbit& a,
                                                                 const GaloisOrbit& b) {
  int64_t q = tw.q();
  int l = (int)lcm64(a.degree, b.degree);
  require(tw.top_level() % l == 0, Err::LevelMismatch,
          "product level not contained in tower");
  int64_t onl = ipow(q, l) - 1;
  int64_t sa = onl / (ipow(q, a.degree) - 1);
  int64_t sb = onl / (ipow(q, b.degree) - 1);
  std::map<std::pair<int, int64_t>, std::pair<GaloisOrbit, int>> grouped;
  for (int64_t ea : a.orbit) {
    for (int64_t eb : b.orbit) {
      int64_t e = mod_pos(ea * sa + eb * sb, onl);
      GaloisOrbit o = orbit_of(q, LevelChar{l, e});
      auto key = std::make_pair(o.degree, o.rep_exponent);
      auto it = grouped.find(key);
      if (it == grouped.end())
        grouped.emplace(key, std::make_pair(o, 1));
      else
        it->second.second++;
    }
  }
  std::vector<std::pair<GaloisOrbit, int>> out;
  int64_t weighted = 0;
  for (auto& kv : grouped) {
    // every member of a Galois orbit occurs equally often in the product multiset
    require(kv.second.second % kv.second.first.degree == 0, Err::Internal,
            "orbit multiplicity not uniform");
    int mult = kv.second.second / kv.second.first.degree;
    weighted += (int64_t)mult * kv.second.first.degree;
    out.emplace_back(kv.second.first, mult);
  }
  require(weighted == (int64_t)a.degree * b.degree, Err::Internal,
          "product decomposition loses degree");
  return out;
}

}  // namespace mactab
