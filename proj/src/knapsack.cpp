#include "pdark/knapsack.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pdark {

// ---------------------------------------------------------------------------
// MCKP

void MckpInstance::validate() const {
  if (classes.empty()) throw input_error("mckp: no classes");
  for (const auto& cls : classes) {
    if (cls.empty()) throw input_error("mckp: empty class");
    for (const MckpItem& it : cls)
      if (it.cost < 0 || it.value < 0) throw input_error("mckp: negative cost or value");
  }
}

MckpInstance MckpInstance::normalized() const {
  MckpInstance out = *this;
  for (auto& cls : out.classes) {
    std::sort(cls.begin(), cls.end(), [](const MckpItem& a, const MckpItem& b) {
      return a.cost != b.cost ? a.cost < b.cost : a.value > b.value;
    });
    std::vector<MckpItem> kept;
    for (const MckpItem& it : cls) {
      if (!kept.empty() && kept.back().cost == it.cost) continue;  // same cost, lower value
      kept.push_back(it);
    }
    // Same value: keep the cheaper item.
    std::vector<MckpItem> kept2;
    std::set<long long> values;
    for (const MckpItem& it : kept)
      if (values.insert(it.value).second) kept2.push_back(it);
    cls = std::move(kept2);
  }
  return out;
}

int MckpInstance::var_c() const {
  std::set<long long> s;
  for (const auto& cls : classes)
    for (const MckpItem& it : cls) s.insert(it.cost);
  return static_cast<int>(s.size());
}

int MckpInstance::var_d() const {
  std::set<long long> s;
  for (const auto& cls : classes)
    for (const MckpItem& it : cls) s.insert(it.value);
  return static_cast<int>(s.size());
}

namespace {
constexpr long long kNegInf = -(1LL << 62);
}

MckpResult mckp_solve_budget_dp(const MckpInstance& inst) {
  inst.validate();
  const long long b_max = inst.budget;
  if (b_max < 0) return {};
  check_budget(static_cast<std::uint64_t>(b_max + 1) * inst.classes.size(), "mckp budget dp");
  int m = static_cast<int>(inst.classes.size());
  std::vector<long long> f(b_max + 1, 0);
  std::vector<std::vector<int>> choice(m, std::vector<int>(b_max + 1, -1));
  for (int i = 0; i < m; ++i) {
    std::vector<long long> g(b_max + 1, kNegInf);
    for (long long b = 0; b <= b_max; ++b) {
      for (int j = 0; j < static_cast<int>(inst.classes[i].size()); ++j) {
        const MckpItem& it = inst.classes[i][j];
        if (it.cost > b || f[b - it.cost] == kNegInf) continue;
        long long cand = f[b - it.cost] + it.value;
        if (cand > g[b]) {
          g[b] = cand;
          choice[i][b] = j;
        }
      }
    }
    f = std::move(g);
  }
  MckpResult res;
  if (f[b_max] == kNegInf) return res;
  res.best_value = f[b_max];
  res.yes = res.best_value >= inst.target;
  MckpSelection sel(m);
  long long b = b_max;
  for (int i = m - 1; i >= 0; --i) {
    sel[i] = choice[i][b];
    b -= inst.classes[i][sel[i]].cost;
  }
  res.selection = std::move(sel);
  return res;
}

namespace {

std::vector<long long> distinct_sorted(const MckpInstance& inst, MckpAxis axis) {
  std::set<long long> s;
  for (const auto& cls : inst.classes)
    for (const MckpItem& it : cls)
      s.insert(axis == MckpAxis::Costs ? it.cost : it.value);
  return {s.begin(), s.end()};
}

}  // namespace

MckpResult mckp_solve_xp(const MckpInstance& inst, MckpAxis axis) {
  inst.validate();
  int m = static_cast<int>(inst.classes.size());
  std::vector<long long> keys = distinct_sorted(inst, axis);
  int dims = static_cast<int>(keys.size()) - 1;  // the largest key is implied
  // Tuple -> (objective, chosen item, previous tuple); objective is the max
  // value (Costs axis) or min cost (Values axis) of a selection matching the
  // multiplicity tuple over the non-maximal keys.
  struct Cell {
    long long obj;
    int item;
    std::vector<int> prev;
  };
  using Layer = std::map<std::vector<int>, Cell>;
  const bool maximize = axis == MckpAxis::Costs;
  Layer layer;
  layer[std::vector<int>(dims, 0)] = {0, -1, {}};
  std::vector<Layer> layers;
  layers.push_back(layer);
  for (int i = 0; i < m; ++i) {
    Layer next;
    check_budget(layer.size() * inst.classes[i].size(), "mckp xp dp");
    for (const auto& [tuple, cell] : layer) {
      for (int j = 0; j < static_cast<int>(inst.classes[i].size()); ++j) {
        const MckpItem& it = inst.classes[i][j];
        long long key = axis == MckpAxis::Costs ? it.cost : it.value;
        int pos = static_cast<int>(std::lower_bound(keys.begin(), keys.end(), key) - keys.begin());
        std::vector<int> t = tuple;
        if (pos < dims) ++t[pos];
        long long obj = cell.obj + (axis == MckpAxis::Costs ? it.value : it.cost);
        auto found = next.find(t);
        if (found == next.end() || (maximize ? obj > found->second.obj : obj < found->second.obj))
          next[t] = {obj, j, tuple};
      }
    }
    layer = std::move(next);
    layers.push_back(layer);
  }
  MckpResult res;
  const std::vector<int>* best_tuple = nullptr;
  long long best_value = kNegInf;
  for (const auto& [tuple, cell] : layer) {
    int implied = m;
    for (int t : tuple) implied -= t;
    long long cost, value;
    if (axis == MckpAxis::Costs) {
      cost = static_cast<long long>(implied) * keys[dims];
      for (int d = 0; d < dims; ++d) cost += static_cast<long long>(tuple[d]) * keys[d];
      value = cell.obj;
    } else {
      value = static_cast<long long>(implied) * keys[dims];
      for (int d = 0; d < dims; ++d) value += static_cast<long long>(tuple[d]) * keys[d];
      cost = cell.obj;
    }
    if (cost <= inst.budget && value > best_value) {
      best_value = value;
      best_tuple = &tuple;
    }
  }
  if (!best_tuple) return res;
  res.best_value = best_value;
  res.yes = best_value >= inst.target;
  MckpSelection sel(m);
  std::vector<int> t = *best_tuple;
  for (int i = m; i >= 1; --i) {
    const Cell& cell = layers[i].at(t);
    sel[i - 1] = cell.item;
    t = cell.prev;
  }
  res.selection = std::move(sel);
  return res;
}

MckpResult mckp_solve_xp_m(const MckpInstance& inst) {
  inst.validate();
  std::uint64_t states = 1;
  for (const auto& cls : inst.classes) {
    states *= cls.size();
    check_budget(states, "mckp nested loops");
  }
  int m = static_cast<int>(inst.classes.size());
  MckpResult res;
  MckpSelection cur(m, 0), best;
  long long best_value = kNegInf;
  while (true) {
    long long cost = 0, value = 0;
    for (int i = 0; i < m; ++i) {
      cost += inst.classes[i][cur[i]].cost;
      value += inst.classes[i][cur[i]].value;
    }
    if (cost <= inst.budget && value > best_value) {
      best_value = value;
      best = cur;
    }
    int i = m - 1;
    while (i >= 0 && cur[i] + 1 == static_cast<int>(inst.classes[i].size())) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  if (best_value == kNegInf) return res;
  res.best_value = best_value;
  res.yes = best_value >= inst.target;
  res.selection = std::move(best);
  return res;
}

// ---------------------------------------------------------------------------
// Penalty Sum

void PenaltySumInstance::validate() const {
  if (a.size() != b.size()) throw input_error("penalty sum: |a| != |b|");
  for (const Rational& x : a)
    if (x < Rational(0)) throw input_error("penalty sum: a_i < 0");
  for (const Rational& x : b)
    if (x <= Rational(0) || x >= Rational(1))
      throw input_error("penalty sum: b_i outside (0,1)");
  if (k < 0) throw input_error("penalty sum: k < 0");
}

Rational PenaltySumInstance::objective(const std::vector<int>& subset) const {
  Rational sum(0), prod(1);
  for (int i : subset) {
    sum += a[i];
    prod *= b[i];
  }
  return sum - Rational(q) * prod;
}

PenaltySumResult penalty_sum_brute_force(const PenaltySumInstance& inst) {
  inst.validate();
  int m = static_cast<int>(inst.a.size());
  PenaltySumResult res;
  if (inst.k > m) return res;  // no, not an error
  check_budget(binom(m, inst.k), "penalty sum enumeration");
  for_each_subset_of_size(m, inst.k, [&](const std::vector<int>& subset) {
    Rational obj = inst.objective(subset);
    if (!res.best || obj > *res.best) {
      res.best = obj;
      res.subset = subset;
    }
  });
  if (inst.k == 0) {
    res.best = Rational(0) - Rational(inst.q);
    res.subset = std::vector<int>{};
  }
  res.yes = res.best && *res.best >= inst.target;
  if (!res.yes) {
    res.subset.reset();
  }
  return res;
}

PenaltySumResult penalty_sum_solve(const PenaltySumInstance& inst) {
  inst.validate();
  int m = static_cast<int>(inst.a.size());
  PenaltySumResult res;
  if (inst.k > m) return res;
  if (inst.k == 0) {
    Rational obj = Rational(0) - Rational(inst.q);
    res.yes = obj >= inst.target;
    if (res.yes) {
      res.subset = std::vector<int>{};
      res.best = obj;
    }
    return res;
  }
  // Scale a_i and D to integers by the least common denominator.
  BigInt denom = 1;
  for (const Rational& x : inst.a) denom = lcm(denom, x.den());
  denom = lcm(denom, inst.target.den());
  std::vector<BigInt> a_scaled;
  for (const Rational& x : inst.a) a_scaled.push_back(x.num() * (denom / x.den()));
  BigInt q_scaled = inst.q * denom;
  BigInt d_scaled = inst.target.num() * (denom / inst.target.den());
  // Any k-set whose scaled sum reaches q' + d' is a yes outright (prod b < 1).
  BigInt cap_big = q_scaled + (d_scaled > 0 ? d_scaled : BigInt(0));
  if (cap_big > BigInt(enum_budget()))
    throw capacity_error("penalty sum dp: scaled range " + cap_big.str() +
                         " exceeds budget");
  long long cap = cap_big.convert_to<long long>();
  check_budget(static_cast<std::uint64_t>(cap + 1) * (inst.k + 1) * m, "penalty sum dp");

  struct Cell {
    bool reachable = false;
    Rational prod;     // minimum product of b over (c,A)-feasible prefix sets
    int item = -1;     // last taken item, for witness reconstruction
    int prev_a = -1;
  };
  // dp[c][A]; overflow[c] = true if some c-subset exceeds the cap.
  std::vector<std::vector<Cell>> dp(inst.k + 1, std::vector<Cell>(cap + 1));
  std::vector<char> overflow(inst.k + 1, 0);
  std::vector<int> overflow_item(inst.k + 1, -1);
  dp[0][0].reachable = true;
  dp[0][0].prod = Rational(1);
  for (int i = 0; i < m; ++i) {
    BigInt ai = a_scaled[i];
    for (int c = inst.k - 1; c >= 0; --c) {
      if (overflow[c] && !overflow[c + 1]) {
        overflow[c + 1] = 1;
        overflow_item[c + 1] = i;
      }
      for (long long A = cap; A >= 0; --A) {
        if (!dp[c][A].reachable) continue;
        BigInt na = BigInt(A) + ai;
        if (na > cap) {
          if (!overflow[c + 1]) {
            overflow[c + 1] = 1;
            overflow_item[c + 1] = i;
          }
          continue;
        }
        long long idx = na.convert_to<long long>();
        Rational cand = dp[c][A].prod * inst.b[i];
        Cell& cell = dp[c + 1][idx];
        if (!cell.reachable || cand < cell.prod) {
          cell.reachable = true;
          cell.prod = cand;
          cell.item = i;
          cell.prev_a = static_cast<int>(A);
        }
      }
    }
  }
  if (overflow[inst.k]) {
    // Some k-subset has scaled sum > q' + max(d',0), which certifies yes since
    // prod b < 1. The top-k items by a_i dominate that sum, so they certify.
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return inst.a[x] > inst.a[y]; });
    std::vector<int> subset(order.begin(), order.begin() + inst.k);
    std::sort(subset.begin(), subset.end());
    Rational obj = inst.objective(subset);
    if (obj < inst.target)
      throw validation_error("penalty sum dp: overflow certificate failed");
    res.yes = true;
    res.subset = subset;
    res.best = obj;
    return res;
  }
  long long best_a = -1;
  for (long long A = 0; A <= cap; ++A) {
    if (!dp[inst.k][A].reachable) continue;
    Rational obj = Rational(A) - Rational(q_scaled) * dp[inst.k][A].prod;
    if (obj >= Rational(d_scaled)) {
      best_a = A;
      break;
    }
  }
  if (best_a < 0) return res;
  std::vector<int> subset;
  long long A = best_a;
  for (int c = inst.k; c >= 1; --c) {
    subset.push_back(dp[c][A].item);
    A = dp[c][A].prev_a;
  }
  std::sort(subset.begin(), subset.end());
  Rational obj = inst.objective(subset);  // recompute exactly before returning
  res.yes = obj >= inst.target;
  res.subset = subset;
  res.best = obj;
  return res;
}

// ---------------------------------------------------------------------------
// Logarithm enclosures

namespace {

// atanh(y) = sum_{j>=0} y^(2j+1) / (2j+1) for 0 <= y < 1, enclosed from below
// by partial sums with the geometric tail bound y^(2n+1)/((2n+1)(1-y^2)).
RationalInterval atanh_enclosure(const Rational& y, const Rational& width) {
  Rational sum(0);
  Rational ypow = y;             // y^(2j+1)
  Rational ysq = y * y;
  Rational one_minus = Rational(1) - ysq;
  unsigned long long j = 0;
  while (true) {
    Rational tail = ypow / (Rational(2 * j + 1) * one_minus);
    if (tail <= width) return {sum, sum + tail};
    sum += ypow / Rational(2 * j + 1);
    ypow *= ysq;
    ++j;
    if (j > 100000) throw capacity_error("atanh series did not converge");
  }
}

RationalInterval ln2_enclosure(const Rational& width) {
  RationalInterval i = atanh_enclosure(Rational(1, 3), width / Rational(2));
  return {i.lo * Rational(2), i.hi * Rational(2)};
}

unsigned msb_index(const BigInt& v) {
  return static_cast<unsigned>(boost::multiprecision::msb(v));
}

}  // namespace

RationalInterval ln_enclosure(const BigInt& v, unsigned precision_bits) {
  if (v < 1) throw input_error("ln of nonpositive integer");
  if (v == 1) return {Rational(0), Rational(0)};
  Rational width = Rational(BigInt(1), boost::multiprecision::pow(BigInt(2), precision_bits));
  unsigned t = msb_index(v);  // 2^t <= v
  Rational q(v, boost::multiprecision::pow(BigInt(2), t));  // q in [1,2)
  Rational half = width / Rational(2);
  RationalInterval lq = {Rational(0), Rational(0)};
  if (q != Rational(1)) {
    Rational y = (q - Rational(1)) / (q + Rational(1));  // in (0,1/3]
    RationalInterval at = atanh_enclosure(y, half / Rational(2));
    lq = {at.lo * Rational(2), at.hi * Rational(2)};
  }
  if (t == 0) return lq;
  RationalInterval l2 = ln2_enclosure(half / Rational(t));
  return {lq.lo + l2.lo * Rational(t), lq.hi + l2.hi * Rational(t)};
}

namespace {

// floor of base*2^h - 2^h*ln(v), narrowing until decided.
BigInt round_h_minus_ln(const Rational& base, const BigInt& v, unsigned h, bool up) {
  BigInt two_h = boost::multiprecision::pow(BigInt(2), h);
  if (v == 1) {
    Rational y = base * Rational(two_h);
    return up ? y.ceil() : y.floor();
  }
  for (unsigned prec = h + 16;; prec += 48) {
    RationalInterval ln = ln_enclosure(v, prec);
    Rational lo = (base - ln.hi) * Rational(two_h);
    Rational hi = (base - ln.lo) * Rational(two_h);
    BigInt flo = up ? lo.ceil() : lo.floor();
    BigInt fhi = up ? hi.ceil() : hi.floor();
    if (flo == fhi) return flo;
    if (prec > h + 4096) throw capacity_error("ln rounding did not resolve");
  }
}

}  // namespace

BigInt floor_h_minus_ln(const Rational& base, const BigInt& v, unsigned h) {
  return round_h_minus_ln(base, v, h, false);
}

BigInt ceil_h_minus_ln(const Rational& base, const BigInt& v, unsigned h) {
  return round_h_minus_ln(base, v, h, true);
}

BigInt ceil_ln(const BigInt& v) {
  if (v < 1) throw input_error("ln of nonpositive integer");
  if (v == 1) return 0;
  // ceil(ln v) = -floor(0 - ln v) with h = 0.
  return -floor_h_minus_ln(Rational(0), v, 0);
}

// ---------------------------------------------------------------------------
// Subset Product

void SubsetProductInstance::validate() const {
  for (const BigInt& v : values)
    if (v < 1) throw input_error("subset product: v_i < 1");
  if (k < 0 || k > static_cast<int>(values.size()))
    throw input_error("subset product: k out of range");
  if (m < 1) throw input_error("subset product: M < 1");
}

SubsetProductResult subset_product_brute_force(const SubsetProductInstance& inst) {
  inst.validate();
  int n = static_cast<int>(inst.values.size());
  check_budget(binom(n, inst.k), "subset product enumeration");
  SubsetProductResult res;
  for_each_subset_of_size(n, inst.k, [&](const std::vector<int>& subset) {
    if (res.yes) return;
    BigInt prod = 1;
    for (int i : subset) prod *= inst.values[i];
    if (prod == inst.m) {
      res.yes = true;
      res.subset = subset;
    }
  });
  return res;
}

PenaltySumInstance reduce_subset_product_to_penalty_sum(const SubsetProductInstance& inst) {
  inst.validate();
  SubsetProductInstance padded = inst;
  // Pad until k < M and every v_i >= 2 (so b_i = 1/v_i lies strictly in (0,1)):
  // multiplying each v_i by 2 and M by 2^k preserves the answer since |S| = k.
  auto needs_padding = [&] {
    if (padded.m < 2 || BigInt(padded.k) >= padded.m) return true;
    for (const BigInt& v : padded.values)
      if (v < 2) return true;
    return false;
  };
  int guard = 0;
  while (needs_padding()) {
    if (padded.k == 0 && padded.m < 2)
      throw input_error("subset product reduction requires M >= 2 when k = 0");
    for (BigInt& v : padded.values) v *= 2;
    padded.m *= boost::multiprecision::pow(BigInt(2), padded.k);
    if (++guard > 64) throw capacity_error("subset product padding did not converge");
  }

  const BigInt& q = padded.m;
  unsigned h = 5 * (q <= 1 ? 0 : msb_index(q - 1) + 1);  // 5 ceil(log2 Q)
  BigInt two_h = boost::multiprecision::pow(BigInt(2), h);
  BigInt max_v = 1;
  for (const BigInt& v : padded.values) max_v = std::max(max_v, v);
  BigInt a_base = ceil_ln(max_v) + 1;  // A

  PenaltySumInstance out;
  out.k = padded.k;
  out.q = q;
  for (const BigInt& v : padded.values) {
    BigInt r = ceil_h_minus_ln(Rational(a_base), v, h);  // ceil_H(A - ln v)
    out.a.push_back(Rational(r, two_h));
    out.b.push_back(Rational(BigInt(1), v));
  }
  // D = floor_H(kA - ln Q - 1)
  BigInt r = floor_h_minus_ln(Rational(BigInt(padded.k) * a_base - 1), q, h);
  out.target = Rational(r, two_h);
  return out;
}

}  // namespace pdark
