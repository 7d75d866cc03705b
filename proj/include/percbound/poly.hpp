#pragma once

// Sparse polynomials in the product basis p^a (1-p)^b (times r^c (1-r)^d for
// two-parameter models) with positive integer coefficients. Every transition
// probability of the automaton is a sum of products of p and 1-p factors, so
// this basis never needs a negative coefficient and evaluation never cancels.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "percbound/error.hpp"

namespace percbound {

/// Exponents (a1, b1, a2, b2) of p1^a1 q1^b1 p2^a2 q2^b2 with q = 1 - p.
struct Exponents {
  std::uint8_t a1 = 0, b1 = 0, a2 = 0, b2 = 0;

  std::uint32_t key() const {
    return (std::uint32_t{a1} << 24) | (std::uint32_t{b1} << 16) | (std::uint32_t{a2} << 8) | std::uint32_t{b2};
  }
  static Exponents from_key(std::uint32_t k) {
    return {static_cast<std::uint8_t>(k >> 24), static_cast<std::uint8_t>(k >> 16),
            static_cast<std::uint8_t>(k >> 8), static_cast<std::uint8_t>(k)};
  }
};

struct Term {
  std::uint32_t key;
  std::uint64_t coeff;

  friend bool operator==(const Term&, const Term&) = default;
};

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw CoefficientOverflow("polynomial coefficient overflow in addition");
  return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw CoefficientOverflow("polynomial coefficient overflow in product");
  return r;
}

inline std::uint32_t add_keys(std::uint32_t x, std::uint32_t y) {
  std::uint32_t out = 0;
  for (int shift = 0; shift < 32; shift += 8) {
    const std::uint32_t s = ((x >> shift) & 0xffu) + ((y >> shift) & 0xffu);
    if (s > 0xffu) throw CoefficientOverflow("polynomial exponent above 255");
    out |= s << shift;
  }
  return out;
}

}  // namespace detail

/// Canonical form: terms sorted by key, no duplicate keys, no zero coefficient.
class Poly {
 public:
  Poly() = default;

  static Poly zero() { return {}; }
  static Poly constant(std::uint64_t c) { return monomial({}, c); }
  static Poly one() { return constant(1); }
  static Poly monomial(Exponents e, std::uint64_t coeff = 1) {
    Poly r;
    if (coeff != 0) r.terms_.push_back({e.key(), coeff});
    return r;
  }
  /// p_param (param is 1 or 2).
  static Poly p(int param = 1) {
    return monomial(param == 1 ? Exponents{1, 0, 0, 0} : Exponents{0, 0, 1, 0});
  }
  /// 1 - p_param.
  static Poly q(int param = 1) {
    return monomial(param == 1 ? Exponents{0, 1, 0, 0} : Exponents{0, 0, 0, 1});
  }
  /// Builds from arbitrary (possibly unsorted, duplicated) terms.
  static Poly from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.key < b.key; });
    Poly r;
    for (const Term& t : terms) {
      if (t.coeff == 0) continue;
      if (!r.terms_.empty() && r.terms_.back().key == t.key)
        r.terms_.back().coeff = detail::checked_add(r.terms_.back().coeff, t.coeff);
      else
        r.terms_.push_back(t);
    }
    return r;
  }

  std::span<const Term> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Highest exponent sum a+b seen for the given parameter.
  int degree(int param = 1) const {
    int d = 0;
    for (const Term& t : terms_) {
      const Exponents e = Exponents::from_key(t.key);
      d = std::max(d, param == 1 ? e.a1 + e.b1 : e.a2 + e.b2);
    }
    return d;
  }

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const Term& t : terms_) {
      h = (h ^ t.key) * 1099511628211ull;
      h = (h ^ t.coeff) * 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }

  friend bool operator==(const Poly&, const Poly&) = default;

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    while (ia != a.terms_.end() && ib != b.terms_.end()) {
      if (ia->key < ib->key) {
        r.terms_.push_back(*ia++);
      } else if (ib->key < ia->key) {
        r.terms_.push_back(*ib++);
      } else {
        r.terms_.push_back({ia->key, detail::checked_add(ia->coeff, ib->coeff)});
        ++ia;
        ++ib;
      }
    }
    r.terms_.insert(r.terms_.end(), ia, a.terms_.end());
    r.terms_.insert(r.terms_.end(), ib, b.terms_.end());
    return r;
  }

  Poly& operator+=(const Poly& b) { return *this = *this + b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Term> raw;
    raw.reserve(a.terms_.size() * b.terms_.size());
    for (const Term& x : a.terms_)
      for (const Term& y : b.terms_)
        raw.push_back({detail::add_keys(x.key, y.key), detail::checked_mul(x.coeff, y.coeff)});
    return from_terms(std::move(raw));
  }

 private:
  std::vector<Term> terms_;
};

inline Poly add(const Poly& a, const Poly& b) { return a + b; }
inline Poly mul(const Poly& a, const Poly& b) { return a * b; }

/// Powers of p and 1-p for each parameter, shared across many evaluations.
class PowerTable {
 public:
  explicit PowerTable(std::span<const double> params, int max_degree = 255) {
    for (std::size_t v = 0; v < 2; ++v) {
      const double p = v < params.size() ? params[v] : 0.0;
      auto& pw = tables_[2 * v];
      auto& qw = tables_[2 * v + 1];
      pw.assign(static_cast<std::size_t>(max_degree) + 1, 1.0);
      qw.assign(static_cast<std::size_t>(max_degree) + 1, 1.0);
      for (std::size_t e = 1; e < pw.size(); ++e) {
        pw[e] = pw[e - 1] * p;
        qw[e] = qw[e - 1] * (1.0 - p);
      }
    }
  }

  double operator()(const Poly& poly) const {
    double sum = 0.0;
    for (const Term& t : poly.terms()) {
      const Exponents e = Exponents::from_key(t.key);
      sum += static_cast<double>(t.coeff) * tables_[0][e.a1] * tables_[1][e.b1] * tables_[2][e.a2] * tables_[3][e.b2];
    }
    return sum;
  }

 private:
  std::array<std::vector<double>, 4> tables_;
};

/// Value at params (p1[, p2]) in [0, 1].
inline double eval(const Poly& poly, std::span<const double> params) {
  int deg = 0;
  for (const Term& t : poly.terms()) {
    const Exponents e = Exponents::from_key(t.key);
    deg = std::max({deg, int{e.a1}, int{e.b1}, int{e.a2}, int{e.b2}});
  }
  return PowerTable(params, deg)(poly);
}

inline double eval(const Poly& poly, double p) { return eval(poly, std::span<const double>(&p, 1)); }

/// Text form, e.g. "2·p^1·q^1 + 1·p^2" (q = 1-p; second parameter r, s = 1-r).
inline std::string to_string(const Poly& poly) {
  if (poly.is_zero()) return "0";
  std::string out;
  for (const Term& t : poly.terms()) {
    if (!out.empty()) out += " + ";
    out += std::to_string(t.coeff);
    const Exponents e = Exponents::from_key(t.key);
    const std::array<std::pair<const char*, int>, 4> factors{
        {{"p", e.a1}, {"q", e.b1}, {"r", e.a2}, {"s", e.b2}}};
    for (const auto& [name, power] : factors)
      if (power > 0) out += std::string("·") + name + "^" + std::to_string(power);
  }
  return out;
}

/// Interning table: structurally equal polynomials share one id; ids are
/// handed out in first-seen order.
class PolyPool {
 public:
  std::uint32_t intern(const Poly& poly) {
    const std::size_t h = poly.hash();
    auto [lo, hi] = index_.equal_range(h);
    for (auto it = lo; it != hi; ++it)
      if (entries_[it->second] == poly) return it->second;
    const auto id = static_cast<std::uint32_t>(entries_.size());
    entries_.push_back(poly);
    index_.emplace(h, id);
    return id;
  }

  std::uint32_t intern(Poly&& poly) {
    const std::size_t h = poly.hash();
    auto [lo, hi] = index_.equal_range(h);
    for (auto it = lo; it != hi; ++it)
      if (entries_[it->second] == poly) return it->second;
    const auto id = static_cast<std::uint32_t>(entries_.size());
    entries_.push_back(std::move(poly));
    index_.emplace(h, id);
    return id;
  }

  const Poly& operator[](std::uint32_t id) const { return entries_.at(id); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Poly>& entries() const { return entries_; }

  std::size_t approx_bytes() const {
    std::size_t bytes = entries_.size() * (sizeof(Poly) + 48);
    for (const Poly& p : entries_) bytes += p.term_count() * sizeof(Term);
    return bytes;
  }

  void clear() {
    entries_.clear();
    index_.clear();
  }

  /// Values of every entry at the given parameters.
  std::vector<double> evaluate(std::span<const double> params) const {
    const PowerTable table(params);
    std::vector<double> values(entries_.size());
    for (std::size_t n = 0; n < entries_.size(); ++n) values[n] = table(entries_[n]);
    return values;
  }

 private:
  std::vector<Poly> entries_;
  std::unordered_multimap<std::size_t, std::uint32_t> index_;
};

}  // namespace percbound
