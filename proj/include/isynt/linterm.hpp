#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace isynt {

using i64 = long long;

// Variables of a transition predicate refer to the pre-state through a
// reserved "@prev" tag. '@' cannot appear in identifiers accepted by the
// parser, so tagged names never collide with user variables.
inline std::string prev_var(const std::string& v) { return v + "@prev"; }
inline bool is_prev_var(const std::string& v) {
  return v.size() > 5 && v.compare(v.size() - 5, 5, "@prev") == 0;
}
inline std::string strip_prev(const std::string& v) {
  return is_prev_var(v) ? v.substr(0, v.size() - 5) : v;
}
// Step-indexed copies (x@3) used when grounding paths for interpolation.
inline std::string indexed_var(const std::string& v, int i) {
  return v + "@" + std::to_string(i);
}

/// A linear term over integer variables: sum of coeff*var plus a constant.
/// Zero coefficients are never stored; empty coeffs means a constant term.
class lin_term {
 public:
  lin_term() = default;
  explicit lin_term(i64 c) : constant_(c) {}
  static lin_term var(const std::string& v, i64 coeff = 1) {
    lin_term t;
    t.set_coeff(v, coeff);
    return t;
  }

  const std::map<std::string, i64>& coeffs() const { return coeffs_; }
  i64 constant() const { return constant_; }
  void set_constant(i64 c) { constant_ = c; }
  bool is_constant() const { return coeffs_.empty(); }

  i64 coeff(const std::string& v) const {
    auto it = coeffs_.find(v);
    return it == coeffs_.end() ? 0 : it->second;
  }
  void set_coeff(const std::string& v, i64 c) {
    if (c == 0)
      coeffs_.erase(v);
    else
      coeffs_[v] = c;
  }

  lin_term& operator+=(const lin_term& o) {
    for (auto& [v, c] : o.coeffs_) set_coeff(v, coeff(v) + c);
    constant_ += o.constant_;
    return *this;
  }
  lin_term& operator-=(const lin_term& o) {
    for (auto& [v, c] : o.coeffs_) set_coeff(v, coeff(v) - c);
    constant_ -= o.constant_;
    return *this;
  }
  lin_term& operator*=(i64 k) {
    if (k == 0) {
      coeffs_.clear();
      constant_ = 0;
      return *this;
    }
    for (auto& [v, c] : coeffs_) c *= k;
    constant_ *= k;
    return *this;
  }
  friend lin_term operator+(lin_term a, const lin_term& b) { return a += b; }
  friend lin_term operator-(lin_term a, const lin_term& b) { return a -= b; }
  friend lin_term operator*(lin_term a, i64 k) { return a *= k; }
  friend lin_term operator-(lin_term a) { return a *= -1; }

  bool operator==(const lin_term& o) const {
    return constant_ == o.constant_ && coeffs_ == o.coeffs_;
  }
  bool operator<(const lin_term& o) const {
    if (coeffs_ != o.coeffs_) return coeffs_ < o.coeffs_;
    return constant_ < o.constant_;
  }

  /// gcd of the variable coefficients (0 for constant terms).
  i64 content() const {
    i64 g = 0;
    for (auto& [v, c] : coeffs_) g = std::gcd(g, c < 0 ? -c : c);
    return g;
  }

  /// Coefficient of the lexicographically smallest variable, 0 if constant.
  i64 leading_coeff() const {
    return coeffs_.empty() ? 0 : coeffs_.begin()->second;
  }

  /// Substitute variables by terms; unmapped variables are kept.
  lin_term substitute(const std::map<std::string, lin_term>& sub) const {
    lin_term r(constant_);
    for (auto& [v, c] : coeffs_) {
      auto it = sub.find(v);
      if (it == sub.end())
        r.set_coeff(v, r.coeff(v) + c);
      else
        r += it->second * c;
    }
    return r;
  }

  /// Rename every variable through f.
  template <typename F>
  lin_term rename(F&& f) const {
    lin_term r(constant_);
    for (auto& [v, c] : coeffs_) r.set_coeff(f(v), r.coeff(f(v)) + c);
    return r;
  }

  bool has_prev_vars() const {
    for (auto& [v, c] : coeffs_)
      if (is_prev_var(v)) return true;
    return false;
  }

  /// Evaluate under a total assignment; throws on missing variables.
  i64 eval(const std::map<std::string, i64>& val) const {
    i64 r = constant_;
    for (auto& [v, c] : coeffs_) {
      auto it = val.find(v);
      if (it == val.end()) throw std::out_of_range("unassigned variable " + v);
      r += c * it->second;
    }
    return r;
  }

  std::string str() const;

 private:
  std::map<std::string, i64> coeffs_;
  i64 constant_ = 0;
};

}  // namespace isynt
