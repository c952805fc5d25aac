#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "bergman/errors.hpp"

namespace bergman {

////////////////////////////////////////////////////////////////////////////////
//
// MultiIndex
//
////////////////////////////////////////////////////////////////////////////////

/// Exponent tuple gamma in N^n labelling the monomial z^gamma.
///
/// Comparison operators give the lexicographic order used by every
/// enumeration; `dominates` is the componentwise partial order.
class MultiIndex {
public:
  using value_type = std::uint32_t;

  MultiIndex() = default;
  explicit MultiIndex(std::size_t dimension) : entries_(dimension, 0) {}
  MultiIndex(std::initializer_list<value_type> entries) : entries_(entries) {}
  explicit MultiIndex(std::vector<value_type> entries) : entries_(std::move(entries)) {}

  static MultiIndex zero(std::size_t dimension) { return MultiIndex(dimension); }

  /// Unit vector e_j in dimension n.
  static MultiIndex unit(std::size_t dimension, std::size_t j) {
    MultiIndex e(dimension);
    e.entries_.at(j) = 1;
    return e;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  value_type operator[](std::size_t j) const noexcept { return entries_[j]; }
  value_type& operator[](std::size_t j) noexcept { return entries_[j]; }
  std::span<const value_type> entries() const noexcept { return entries_; }

  /// |gamma| = sum of entries.
  std::uint64_t order() const noexcept {
    return std::accumulate(entries_.begin(), entries_.end(), std::uint64_t{0});
  }

  bool is_zero() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](value_type v) { return v == 0; });
  }

  /// gamma >= alpha componentwise.
  bool dominates(const MultiIndex& alpha) const {
    require_same_size(alpha);
    for (std::size_t j = 0; j < size(); ++j)
      if (entries_[j] < alpha.entries_[j]) return false;
    return true;
  }

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    a.require_same_size(b);
    MultiIndex r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) r.entries_[j] = a.entries_[j] + b.entries_[j];
    return r;
  }

  /// Defined only when a dominates b.
  friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
    if (!a.dominates(b)) throw usage_error("multi-index subtraction requires gamma >= alpha componentwise");
    MultiIndex r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) r.entries_[j] = a.entries_[j] - b.entries_[j];
    return r;
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) { return a.entries_ <=> b.entries_; }

  /// "g1,g2,...,gn"
  std::string to_string() const {
    std::string out;
    for (std::size_t j = 0; j < size(); ++j) {
      if (j) out += ',';
      out += std::to_string(entries_[j]);
    }
    return out;
  }

  static MultiIndex parse(std::string_view text) {
    std::vector<value_type> entries;
    std::size_t pos = 0;
    while (true) {
      auto comma = text.find(',', pos);
      auto field = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      value_type v{};
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
        throw usage_error("invalid multi-index '" + std::string(text) + "': entries must be nonnegative integers");
      entries.push_back(v);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return MultiIndex(std::move(entries));
  }

private:
  void require_same_size(const MultiIndex& other) const {
    if (other.size() != size())
      throw usage_error("multi-index dimension mismatch: " + std::to_string(size()) + " vs " +
                        std::to_string(other.size()));
  }

  std::vector<value_type> entries_;
};

////////////////////////////////////////////////////////////////////////////////
//
// DomainSpec
//
////////////////////////////////////////////////////////////////////////////////

struct Disc {
  friend bool operator==(const Disc&, const Disc&) = default;
};

struct Polydisc {
  std::size_t n = 1;
  friend bool operator==(const Polydisc&, const Polydisc&) = default;
};

/// |z_1|^{2 m_1} + ... + |z_n|^{2 m_n} < 1 with real m_j > 0.
struct Ellipsoid {
  std::vector<double> m;
  friend bool operator==(const Ellipsoid&, const Ellipsoid&) = default;
};

namespace detail {

inline std::string shortest_decimal(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view field, std::string_view context) {
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
  double v{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
    throw usage_error("invalid number '" + std::string(field) + "' in '" + std::string(context) + "'");
  return v;
}

}  // namespace detail

/// One of the supported bounded Reinhardt domains.
class DomainSpec {
public:
  using Variant = std::variant<Disc, Polydisc, Ellipsoid>;

  DomainSpec() = default;

  static DomainSpec disc() { return DomainSpec(Disc{}); }

  static DomainSpec polydisc(std::size_t n) {
    if (n < 1) throw usage_error("polydisc dimension must be >= 1");
    return DomainSpec(Polydisc{n});
  }

  static DomainSpec ellipsoid(std::vector<double> m) {
    if (m.empty()) throw usage_error("ellipsoid needs at least one exponent");
    for (double mj : m)
      if (!(std::isfinite(mj) && mj > 0))
        throw usage_error("ellipsoid exponents must be finite and > 0, got " + detail::shortest_decimal(mj));
    return DomainSpec(Ellipsoid{std::move(m)});
  }

  /// Parses "disc", "polydisc:n" or "ellipsoid:m1,...,mn".
  static DomainSpec parse(std::string_view text) {
    if (text == "disc") return disc();
    constexpr std::string_view kPoly = "polydisc:";
    constexpr std::string_view kEll = "ellipsoid:";
    if (text.starts_with(kPoly)) {
      auto field = text.substr(kPoly.size());
      std::size_t n{};
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), n);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
        throw usage_error("invalid polydisc dimension in '" + std::string(text) + "'");
      return polydisc(n);
    }
    if (text.starts_with(kEll)) {
      auto rest = text.substr(kEll.size());
      std::vector<double> m;
      std::size_t pos = 0;
      while (true) {
        auto comma = rest.find(',', pos);
        m.push_back(detail::parse_double(
            rest.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos), text));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
      }
      return ellipsoid(std::move(m));
    }
    throw usage_error("unknown domain '" + std::string(text) +
                      "' (expected disc, polydisc:n or ellipsoid:m1,...,mn)");
  }

  /// Canonical text form, also used as a cache key.
  std::string to_string() const {
    return std::visit(
        [](const auto& d) -> std::string {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Disc>) {
            return "disc";
          } else if constexpr (std::is_same_v<T, Polydisc>) {
            return "polydisc:" + std::to_string(d.n);
          } else {
            std::string out = "ellipsoid:";
            for (std::size_t j = 0; j < d.m.size(); ++j) {
              if (j) out += ',';
              out += detail::shortest_decimal(d.m[j]);
            }
            return out;
          }
        },
        variant_);
  }

  std::size_t dimension() const noexcept {
    return std::visit(
        [](const auto& d) -> std::size_t {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Disc>) return 1;
          else if constexpr (std::is_same_v<T, Polydisc>) return d.n;
          else return d.m.size();
        },
        variant_);
  }

  /// Variant name for diagnostics: "disc", "polydisc" or "ellipsoid".
  std::string_view kind() const noexcept {
    switch (variant_.index()) {
      case 0: return "disc";
      case 1: return "polydisc";
      default: return "ellipsoid";
    }
  }

  const Variant& variant() const noexcept { return variant_; }
  const Disc* as_disc() const noexcept { return std::get_if<Disc>(&variant_); }
  const Polydisc* as_polydisc() const noexcept { return std::get_if<Polydisc>(&variant_); }
  const Ellipsoid* as_ellipsoid() const noexcept { return std::get_if<Ellipsoid>(&variant_); }

  /// Membership of a point given through its squared moduli s_j = |z_j|^2.
  bool contains_squared_moduli(std::span<const double> s) const {
    if (s.size() != dimension()) throw usage_error("point dimension does not match domain");
    if (const auto* e = as_ellipsoid()) {
      double total = 0.0;
      for (std::size_t j = 0; j < s.size(); ++j) total += std::pow(s[j], e->m[j]);
      return total < 1.0;
    }
    return std::all_of(s.begin(), s.end(), [](double v) { return v < 1.0; });
  }

  /// Throws usage_error unless gamma has this domain's dimension.
  void require_dimension(const MultiIndex& gamma, std::string_view what = "multi-index") const {
    if (gamma.size() != dimension())
      throw usage_error(std::string(what) + " has length " + std::to_string(gamma.size()) + " but domain " +
                        to_string() + " has dimension " + std::to_string(dimension()));
  }

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;

private:
  explicit DomainSpec(Variant v) : variant_(std::move(v)) {}

  Variant variant_{Disc{}};
};

}  // namespace bergman
