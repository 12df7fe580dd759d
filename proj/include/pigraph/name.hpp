#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pigraph {

// Declaration order is the canonical ordering used for serialization.
enum class NameKind : std::uint8_t {
  Free,
  Binder,
  Restriction,
  Private,
  FreshOut,
  FreshIn,
};

/// A name of the calculus.
///
/// The four static kinds carry an identifier, the two fresh kinds carry a
/// positive index (`3!`, `3?`).  Names are small values; comparison is
/// kind-major, then identifier, then index.
class Name {
 public:
  Name() = default;

  static Name free(std::string ident) { return Name{NameKind::Free, std::move(ident)}; }
  static Name binder(std::string ident) { return Name{NameKind::Binder, std::move(ident)}; }
  static Name restriction(std::string ident) { return Name{NameKind::Restriction, std::move(ident)}; }
  static Name priv(std::string ident) { return Name{NameKind::Private, std::move(ident)}; }
  static Name fresh_out(std::uint32_t index) { return Name{NameKind::FreshOut, index}; }
  static Name fresh_in(std::uint32_t index) { return Name{NameKind::FreshIn, index}; }

  static Name of_kind(NameKind kind, std::string ident) {
    switch (kind) {
      case NameKind::Free: return free(std::move(ident));
      case NameKind::Binder: return binder(std::move(ident));
      case NameKind::Restriction: return restriction(std::move(ident));
      case NameKind::Private: return priv(std::move(ident));
      default: throw std::invalid_argument("of_kind: fresh names carry an index");
    }
  }

  NameKind kind() const noexcept { return kind_; }
  const std::string& ident() const noexcept { return ident_; }
  std::uint32_t index() const noexcept { return index_; }

  bool is_private() const noexcept {
    return kind_ == NameKind::Restriction || kind_ == NameKind::Private;
  }
  bool is_public() const noexcept { return !is_private(); }
  bool is_static() const noexcept {
    return kind_ != NameKind::FreshOut && kind_ != NameKind::FreshIn;
  }
  bool is_fresh_out() const noexcept { return kind_ == NameKind::FreshOut; }
  bool is_fresh_in() const noexcept { return kind_ == NameKind::FreshIn; }

  /// Names that may appear in a partition of names.
  bool is_partitionable() const noexcept {
    return kind_ == NameKind::Free || kind_ == NameKind::FreshOut || kind_ == NameKind::FreshIn;
  }

  /// Canonical text: `a`, `?x`, `^A`, `$a`, `3!`, `3?`.
  std::string str() const {
    switch (kind_) {
      case NameKind::Free: return ident_;
      case NameKind::Binder: return "?" + ident_;
      case NameKind::Restriction: return "^" + ident_;
      case NameKind::Private: return "$" + ident_;
      case NameKind::FreshOut: return std::to_string(index_) + "!";
      case NameKind::FreshIn: return std::to_string(index_) + "?";
    }
    return {};
  }

  friend bool operator==(const Name&, const Name&) = default;
  friend std::strong_ordering operator<=>(const Name&, const Name&) = default;

 private:
  Name(NameKind kind, std::string ident) : kind_(kind), ident_(std::move(ident)) {
    if (ident_.empty()) throw std::invalid_argument("static names need a non-empty identifier");
  }
  Name(NameKind kind, std::uint32_t index) : kind_(kind), index_(index) {
    if (index_ == 0) throw std::invalid_argument("fresh name indices start at 1");
  }

  NameKind kind_ = NameKind::Free;
  std::string ident_;
  std::uint32_t index_ = 0;
};

/// Parses the canonical rendering produced by Name::str().
inline Name parse_name(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty name");
  const char last = text.back();
  if (last == '!' || last == '?') {
    const auto digits = text.substr(0, text.size() - 1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos)
      throw std::invalid_argument("malformed fresh name: " + std::string(text));
    const auto index = static_cast<std::uint32_t>(std::stoul(std::string(digits)));
    return last == '!' ? Name::fresh_out(index) : Name::fresh_in(index);
  }
  switch (text.front()) {
    case '?': return Name::binder(std::string(text.substr(1)));
    case '^': return Name::restriction(std::string(text.substr(1)));
    case '$': return Name::priv(std::string(text.substr(1)));
    default: return Name::free(std::string(text));
  }
}

}  // namespace pigraph
