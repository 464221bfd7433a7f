#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lepage {

enum class SymKind : std::uint8_t {
  X,   // x^i
  Y,   // y^K
  Y1,  // y^K_j
  Y2,  // y^K_jk, j <= k
  W,   // w^K
  W1,  // w^K_j (covers both w^i_j and w^sigma_i)
  Z,   // z^k_i
  A,   // a^i_j
};

/// Coordinate symbol. Indices are 1-based; unused slots are 0.
struct Symbol {
  SymKind kind = SymKind::X;
  std::uint8_t i = 0, j = 0, k = 0;

  static Symbol x(int i) { return {SymKind::X, u8(i), 0, 0}; }
  static Symbol y(int K) { return {SymKind::Y, u8(K), 0, 0}; }
  static Symbol y1(int K, int j) { return {SymKind::Y1, u8(K), u8(j), 0}; }
  static Symbol y2(int K, int j, int k) {
    if (j > k) std::swap(j, k);
    return {SymKind::Y2, u8(K), u8(j), u8(k)};
  }
  static Symbol w(int K) { return {SymKind::W, u8(K), 0, 0}; }
  static Symbol w1(int K, int j) { return {SymKind::W1, u8(K), u8(j), 0}; }
  static Symbol z(int k, int i) { return {SymKind::Z, u8(k), u8(i), 0}; }
  static Symbol a(int i, int j) { return {SymKind::A, u8(i), u8(j), 0}; }

  auto operator<=>(const Symbol&) const = default;

  /// DSL spelling: x1, y3, y3_1, y3_12, w2, w2_1, z1_2, a1_2.
  std::string name() const;
  std::string latex() const;
  /// Parses a DSL identifier; nullopt if it is not a coordinate name.
  static std::optional<Symbol> from_name(std::string_view s);

  std::uint64_t hash() const {
    return (static_cast<std::uint64_t>(kind) << 24) | (std::uint64_t(i) << 16) |
           (std::uint64_t(j) << 8) | k;
  }

 private:
  static std::uint8_t u8(int v) { return static_cast<std::uint8_t>(v); }
};

}  // namespace lepage
