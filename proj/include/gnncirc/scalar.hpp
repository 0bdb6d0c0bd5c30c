// Copyright 2026 The gnncirc Authors
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

#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gnncirc/rational.hpp"

namespace gnncirc {

enum class Backend { Exact, Float };

std::string_view to_string(Backend b);

class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  explicit Scalar(Rational r) : value_(std::move(r)) {}
  explicit Scalar(double d) : value_(d) {}
  static Scalar integer(long v) { return Scalar(Rational(v)); }
  static Scalar zero(Backend b);
  static Scalar one(Backend b);

  Backend backend() const {
    return std::holds_alternative<Rational>(value_) ? Backend::Exact
                                                    : Backend::Float;
  }
  bool is_exact() const { return backend() == Backend::Exact; }
  // Throws Error on a float scalar.
  const Rational& exact() const;
  double to_double() const;
  // Exact to float rounds; float to exact takes the exact binary value.
  Scalar to_backend(Backend b) const;
  bool is_zero() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a);
  // Same backend and same value.
  friend bool operator==(const Scalar& a, const Scalar& b);

  // "p/q" for exact values, shortest round-trip decimal for floats
  // (always containing '.', 'e', "inf" or "nan").
  std::string str() const;

 private:
  std::variant<Rational, double> value_;
};

// Parses a rational ("p", "p/q") as exact, or a decimal/exponent literal as
// float. Throws ParseError.
Scalar parse_scalar(std::string_view text);

// Relative tolerance with an absolute floor.
bool approx_equal(double a, double b, double rel = 1e-9, double abs = 1e-12);

class VecK {
 public:
  VecK() = default;
  explicit VecK(std::vector<Scalar> components);
  VecK(std::initializer_list<Scalar> components);
  static VecK broadcast(const Scalar& s, std::size_t k);
  static VecK zeros(std::size_t k, Backend b = Backend::Exact);
  static VecK ones(std::size_t k, Backend b = Backend::Exact);
  // Convenience for exact integer vectors.
  static VecK ints(std::initializer_list<long> values);

  std::size_t dim() const { return c_.size(); }
  Backend backend() const;
  const Scalar& operator[](std::size_t i) const { return c_[i]; }
  Scalar& operator[](std::size_t i) { return c_[i]; }
  const std::vector<Scalar>& components() const { return c_; }
  VecK to_backend(Backend b) const;
  bool is_broadcast_of(const Scalar& s) const;

  friend VecK operator+(const VecK& a, const VecK& b);
  friend VecK operator*(const VecK& a, const VecK& b);
  friend bool operator==(const VecK& a, const VecK& b) { return a.c_ == b.c_; }

  // Comma separated components, no brackets.
  std::string str() const;

 private:
  std::vector<Scalar> c_;
};

// Parses comma separated scalars. Throws ParseError on empty input or mixed
// backends.
VecK parse_veck(std::string_view text);

// Componentwise approx_equal for float vectors, exact equality otherwise.
bool approx_equal(const VecK& a, const VecK& b, double rel = 1e-9,
                  double abs = 1e-12);

}  // namespace gnncirc
