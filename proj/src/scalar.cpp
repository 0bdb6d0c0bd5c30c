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

#include "gnncirc/scalar.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "gnncirc/errors.hpp"

namespace gnncirc {

std::string_view to_string(Backend b) {
  return b == Backend::Exact ? "exact" : "float";
}

Scalar Scalar::zero(Backend b) {
  return b == Backend::Exact ? Scalar(Rational(0)) : Scalar(0.0);
}

Scalar Scalar::one(Backend b) {
  return b == Backend::Exact ? Scalar(Rational(1)) : Scalar(1.0);
}

const Rational& Scalar::exact() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return *r;
  throw Error("float scalar used where an exact rational is required");
}

double Scalar::to_double() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->get_d();
  return std::get<double>(value_);
}

Scalar Scalar::to_backend(Backend b) const {
  if (b == backend()) return *this;
  if (b == Backend::Float) return Scalar(to_double());
  return Scalar(rational_from_double(std::get<double>(value_)));
}

bool Scalar::is_zero() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return sgn(*r) == 0;
  return std::get<double>(value_) == 0.0;
}

namespace {

void require_same_backend(const Scalar& a, const Scalar& b) {
  if (a.backend() != b.backend()) {
    throw Error("arithmetic mixes exact and float scalars");
  }
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  require_same_backend(a, b);
  if (a.is_exact()) return Scalar(Rational(a.exact() + b.exact()));
  return Scalar(a.to_double() + b.to_double());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  require_same_backend(a, b);
  if (a.is_exact()) return Scalar(Rational(a.exact() - b.exact()));
  return Scalar(a.to_double() - b.to_double());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  require_same_backend(a, b);
  if (a.is_exact()) return Scalar(Rational(a.exact() * b.exact()));
  return Scalar(a.to_double() * b.to_double());
}

Scalar operator-(const Scalar& a) {
  if (a.is_exact()) return Scalar(Rational(-a.exact()));
  return Scalar(-a.to_double());
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.backend() != b.backend()) return false;
  if (a.is_exact()) return a.exact() == b.exact();
  return a.to_double() == b.to_double();
}

std::string Scalar::str() const {
  if (is_exact()) return to_string(exact());
  double d = to_double();
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

Scalar parse_scalar(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.find_first_of(".eEin") == std::string_view::npos) {
    return Scalar(parse_rational(text));
  }
  std::string_view body = text;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double d = 0;
  auto res = std::from_chars(body.data(), body.data() + body.size(), d);
  if (res.ec != std::errc() || res.ptr != body.data() + body.size()) {
    throw ParseError("malformed number '" + std::string(text) + "'");
  }
  return Scalar(d);
}

bool approx_equal(double a, double b, double rel, double abs) {
  if (a == b) return true;
  if (std::isnan(a) || std::isnan(b)) return false;
  double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= std::max(rel * scale, abs);
}

VecK::VecK(std::vector<Scalar> components) : c_(std::move(components)) {
  if (c_.empty()) throw Error("vector of dimension 0");
  Backend b = c_.front().backend();
  for (const auto& s : c_) {
    if (s.backend() != b) throw Error("vector mixes exact and float components");
  }
}

VecK::VecK(std::initializer_list<Scalar> components)
    : VecK(std::vector<Scalar>(components)) {}

VecK VecK::broadcast(const Scalar& s, std::size_t k) {
  return VecK(std::vector<Scalar>(k, s));
}

VecK VecK::zeros(std::size_t k, Backend b) {
  return broadcast(Scalar::zero(b), k);
}

VecK VecK::ones(std::size_t k, Backend b) { return broadcast(Scalar::one(b), k); }

VecK VecK::ints(std::initializer_list<long> values) {
  std::vector<Scalar> c;
  for (long v : values) c.push_back(Scalar::integer(v));
  return VecK(std::move(c));
}

Backend VecK::backend() const {
  return c_.empty() ? Backend::Exact : c_.front().backend();
}

VecK VecK::to_backend(Backend b) const {
  std::vector<Scalar> c;
  c.reserve(c_.size());
  for (const auto& s : c_) c.push_back(s.to_backend(b));
  return VecK(std::move(c));
}

bool VecK::is_broadcast_of(const Scalar& s) const {
  return std::all_of(c_.begin(), c_.end(),
                     [&](const Scalar& x) { return x == s; });
}

VecK operator+(const VecK& a, const VecK& b) {
  if (a.dim() != b.dim()) throw Error("vector dimension mismatch");
  std::vector<Scalar> c;
  c.reserve(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) c.push_back(a[i] + b[i]);
  return VecK(std::move(c));
}

VecK operator*(const VecK& a, const VecK& b) {
  if (a.dim() != b.dim()) throw Error("vector dimension mismatch");
  std::vector<Scalar> c;
  c.reserve(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) c.push_back(a[i] * b[i]);
  return VecK(std::move(c));
}

std::string VecK::str() const {
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) out += ',';
    out += c_[i].str();
  }
  return out;
}

VecK parse_veck(std::string_view text) {
  std::vector<Scalar> c;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos
                                        ? std::string_view::npos
                                        : comma - start);
    c.push_back(parse_scalar(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  try {
    return VecK(std::move(c));
  } catch (const Error& e) {
    throw ParseError(std::string("in vector '") + std::string(text) +
                     "': " + e.what());
  }
}

bool approx_equal(const VecK& a, const VecK& b, double rel, double abs) {
  if (a.dim() != b.dim()) return false;
  if (a.backend() == Backend::Exact && b.backend() == Backend::Exact) {
    return a == b;
  }
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (!approx_equal(a[i].to_double(), b[i].to_double(), rel, abs)) {
      return false;
    }
  }
  return true;
}

}  // namespace gnncirc
