// Copyright 2026 The memkernel Authors
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

#include "memkernel/scalar_fn.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace memkernel {

ScalarFn ScalarFn::constant(double value) {
  ScalarFn f;
  f.kind_ = Kind::Constant;
  f.value_ = value;
  return f;
}

ScalarFn ScalarFn::exponential_sum(std::vector<ExpTerm> terms) {
  for (const auto& t : terms) {
    if (t.rate < 0.0)
      throw std::invalid_argument("ScalarFn: exponential decay rates must be >= 0");
  }
  ScalarFn f;
  f.kind_ = Kind::ExponentialSum;
  f.terms_ = std::move(terms);
  return f;
}

ScalarFn ScalarFn::tabulated(double step, std::vector<double> samples) {
  if (!(step > 0.0)) throw std::invalid_argument("ScalarFn: tabulated grid step must be > 0");
  if (samples.empty()) throw std::invalid_argument("ScalarFn: tabulated needs samples");
  ScalarFn f;
  f.kind_ = Kind::Tabulated;
  f.table_step_ = step;
  f.table_ = std::move(samples);
  return f;
}

double ScalarFn::operator()(double tau) const {
  if (tau < 0.0) throw std::domain_error("ScalarFn: evaluation at tau < 0");
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::ExponentialSum: {
      double v = 0.0;
      for (const auto& t : terms_) v += t.amplitude * std::exp(-t.rate * tau);
      return v;
    }
    case Kind::Tabulated: {
      const double x = tau / table_step_;
      const auto i = static_cast<std::size_t>(x);
      if (i + 1 >= table_.size()) {
        // at or beyond the last sample: zero extension, exact value at the end
        if (i + 1 == table_.size() && x <= static_cast<double>(i)) return table_[i];
        return 0.0;
      }
      const double w = x - static_cast<double>(i);
      return (1.0 - w) * table_[i] + w * table_[i + 1];
    }
  }
  return 0.0;
}

std::vector<double> ScalarFn::sample(const TimeGrid& grid) const {
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = (*this)(grid.time(j));
  return out;
}

bool ScalarFn::is_zero() const {
  switch (kind_) {
    case Kind::Constant:
      return value_ == 0.0;
    case Kind::ExponentialSum: {
      for (const auto& t : terms_)
        if (t.amplitude != 0.0) return false;
      return true;
    }
    case Kind::Tabulated: {
      for (double v : table_)
        if (v != 0.0) return false;
      return true;
    }
  }
  return false;
}

bool ScalarFn::structurally_equal(const ScalarFn& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Constant:
      return value_ == other.value_;
    case Kind::ExponentialSum: {
      if (terms_.size() != other.terms_.size()) return false;
      for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].amplitude != other.terms_[i].amplitude ||
            terms_[i].rate != other.terms_[i].rate)
          return false;
      return true;
    }
    case Kind::Tabulated:
      return table_step_ == other.table_step_ && table_ == other.table_;
  }
  return false;
}

ScalarFn ScalarFn::scaled(double factor) const {
  switch (kind_) {
    case Kind::Constant:
      return constant(factor * value_);
    case Kind::ExponentialSum: {
      auto terms = terms_;
      for (auto& t : terms) t.amplitude *= factor;
      return exponential_sum(std::move(terms));
    }
    case Kind::Tabulated: {
      auto tab = table_;
      for (auto& v : tab) v *= factor;
      return tabulated(table_step_, std::move(tab));
    }
  }
  return zero();
}

ScalarFn ScalarFn::sum(const ScalarFn& a, const ScalarFn& b) {
  if (a.kind_ == Kind::Tabulated || b.kind_ == Kind::Tabulated)
    throw std::invalid_argument("ScalarFn::sum: tabulated operands have no closed sum");
  auto terms_of = [](const ScalarFn& f) {
    std::vector<ExpTerm> out;
    if (f.kind_ == Kind::Constant) {
      if (f.value_ != 0.0) out.push_back({f.value_, 0.0});
    } else {
      out = f.terms_;
    }
    return out;
  };
  auto ta = terms_of(a);
  const auto tb = terms_of(b);
  for (const auto& t : tb) {
    bool merged = false;
    for (auto& u : ta) {
      if (u.rate == t.rate) {
        u.amplitude += t.amplitude;
        merged = true;
        break;
      }
    }
    if (!merged) ta.push_back(t);
  }
  if (ta.empty()) return zero();
  if (ta.size() == 1 && ta[0].rate == 0.0) return constant(ta[0].amplitude);
  return exponential_sum(std::move(ta));
}

std::optional<std::vector<ExpTerm>> ScalarFn::exp_terms() const {
  switch (kind_) {
    case Kind::Constant:
      if (value_ == 0.0) return std::vector<ExpTerm>{};
      return std::vector<ExpTerm>{{value_, 0.0}};
    case Kind::ExponentialSum:
      return terms_;
    case Kind::Tabulated:
      return std::nullopt;
  }
  return std::nullopt;
}

double ScalarFn::constant_value() const {
  if (kind_ != Kind::Constant)
    throw std::logic_error("ScalarFn: not a constant");
  return value_;
}

std::string ScalarFn::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant:
      os << "const(" << value_ << ")";
      break;
    case Kind::ExponentialSum:
      os << "expsum(";
      for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) os << " + ";
        os << terms_[i].amplitude << "*exp(-" << terms_[i].rate << " t)";
      }
      os << ")";
      break;
    case Kind::Tabulated:
      os << "tabulated(step=" << table_step_ << ", n=" << table_.size() << ")";
      break;
  }
  return os.str();
}

}  // namespace memkernel
