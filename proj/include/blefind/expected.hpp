// Copyright 2026 The blefind Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

namespace blefind {

template <typename E>
struct Unexpected {
  E error;
};

template <typename E>
Unexpected<E> unexpected(E e) {
  return Unexpected<E>{std::move(e)};
}

/// Minimal value-or-error holder for recoverable failures (frames to ignore,
/// reports that do not authenticate). Contract violations throw instead.
template <typename T, typename E>
class Expected {
 public:
  Expected(T value) : data_(std::in_place_index<0>, std::move(value)) {}
  Expected(Unexpected<E> err) : data_(std::in_place_index<1>, std::move(err.error)) {}

  bool has_value() const { return data_.index() == 0; }
  explicit operator bool() const { return has_value(); }

  const T& value() const {
    if (!has_value()) throw std::logic_error("Expected holds an error");
    return std::get<0>(data_);
  }
  T& value() {
    if (!has_value()) throw std::logic_error("Expected holds an error");
    return std::get<0>(data_);
  }
  const E& error() const {
    if (has_value()) throw std::logic_error("Expected holds a value");
    return std::get<1>(data_);
  }

  const T& operator*() const { return value(); }
  const T* operator->() const { return &value(); }
  T& operator*() { return value(); }
  T* operator->() { return &value(); }

 private:
  std::variant<T, E> data_;
};

}  // namespace blefind
