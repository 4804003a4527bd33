// Copyright 2026 The MFM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfm/core.hpp"

namespace mfm {

/// Mixed-radix bijection between register tuples and flat indices. The first
/// register is the most significant digit.
class ConfigCodec {
 public:
  struct Register {
    std::string name;
    std::uint64_t size;
  };

  explicit ConfigCodec(std::vector<Register> registers) : registers_(std::move(registers)) {
    dimension_ = 1;
    for (const auto& r : registers_) {
      if (r.size == 0) throw ContractError("codec: register '" + r.name + "' has size 0");
      if (dimension_ > std::numeric_limits<Index>::max() / r.size) {
        throw DimensionRefused("codec: total dimension overflows 64 bits");
      }
      dimension_ *= r.size;
    }
  }

  Index dimension() const { return dimension_; }
  const std::vector<Register>& registers() const { return registers_; }

  Index pack(std::span<const std::uint64_t> digits) const {
    if (digits.size() != registers_.size()) {
      throw std::out_of_range("codec: expected " + std::to_string(registers_.size()) +
                              " registers, got " + std::to_string(digits.size()));
    }
    Index idx = 0;
    for (std::size_t k = 0; k < registers_.size(); ++k) {
      if (digits[k] >= registers_[k].size) {
        throw std::out_of_range("codec: register '" + registers_[k].name + "' value " +
                                std::to_string(digits[k]) + " >= " +
                                std::to_string(registers_[k].size));
      }
      idx = idx * registers_[k].size + digits[k];
    }
    return idx;
  }

  std::vector<std::uint64_t> unpack(Index idx) const {
    if (idx >= dimension_) {
      throw std::out_of_range("codec: index " + std::to_string(idx) + " >= dimension " +
                              std::to_string(dimension_));
    }
    std::vector<std::uint64_t> digits(registers_.size());
    for (std::size_t k = registers_.size(); k-- > 0;) {
      digits[k] = idx % registers_[k].size;
      idx /= registers_[k].size;
    }
    return digits;
  }

 private:
  std::vector<Register> registers_;
  Index dimension_ = 1;
};

/// Unpacks `index` and checks that packing it again is the identity.
inline std::vector<std::uint64_t> codec_roundtrip(const ConfigCodec& codec, Index index) {
  auto digits = codec.unpack(index);
  if (codec.pack(digits) != index) {
    throw std::logic_error("codec: pack(unpack(" + std::to_string(index) + ")) differs");
  }
  return digits;
}

}  // namespace mfm
