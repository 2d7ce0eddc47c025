// Copyright 2026 The qttsim Authors
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

#include <iosfwd>
#include <string>

#include "qtt/tt.hpp"

// Self-describing binary container for tensor trains and MPOs:
//   magic "QTT1" | u64 core count | per core: u64 ndim, ndim x u64 dims |
//   row-major complex-double core data in core order.
// All integers little-endian; used for golden-file regression tests and
// state snapshots.

namespace qtt::io {

void write_u64(std::ostream& os, std::uint64_t x);
std::uint64_t read_u64(std::istream& is);
void write_f64(std::ostream& os, double x);
double read_f64(std::istream& is);

void save_tt(std::ostream& os, const TensorTrain& tt);
TensorTrain load_tt(std::istream& is);
void save_tt(const std::string& path, const TensorTrain& tt);
TensorTrain load_tt(const std::string& path);

void save_mpo(std::ostream& os, const MPO& op);
MPO load_mpo(std::istream& is);
void save_mpo(const std::string& path, const MPO& op);
MPO load_mpo(const std::string& path);

}  // namespace qtt::io
