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

#include "qtt/serialize.hpp"

#include <cstring>
#include <fstream>

namespace qtt::io {

namespace {
constexpr char kMagic[4] = {'Q', 'T', 'T', '1'};
}

void write_u64(std::ostream& os, std::uint64_t x) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((x >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw std::runtime_error("container truncated");
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return x;
}

void write_f64(std::ostream& os, double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, 8);
  write_u64(os, u);
}

double read_f64(std::istream& is) {
  std::uint64_t u = read_u64(is);
  double x;
  std::memcpy(&x, &u, 8);
  return x;
}

namespace {

void write_data(std::ostream& os, const std::vector<cplx>& v) {
  for (const cplx& z : v) {
    write_f64(os, z.real());
    write_f64(os, z.imag());
  }
}

void read_data(std::istream& is, std::vector<cplx>& v) {
  for (cplx& z : v) {
    const double re = read_f64(is);
    const double im = read_f64(is);
    z = cplx(re, im);
  }
}

void write_magic(std::ostream& os) { os.write(kMagic, 4); }

void check_magic(std::istream& is) {
  char m[4];
  is.read(m, 4);
  if (!is || std::memcmp(m, kMagic, 4) != 0) throw std::runtime_error("bad container magic");
}

}  // namespace

void save_tt(std::ostream& os, const TensorTrain& tt) {
  write_magic(os);
  write_u64(os, tt.num_sites());
  for (const auto& c : tt.cores) {
    write_u64(os, 3);
    write_u64(os, c.l);
    write_u64(os, c.d);
    write_u64(os, c.r);
  }
  for (const auto& c : tt.cores) write_data(os, c.v);
}

TensorTrain load_tt(std::istream& is) {
  check_magic(is);
  const std::uint64_t n = read_u64(is);
  std::vector<Core3> cores;
  cores.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (read_u64(is) != 3) throw std::runtime_error("expected 3-index core");
    const size_t l = read_u64(is), d = read_u64(is), r = read_u64(is);
    cores.emplace_back(l, d, r);
  }
  for (auto& c : cores) read_data(is, c.v);
  return TensorTrain(std::move(cores));
}

void save_mpo(std::ostream& os, const MPO& op) {
  write_magic(os);
  write_u64(os, op.num_sites());
  for (const auto& c : op.cores) {
    write_u64(os, 4);
    write_u64(os, c.l);
    write_u64(os, c.dr);
    write_u64(os, c.dc);
    write_u64(os, c.r);
  }
  for (const auto& c : op.cores) write_data(os, c.v);
}

MPO load_mpo(std::istream& is) {
  check_magic(is);
  const std::uint64_t n = read_u64(is);
  std::vector<Core4> cores;
  cores.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (read_u64(is) != 4) throw std::runtime_error("expected 4-index core");
    const size_t l = read_u64(is), dr = read_u64(is), dc = read_u64(is), r = read_u64(is);
    cores.emplace_back(l, dr, dc, r);
  }
  for (auto& c : cores) read_data(is, c.v);
  return MPO(std::move(cores));
}

void save_tt(const std::string& path, const TensorTrain& tt) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  save_tt(f, tt);
}

TensorTrain load_tt(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return load_tt(f);
}

void save_mpo(const std::string& path, const MPO& op) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  save_mpo(f, op);
}

MPO load_mpo(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return load_mpo(f);
}

}  // namespace qtt::io
