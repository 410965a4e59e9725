// Copyright 2026 The adalsh Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "adalsh/generators.hpp"
#include "adalsh/instance_io.hpp"

namespace adalsh {
namespace {

TEST(InstanceIo, RoundTrip) {
  for (std::size_t d : {5u, 64u, 130u}) {
    const auto inst = gen_uniform_instance(40, d, d / 3, d);
    std::stringstream ss;
    write_instance(ss, inst);
    const auto back = read_instance(ss);
    EXPECT_EQ(back.set, inst.set);
    EXPECT_EQ(back.query, inst.query);
    EXPECT_EQ(back.r, inst.r);
  }
}

TEST(InstanceIo, TextLayout) {
  PointSet set(6, {from_hex("a4", 6), from_hex("00", 6)});
  Instance inst{set, from_hex("fc", 6), 2, {}};
  std::stringstream ss;
  write_instance(ss, inst);
  EXPECT_EQ(ss.str(), "srr-instance v1\nd=6 n=2 r=2\nfc\na4\n00\n");
}

Instance parse(const std::string& text) {
  std::stringstream ss(text);
  return read_instance(ss);
}

TEST(InstanceIo, RejectsMalformed) {
  EXPECT_THROW(parse("srr-instance v2\nd=4 n=1 r=1\n0\n0\n"), Error);
  EXPECT_THROW(parse("srr-instance v1\nd=4 n=2 r=1\n0\n0\n"), Error);      // missing point
  EXPECT_THROW(parse("srr-instance v1\nd=4 n=1 r=5\n0\n0\n"), Error);      // r > d
  EXPECT_THROW(parse("srr-instance v1\nd=4 n=1 r=1 x=2\n0\n0\n"), Error);  // extra token
  EXPECT_THROW(parse("srr-instance v1\nd=4 n=1 r=1\n0\n0\n1\n"), Error);   // trailing point
  EXPECT_THROW(parse("srr-instance v1\nd=3 n=1 r=1\n1\n0\n"), Error);      // padding bit
  EXPECT_NO_THROW(parse("srr-instance v1\r\nd=4 n=1 r=1\r\n0\r\nf\r\n\n"));
}

TEST(InstanceIo, FileErrorsAreIo) {
  try {
    load_instance("/nonexistent/dir/instance.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
    EXPECT_EQ(e.exit_code(), 4);
  }
  const auto path = (std::filesystem::temp_directory_path() / "adalsh_io_test.txt").string();
  const auto inst = gen_t_heavy(20, 3, 32, 5, 2.0, 1);
  save_instance(path, inst);
  EXPECT_EQ(load_instance(path).set, inst.set);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace adalsh
