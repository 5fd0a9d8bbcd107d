// SPDX-License-Identifier: Apache-2.0
//
// smtrack: soft multipath information UWB tracking
// Copyright (C) 2026 The smtrack authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "smtrack/channel.hpp"
#include "smtrack/cir_io.hpp"
#include "smtrack/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

using namespace smtrack;

TEST(FormatDouble, ShortestRoundTrip)
{
    Rng g(4);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 5000; ++i)
    {
        const double v = u(g) * std::pow(10.0, static_cast<int>(g() % 40) - 20);
        EXPECT_EQ(parse_double(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1e-9), "1e-09");
    EXPECT_TRUE(std::isnan(parse_double(format_double(std::numeric_limits<double>::quiet_NaN()))));
}

TEST(ParseDouble, RejectsGarbage)
{
    EXPECT_THROW(parse_double("1.5x"), ParseError);
    EXPECT_THROW(parse_double(""), ParseError);
    EXPECT_THROW(parse_double("abc"), ParseError);
}

TEST(CirRecord, LineLayout)
{
    CirProfile p{3, 0.25, 1e-9, {0.0, 0.5, 1.25}};
    std::ostringstream os;
    write_cir_record(os, p);
    EXPECT_EQ(os.str(), "0.25 3 1e-09 3 0 0.5 1.25\n");
}

TEST(CirRecord, SynthesizedProfilesRoundTripBitExactly)
{
    ChannelConfig cfg;
    Rng rng(12);
    std::vector<CirProfile> profiles;
    for (int k = 0; k < 5; ++k)
    {
        const std::vector<PathComponent> comps{{PathKind::LoS, (40.0 + k) * 1e-9, 0.2, std::nullopt}};
        profiles.push_back(synthesize_cir(comps, cfg, rng, k + 1, 0.1 * k));
    }
    std::stringstream ss;
    for (const auto &p : profiles)
        write_cir_record(ss, p);
    const auto back = read_cir_records(ss);
    ASSERT_EQ(back.size(), profiles.size());
    for (std::size_t i = 0; i < back.size(); ++i)
        EXPECT_EQ(back[i], profiles[i]);

    std::stringstream again;
    for (const auto &p : back)
        write_cir_record(again, p);
    std::stringstream first;
    for (const auto &p : profiles)
        write_cir_record(first, p);
    EXPECT_EQ(again.str(), first.str());
}

TEST(CirRecord, SkipsBlankAndCommentLines)
{
    std::istringstream is("# header\n\n   \n0 1 1e-9 2 0.5 0.25\n# trailing\n");
    const auto r = read_cir_records(is);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].anchor_id, 1);
    EXPECT_EQ(r[0].taps, (std::vector<double>{0.5, 0.25}));
}

TEST(CirRecord, MalformedInputIsRejected)
{
    auto parse = [](const char *text) {
        std::istringstream is(text);
        return read_cir_records(is);
    };
    EXPECT_THROW(parse("0 1 1e-9 3 0.5 0.25\n"), ParseError);      // too few taps
    EXPECT_THROW(parse("0 1 1e-9 1 0.5 0.25\n"), ParseError);      // too many taps
    EXPECT_THROW(parse("0 1 1e-9 2 0.5 -0.25\n"), ParseError);     // negative magnitude
    EXPECT_THROW(parse("0 x 1e-9 1 0.5\n"), ParseError);           // bad anchor id
    EXPECT_THROW(parse("0 1 0 1 0.5\n"), ParseError);              // zero tap spacing
    EXPECT_THROW(parse("0 1\n"), ParseError);                      // truncated record
    EXPECT_THROW(parse("0 1 1e-9 99999999999 0.5\n"), ParseError); // absurd count
}

TEST(CirFile, WriteReadAndMissingFile)
{
    const auto dir = std::filesystem::temp_directory_path() / "smtrack_cir_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "cir.txt").string();
    const std::vector<CirProfile> profiles{{1, 0.0, 1e-9, {0.1, 0.2}}, {2, 0.0, 1e-9, {0.3, 0.4}}};
    write_cir_file(path, profiles);
    EXPECT_EQ(read_cir_file(path), profiles);
    EXPECT_THROW(read_cir_file((dir / "missing.txt").string()), IoError);
    EXPECT_THROW(write_cir_file((dir / "no_such_dir" / "x.txt").string(), profiles), IoError);
    std::filesystem::remove_all(dir);
}
