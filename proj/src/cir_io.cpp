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

#include "smtrack/cir_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace smtrack
{
namespace
{
template <typename T> T parse_number(std::string_view text, const char *what, std::size_t line)
{
    T value{};
    const auto *first = text.data();
    const auto *last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError("line " + std::to_string(line) + ": bad " + what + " '" + std::string(text) + "'");
    return value;
}

class Tokenizer
{
  public:
    explicit Tokenizer(std::string_view s) : s_(s) {}

    bool next(std::string_view &tok)
    {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r'))
            ++pos_;
        if (pos_ >= s_.size())
            return false;
        const std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != '\r')
            ++pos_;
        tok = s_.substr(start, pos_ - start);
        return true;
    }

  private:
    std::string_view s_;
    std::size_t pos_ = 0;
};
} // namespace

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) { return parse_number<double>(text, "number", 0); }

void write_cir_record(std::ostream &os, const CirProfile &profile)
{
    os << format_double(profile.timestamp) << ' ' << profile.anchor_id << ' ' << format_double(profile.tap_spacing)
       << ' ' << profile.taps.size();
    for (double t : profile.taps)
        os << ' ' << format_double(t);
    os << '\n';
}

std::vector<CirProfile> read_cir_records(std::istream &is)
{
    std::vector<CirProfile> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line))
    {
        ++line_no;
        Tokenizer tok(line);
        std::string_view t;
        if (!tok.next(t) || t.front() == '#')
            continue;

        CirProfile p;
        p.timestamp = parse_number<double>(t, "timestamp", line_no);
        std::string_view field;
        if (!tok.next(field))
            throw ParseError("line " + std::to_string(line_no) + ": missing anchor_id");
        p.anchor_id = parse_number<int>(field, "anchor_id", line_no);
        if (!tok.next(field))
            throw ParseError("line " + std::to_string(line_no) + ": missing tap_spacing");
        p.tap_spacing = parse_number<double>(field, "tap_spacing", line_no);
        if (!(p.tap_spacing > 0.0))
            throw ParseError("line " + std::to_string(line_no) + ": tap_spacing must be > 0");
        if (!tok.next(field))
            throw ParseError("line " + std::to_string(line_no) + ": missing tap count");
        const auto n = parse_number<std::size_t>(field, "tap count", line_no);

        p.taps.reserve(std::min<std::size_t>(n, 1u << 16));
        while (tok.next(field))
        {
            const double v = parse_number<double>(field, "tap", line_no);
            if (!(v >= 0.0))
                throw ParseError("line " + std::to_string(line_no) + ": negative tap magnitude");
            p.taps.push_back(v);
        }
        if (p.taps.size() != n)
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(n) + " taps, got " +
                             std::to_string(p.taps.size()));
        out.push_back(std::move(p));
    }
    return out;
}

void write_cir_file(const std::string &path, const std::vector<CirProfile> &profiles)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    for (const auto &p : profiles)
        write_cir_record(os, p);
    if (!os)
        throw IoError("write to '" + path + "' failed");
}

std::vector<CirProfile> read_cir_file(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open '" + path + "'");
    return read_cir_records(is);
}

} // namespace smtrack
