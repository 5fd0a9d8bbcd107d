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

#ifndef SMTRACK_CIR_IO_HPP
#define SMTRACK_CIR_IO_HPP

// CIR record files: one line per (timestamp, anchor),
//
//   t_seconds anchor_id tap_spacing_seconds n tap_0 tap_1 ... tap_{n-1}
//
// Numbers are written in shortest round-trip decimal form, so a
// write -> read -> write cycle is byte-exact.

#include "smtrack/channel.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace smtrack
{
struct ParseError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(std::string_view text);

void write_cir_record(std::ostream &os, const CirProfile &profile);
std::vector<CirProfile> read_cir_records(std::istream &is);

void write_cir_file(const std::string &path, const std::vector<CirProfile> &profiles);
std::vector<CirProfile> read_cir_file(const std::string &path);

} // namespace smtrack

#endif
