#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "gmt/gridding.hpp"
#include "gmt/varifold.hpp"

namespace gmt::io {

/// Shortest decimal text that parses back to exactly `value`; locale-free.
std::string format_double(double value);
double parse_double(std::string_view text);

// Atomic varifold text format:
//   varifold-atoms v1 n=<n> d=<d> count=<N> [domain=<lo_1>,...,<lo_n>,<hi_1>,...,<hi_n>]
//   x_1 ... x_n | b_11 ... b_1n ; ... ; b_d1 ... b_dn | m
void write_atoms(std::ostream& os, const AtomicVarifold& v);
AtomicVarifold read_atoms(std::istream& is);

// Discrete varifold text format:
//   varifold-grid v1 n=<n> d=<d> h=<h> origin=<o_1>,...,<o_n> counts=<c_1>,...,<c_n>
//   i_1 ... i_n | b_11 ... b_1n ; ... ; b_d1 ... b_dn | m
void write_grid(std::ostream& os, const DiscreteVarifold& dv);
DiscreteVarifold read_grid(std::istream& is);

enum class FileKind { atoms, grid };
FileKind detect_kind(const std::filesystem::path& path);

AtomicVarifold load_atoms(const std::filesystem::path& path);
DiscreteVarifold load_grid(const std::filesystem::path& path);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace gmt::io
