#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "paramp/field.hpp"

namespace paramp {

struct LoadedField {
  RealField field;
  std::string quantity;
};

// CSV: "# n=<n> extent=<L> quantity=<name>" then n rows of n values,
// row-major, 17 significant digits.
void write_csv(std::ostream& os, const RealField& field, const std::string& quantity);
void write_csv(const std::filesystem::path& path, const RealField& field,
               const std::string& quantity);
LoadedField read_csv(std::istream& is);
LoadedField read_csv(const std::filesystem::path& path);

// Binary 16-bit PGM (P5), min-max normalised; the mapping is recorded in a
// "# quantity=<name> min=<v> max=<v>" comment line.
void write_pgm(std::ostream& os, const RealField& field, const std::string& quantity);
void write_pgm(const std::filesystem::path& path, const RealField& field,
               const std::string& quantity);

}  // namespace paramp
