#pragma once

#include "fgflutter/material.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fgflutter {

/// Built-in constituents: "Si3N4", "SUS304" and a temperature-independent
/// "Aluminium" used for isotropic benchmark runs.
Constituent builtin_material(std::string_view name);
std::vector<std::string> builtin_material_names();

/// Silicon nitride over stainless steel, the reference graded pair.
ConstituentSet si3n4_sus304();

/// Reads user constituents from INI-style text. One section per material:
///
///   [Zirconia]
///   E     = P0, Pm1, P1, P2, P3
///   alpha = P0, Pm1, P1, P2, P3
///   rho   = 5700
///   kappa = 2.09
///   nu    = 0.3
///
/// A scalar E or alpha is read as a temperature-independent value.
std::map<std::string, Constituent> load_materials(std::istream& in);
std::map<std::string, Constituent> load_materials_file(const std::filesystem::path& path);

/// Looks the name up in `user` first, then in the built-in table.
Constituent find_material(std::string_view name, const std::map<std::string, Constituent>& user = {});

}  // namespace fgflutter
