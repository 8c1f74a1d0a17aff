#pragma once

#include <string>
#include <vector>

#include "invmeas/systems.hpp"

namespace invmeas {

/// Parses a polynomial over variables x1..xn from a string with the
/// grammar: expr := term (('+'|'-') term)*, term := factor ('*' factor)*,
/// factor := base ('^' uint)?, base := number | variable | '(' expr ')'
/// | '-' factor. Throws std::invalid_argument with a position on errors.
Polynomial parse_polynomial(const std::string& text, int n);

/// Loads a system definition from a JSON document:
/// {
///   "dimension": n, "time_kind": "discrete"|"continuous",
///   "box": {"lo": [...], "hi": [...]},
///   "cells": [{"inequalities": [...], "equalities": [...],
///              "map": [...], "box": {...}?}, ...],
///   "scaling": "auto"|"none", "observed": [axes]?  (optional)
/// }
/// With "auto" scaling the global box is mapped onto [-1,1]^n.
BenchmarkSpec load_system_file(const std::string& path);
BenchmarkSpec parse_system_json(const std::string& text, const std::string& name);

/// Resolves a builtin benchmark name or a path to a definition file.
BenchmarkSpec resolve_system(const std::string& name_or_path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Moment table CSV with one "multi-index" column (space-separated
/// exponents) and one value column.
void write_moment_csv(const std::string& path, const MomentVector& y);

void write_cloud_csv(const std::string& path, const PointCloud& cloud);
PointCloud read_cloud_csv(const std::string& path);

std::string format_float(double v);  // 17 significant digits

}  // namespace invmeas
