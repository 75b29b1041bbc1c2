#ifndef MPQP_PROBLEM_IO_HPP_
#define MPQP_PROBLEM_IO_HPP_

#include <filesystem>
#include <string>

#include "mpqp/problem.hpp"

namespace mpqp {

/// Parses a problem document of the form
///   {"s": int, "m": int, "n": int,
///    "H": [[...]], "G": [[...]], "W": [...], "S": [[...]]}
/// with row-major nested arrays of finite doubles. Throws ParseError with
/// the offending field named, or the usual validation errors.
Problem load_problem(const std::string& text);

Problem load_problem_file(const std::filesystem::path& path);

/// Serializes a problem so that load_problem(save_problem(p)) reproduces
/// every matrix entry bit-identically.
std::string save_problem(const Problem& p);

}  // namespace mpqp

#endif  // MPQP_PROBLEM_IO_HPP_
