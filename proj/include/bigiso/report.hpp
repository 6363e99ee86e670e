#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bigiso/document.hpp"

namespace bigiso {

using Json = nlohmann::ordered_json;

enum ExitCode : int { exit_pass = 0, exit_check_failed = 1, exit_input_error = 2 };

struct RunOptions {
  Grid grid;
  bool grid_from_flag = false;  // otherwise the document's grid, if any, wins
  std::uint64_t seed = 1;
  bool timing = false;
};

/// A document lacks a block the command needs.
class MissingBlockError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& commands();

struct RunResult {
  Json report;
  int exit_code = exit_pass;
};

/// Runs one command on a parsed document. Single commands pass when every check passes;
/// report-all compares each check with the document's expectations where given.
RunResult run_command(const std::string& command, const StructureDocument& doc, const std::string& source,
                      const RunOptions& opt);

/// Report for an input error (parse failure, missing block, unreadable file).
Json input_error_report(const std::string& command, const std::string& source, const std::string& message,
                        std::size_t line = 0, std::size_t column = 0);

}  // namespace bigiso
