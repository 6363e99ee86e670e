#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bigiso/report.hpp"

using namespace bigiso;

namespace {

int emit(const Json& report, const std::string& output) {
  const std::string text = report.dump(2) + "\n";
  if (output.empty() || output == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "bigiso: cannot write " << output << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for big-isotropic structures with polynomial frames"};
  app.require_subcommand(1, 1);

  std::string path, grid_text, output, format = "json";
  std::uint64_t seed = 1;
  bool timing = false;

  for (const auto& name : commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("file", path, "structure document")->required();
    sub->add_option("--grid", grid_text, "sample grid, lo..hi with optional 'cap N' (use --grid=-2..2)");
    sub->add_option("--seed", seed, "seed for randomized axiom checks");
    sub->add_option("--output,-o", output, "write the report here instead of standard output");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json"}));
    sub->add_flag("--timing", timing, "add per-check timings (output is then not reproducible)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_input_error;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  auto input_error = [&](const std::string& message, std::size_t line = 0, std::size_t column = 0) {
    std::cerr << "bigiso: " << path << ": " << message << "\n";
    emit(input_error_report(command, path, message, line, column), output);
    return static_cast<int>(exit_input_error);
  };

  RunOptions opt;
  opt.seed = seed;
  opt.timing = timing;
  if (!grid_text.empty()) {
    try {
      opt.grid = parse_grid(grid_text);
      opt.grid_from_flag = true;
    } catch (const std::exception& e) {
      return input_error(std::string("bad --grid: ") + e.what());
    }
  }

  StructureDocument doc;
  try {
    doc = load_document(path);
  } catch (const ParseError& e) {
    return input_error(e.message(), e.line(), e.column());
  } catch (const std::exception& e) {
    return input_error(e.what());
  }

  RunResult result;
  try {
    result = run_command(command, doc, path, opt);
  } catch (const MissingBlockError& e) {
    return input_error(e.what());
  }
  if (emit(result.report, output) != 0) return exit_input_error;
  return result.exit_code;
}
