// Reads one JSON request, prints one JSON response on stdout.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tdz/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Zero-divisor and topological-divisor-of-zero analysis for JSON-described elements"};
  std::string input_path;
  bool from_stdin = false;
  bool pretty = false;
  tdz::io::RunOptions options;
  double eps_norm = 0.0;
  std::size_t n_witness = 0;

  auto* input_opt = app.add_option("--input", input_path, "Read the request from this file")->check(CLI::ExistingFile);
  auto* stdin_opt = app.add_flag("--stdin", from_stdin, "Read the request from standard input");
  input_opt->excludes(stdin_opt);
  auto* eps_opt = app.add_option("--tolerance-eps-norm", eps_norm, "Override eps_norm")->check(CLI::PositiveNumber);
  auto* nw_opt = app.add_option("--n-witness", n_witness, "Witness indices checked by certify")->check(CLI::Range(3, 1000000));
  app.add_flag("--pretty", pretty, "Indent the JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tdz::io::kExitInput;
  }
  if (*eps_opt) options.eps_norm = eps_norm;
  if (*nw_opt) options.n_witness = n_witness;

  std::string text;
  if (!input_path.empty()) {
    std::ifstream in(input_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot open " << input_path << "\n";
      return tdz::io::kExitInput;
    }
    text.assign(std::istreambuf_iterator<char>(in), {});
  } else if (from_stdin) {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::cerr << "error: pass --input FILE or --stdin\n" << app.help();
    return tdz::io::kExitInput;
  }

  const tdz::io::RunResult result = tdz::io::run_text(text, options);
  if (!result.diagnostic.empty()) std::cerr << "error: " << result.diagnostic << "\n";
  std::ostringstream out;
  out << result.body.dump(pretty ? 2 : -1) << "\n";
  std::cout << out.str() << std::flush;
  return result.exit_code;
}
