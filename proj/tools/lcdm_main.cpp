#include "lcdm/cli_commands.hpp"

int main(int argc, char** argv) {
  return lcdm::cli::main_with_args(argc, argv);
}
