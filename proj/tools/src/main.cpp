#include "heis_cli/cli.hpp"

int main(int argc, char** argv) { return heis_cli::run(std::vector<std::string>(argv, argv + argc)); }
