#include "rungscope/cli.hpp"

int main(int argc, char** argv) { return rungscope::run_command(argc, argv); }
