#include "lwgcn/cli.hpp"

int main(int argc, char** argv) { return lwgcn::cli::run_cli(argc, argv); }
