#include "ral/cli.hpp"

int main(int argc, char** argv) { return ral::cli::main_impl(argc, argv); }
