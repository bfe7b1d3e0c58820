#include "corrlab/cli.hpp"

int main(int argc, char** argv) { return corrlab::cli::main_entry(argc, argv); }
