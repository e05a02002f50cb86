#include "cli.hpp"

int main(int argc, char** argv) { return pmelab::cli::main_entry(argc, argv); }
