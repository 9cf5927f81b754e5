#include "cli.hpp"

int main(int argc, char** argv) { return netspread::cli::run(argc, argv); }
