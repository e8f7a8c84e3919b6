#include "wolley_cli.hpp"

int main(int argc, char** argv) { return wolley::cli::run(argc, argv); }
