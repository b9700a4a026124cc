#include "whisk/cli.hpp"

int main(int argc, char** argv) { return whisk::cli::run(argc, argv); }
