#include "commands.hpp"

int main(int argc, char **argv) { return airy::cli::run(argc, argv); }
