#include "cli.hpp"

int main(int argc, char** argv) { return cur::cli::run(argc, argv); }
