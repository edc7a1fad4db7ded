#include "cli.hpp"

int main(int argc, char** argv) { return cframe::cli::run(argc, argv); }
