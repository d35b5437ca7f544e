#include "spanperc/cli.hpp"

int main(int argc, char** argv) { return spanperc::cli::run(argc, argv); }
