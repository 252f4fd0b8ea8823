#include "fracdec/cli.hpp"

int main(int argc, char** argv) { return fracdec::cli::run(argc, argv); }
