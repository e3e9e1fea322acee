#include "pngd/cli.hpp"

int main(int argc, char** argv) { return pngd::cli::run(argc, argv); }
