#include "bgwr/cli.hpp"

int main(int argc, char** argv) { return bgwr::cli::main(argc, argv); }
