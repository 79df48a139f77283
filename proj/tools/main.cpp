#include "trinom/cli.hpp"

int main(int argc, char** argv) { return trinom::cli::run(argc, argv); }
