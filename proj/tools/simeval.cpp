#include "simeval/cli.hpp"

int main(int argc, char** argv) { return simeval::cli::run(argc, argv); }
