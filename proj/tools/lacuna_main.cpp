#include "lacuna/cli.hpp"

int main(int argc, char** argv) { return lacuna::cli::run(argc, argv); }
