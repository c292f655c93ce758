#include "knnmap/cli.hpp"

int main(int argc, char** argv) { return knnmap::cli::run(argc, argv); }
