#include <minball/cli.hpp>

int main(int argc, char** argv) { return minball::cli::run(argc, argv); }
