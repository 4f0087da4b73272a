#include "kcbs_cli.hpp"

int main(int argc, char** argv) { return kcbs::cli::run(argc, argv); }
