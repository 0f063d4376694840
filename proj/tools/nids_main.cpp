#include "nids/cli.hpp"

int main(int argc, char** argv) { return nids::run_cli(argc, argv); }
