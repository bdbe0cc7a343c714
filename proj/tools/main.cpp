#include "magbell/commands.hpp"

int main(int argc, char** argv) { return magbell::run_cli(argc, argv); }
