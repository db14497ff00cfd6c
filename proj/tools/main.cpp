#include "commands.hpp"

int main(int argc, char** argv) { return fermiopt::cli::run(argc, argv); }
