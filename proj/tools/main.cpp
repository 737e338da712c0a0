#include "cli/commands.hpp"

int main(int argc, char** argv) { return cvree::cli::run(argc, argv); }
