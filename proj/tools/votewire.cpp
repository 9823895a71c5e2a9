#include <iostream>

#include "votewire/commands.hpp"

int main(int argc, char** argv) { return votewire::commands::RunCli(argc, argv, std::cout, std::cerr); }
