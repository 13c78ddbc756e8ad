#include <iostream>

#include "textfx/app/cli.hpp"

int main(int argc, char** argv) { return textfx::app::run_cli(argc, argv, std::cout, std::cerr); }
