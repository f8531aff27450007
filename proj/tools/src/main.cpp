#include <iostream>

#include "lpai_app/commands.hpp"

int main(int argc, char** argv) { return lpai::app::dispatch(argc, argv, std::cout, std::cerr); }
