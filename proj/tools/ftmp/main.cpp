#include <iostream>

#include "ftmp/app.hpp"

int main(int argc, char** argv) { return ftmp::app::main_entry(argc, argv, std::cout, std::cerr); }
