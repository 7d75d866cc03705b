#include <iostream>

#include "perc_bound_app.hpp"

int main(int argc, char** argv) { return percbound::cli::run(argc, argv, std::cout, std::cerr); }
