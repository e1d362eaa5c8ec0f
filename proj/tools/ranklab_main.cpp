#include "ranklab/lab.hpp"

int main(int argc, char** argv) { return ranklab::cli_main(argc, argv); }
